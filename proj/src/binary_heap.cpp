#include "fhsop/binary_heap.hpp"

namespace fhsop {

namespace {
constexpr std::uint64_t kInitialCapacity = 1024;
}

BinaryMaxHeap::BinaryMaxHeap(MemoryTraceSink* sink, std::uint64_t max_words)
    : owned_arena_(sink, max_words), arena_(&owned_arena_) {
    slots_base_ = arena_->alloc(kInitialCapacity);
    capacity_ = kInitialCapacity;
    for (std::uint64_t w = 0; w < capacity_; ++w) arena_->touch(slots_base_ + w);
}

BinaryMaxHeap::BinaryMaxHeap(Arena& arena) : owned_arena_(nullptr), arena_(&arena) {
    slots_base_ = arena_->alloc(kInitialCapacity);
    capacity_ = kInitialCapacity;
    for (std::uint64_t w = 0; w < capacity_; ++w) arena_->touch(slots_base_ + w);
}

void BinaryMaxHeap::ensure_capacity(std::uint64_t need) {
    if (need <= capacity_) return;
    std::uint64_t new_cap = capacity_ * 2;
    while (new_cap < need) new_cap *= 2;
    std::uint64_t new_base = arena_->alloc(new_cap);
    for (std::uint64_t w = 0; w < new_cap; ++w) arena_->touch(new_base + w);
    for (std::uint64_t i = 0; i < size_; ++i)
        arena_->write(new_base + i, arena_->read(slots_base_ + i));
    slots_base_ = new_base;
    capacity_ = new_cap;
}

void BinaryMaxHeap::sift_up(std::uint64_t i, HeapEntry e) {
    while (i > 0) {
        std::uint64_t parent = (i - 1) / 2;
        const HeapEntry& pe = arena_->read(slots_base_ + parent);
        ++counters_.comparisons;
        if (entry_greater(e, pe)) {
            arena_->write(slots_base_ + i, pe);
            i = parent;
        } else {
            break;
        }
    }
    arena_->write(slots_base_ + i, e);
}

void BinaryMaxHeap::sift_down(std::uint64_t i, HeapEntry e) {
    while (true) {
        std::uint64_t left = 2 * i + 1;
        if (left >= size_) break;
        std::uint64_t best = left;
        HeapEntry be = arena_->read(slots_base_ + left);
        if (left + 1 < size_) {
            const HeapEntry& re = arena_->read(slots_base_ + left + 1);
            ++counters_.comparisons;
            if (entry_greater(re, be)) {
                best = left + 1;
                be = re;
            }
        }
        ++counters_.comparisons;
        if (entry_greater(be, e)) {
            arena_->write(slots_base_ + i, be);
            i = best;
        } else {
            break;
        }
    }
    arena_->write(slots_base_ + i, e);
}

std::uint64_t BinaryMaxHeap::insert(std::int64_t order, std::uint64_t payload) {
    std::uint64_t seq = next_seq_++;
    insert_entry({order, seq, payload});
    return seq;
}

void BinaryMaxHeap::insert_entry(const HeapEntry& e) {
    ensure_capacity(size_ + 1);
    counters_.on_insert_seq(e.seq);
    ++counters_.inserts;
    ++size_;
    sift_up(size_ - 1, e);
    counters_.note_size(size_);
    if (e.seq >= next_seq_) next_seq_ = e.seq + 1;
}

HeapEntry BinaryMaxHeap::extract_max() {
    if (size_ == 0) throw EmptyHeap{};
    HeapEntry top = arena_->read(slots_base_);
    HeapEntry last = arena_->read(slots_base_ + size_ - 1);
    --size_;
    if (size_ > 0) sift_down(0, last);
    ++counters_.extracts;
    counters_.on_extract_seq(top.seq);
    return top;
}

const HeapEntry& BinaryMaxHeap::peek_max() {
    if (size_ == 0) throw EmptyHeap{};
    return arena_->read(slots_base_);
}

NaiveChainedHeap::NaiveChainedHeap(MemoryTraceSink* sink, std::uint64_t max_words)
    : arena_(sink, max_words), inner_(arena_) {}

std::uint64_t NaiveChainedHeap::insert(std::int64_t order, std::uint64_t payload) {
    std::uint64_t seq = next_seq_++;
    // Replica search is a linear scan of the slot array, stopping at the
    // first match; the module invariant guarantees at most one.
    std::uint64_t n = inner_.size();
    for (std::uint64_t i = 0; i < n; ++i) {
        const HeapEntry& s = inner_.arena().read(inner_.slot_addr(i));
        ++counters().comparisons;
        if (s.order == order) {
            std::uint64_t addr = arena_.alloc(1);
            HeapEntry e{order, seq, payload};
            arena_.write(addr, e);
            chains_[order].push_back({addr, e});
            ++chained_total_;
            ++counters().chain_events;
            ++counters().inserts;
            counters().note_size(inner_.size());
            return seq;
        }
    }
    inner_.insert_entry({order, seq, payload});
    return seq;
}

std::pair<HeapEntry, std::vector<HeapEntry>> NaiveChainedHeap::extract_max() {
    HeapEntry top = inner_.extract_max();
    std::vector<HeapEntry> chained;
    auto it = chains_.find(top.order);
    if (it != chains_.end()) {
        chained.reserve(it->second.size());
        for (const ChainSlot& c : it->second) {
            arena_.touch(c.addr);
            chained.push_back(c.entry);
        }
        chained_total_ -= chained.size();
        chains_.erase(it);
    }
    return {top, std::move(chained)};
}

} // namespace fhsop
