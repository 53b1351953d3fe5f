#include "fhsop/chain_store.hpp"

#include <cassert>
#include <stdexcept>

namespace fhsop {

ChainStore::ChainStore(Arena& arena, std::int64_t deg_bound)
    : arena_(&arena), deg_bound_(deg_bound) {
    if (deg_bound < 0) throw std::invalid_argument("negative chain store degree bound");
    dir_base_ = arena_->alloc(static_cast<std::uint64_t>(deg_bound) + 1);
    chains_.resize(static_cast<std::size_t>(deg_bound) + 1);
    // Directory construction traffic; the per-append trace starts clean.
    for (std::int64_t o = 0; o <= deg_bound; ++o)
        arena_->touch(dir_base_ + static_cast<std::uint64_t>(o));
}

void ChainStore::append(const HeapEntry& e) {
    assert(e.order >= 0 && e.order <= deg_bound_);
    Chain& chain = chains_[static_cast<std::size_t>(e.order)];
    std::uint64_t dir_addr = dir_base_ + static_cast<std::uint64_t>(e.order);
    arena_->touch(dir_addr);
    append_trace_.push_back(dir_addr);
    if (chain.len == 0) first_append_orders_.push_back(e.order);
    if (chain.chunks.empty() || chain.chunks.back().used == kChunkCap)
        chain.chunks.push_back(Chunk{arena_->alloc(kChunkCap)});
    Chunk& tail = chain.chunks.back();
    std::uint64_t slot = tail.base + tail.used;
    arena_->write(slot, e);
    append_trace_.push_back(slot);
    ++tail.used;
    ++chain.len;
    ++pending_;
    ++total_appends_;
}

std::vector<HeapEntry> ChainStore::take(std::int64_t order) {
    if (order < 0 || order > deg_bound_) return {};
    Chain& chain = chains_[static_cast<std::size_t>(order)];
    if (chain.len == 0) return {};
    arena_->touch(dir_base_ + static_cast<std::uint64_t>(order));
    std::vector<HeapEntry> out;
    out.reserve(chain.len);
    for (const Chunk& c : chain.chunks)
        for (std::uint64_t i = 0; i < c.used; ++i) out.push_back(arena_->read(c.base + i));
    pending_ -= chain.len;
    chain.chunks.clear();
    chain.len = 0;
    return out;
}

bool ChainStore::order_slots_consistent() const {
    for (std::size_t o = 0; o < chains_.size(); ++o)
        for (const Chunk& c : chains_[o].chunks)
            for (std::uint64_t i = 0; i < c.used; ++i)
                if (arena_->peek_raw(c.base + i).order != static_cast<std::int64_t>(o))
                    return false;
    return true;
}

} // namespace fhsop
