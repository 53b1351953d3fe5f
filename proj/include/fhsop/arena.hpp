#ifndef FHSOP_ARENA_HPP
#define FHSOP_ARENA_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "fhsop/entry.hpp"
#include "fhsop/errors.hpp"
#include "fhsop/trace.hpp"

namespace fhsop {

// Flat address space of HeapEntry slots. Allocations are bump-style,
// contiguous and never move, so a word address identifies a slot for the
// whole lifetime of the arena. Backing memory is committed per chunk on
// first touch; large links reserve address space without paying for it
// until a sweep actually writes there.
class Arena {
public:
    static constexpr std::uint64_t kChunkBits = 16; // 65536 slots per chunk
    static constexpr std::uint64_t kChunkSlots = 1ull << kChunkBits;

    explicit Arena(MemoryTraceSink* sink = nullptr, std::uint64_t max_words = 0)
        : sink_(sink), max_words_(max_words) {}

    Arena(const Arena&) = delete;
    Arena& operator=(const Arena&) = delete;

    std::uint64_t alloc(std::uint64_t words) {
        if (max_words_ != 0 && next_free_ + words > max_words_)
            throw ArenaExhausted("arena limit of " + std::to_string(max_words_) +
                                 " words exceeded");
        std::uint64_t base = next_free_;
        next_free_ += words;
        return base;
    }

    const HeapEntry& read(std::uint64_t addr) {
        if (sink_) sink_->on_access(addr);
        return slot(addr);
    }

    void write(std::uint64_t addr, const HeapEntry& e) {
        if (sink_) sink_->on_access(addr);
        slot(addr) = e;
    }

    // Metadata word access (counters, merger state): traffic without a value.
    void touch(std::uint64_t addr) {
        if (sink_) sink_->on_access(addr);
    }

    // Untraced accessors: staging inputs before a measured phase, debug scans.
    const HeapEntry& peek_raw(std::uint64_t addr) { return slot(addr); }
    void write_raw(std::uint64_t addr, const HeapEntry& e) { slot(addr) = e; }

    std::uint64_t used_words() const { return next_free_; }
    std::uint64_t committed_words() const { return committed_chunks_ * kChunkSlots; }

    void set_sink(MemoryTraceSink* sink) { sink_ = sink; }
    MemoryTraceSink* sink() const { return sink_; }

private:
    HeapEntry& slot(std::uint64_t addr) {
        std::uint64_t chunk = addr >> kChunkBits;
        if (chunk >= chunks_.size()) chunks_.resize(chunk + 1);
        if (!chunks_[chunk]) {
            chunks_[chunk] = std::make_unique<HeapEntry[]>(kChunkSlots);
            ++committed_chunks_;
        }
        return chunks_[chunk][addr & (kChunkSlots - 1)];
    }

    MemoryTraceSink* sink_;
    std::uint64_t max_words_;
    std::uint64_t next_free_ = 0;
    std::uint64_t committed_chunks_ = 0;
    std::vector<std::unique_ptr<HeapEntry[]>> chunks_;
};

// Circular FIFO over an arena region, sorted descending from front to back.
// Producers append ever-smaller elements at the back; consumers pop the
// current maximum at the front. The region's words are charged to the trace
// once, when the structure first engages the buffer: that is when its
// backing storage gets constructed.
struct Buffer {
    std::uint64_t base = 0;
    std::uint64_t cap = 0;
    std::uint64_t head = 0;
    std::uint64_t count = 0;
    bool primed = false;

    bool empty() const { return count == 0; }
    bool full() const { return count == cap; }

    std::uint64_t addr(std::uint64_t logical) const {
        return base + (head + logical) % cap;
    }

    const HeapEntry& front(Arena& a) const { return a.read(addr(0)); }

    HeapEntry pop_front(Arena& a) {
        HeapEntry e = a.read(addr(0));
        head = (head + 1) % cap;
        --count;
        return e;
    }

    // Pop without reporting the read; callers use this right after front().
    HeapEntry pop_front_notrace(Arena& a) {
        HeapEntry e = a.peek_raw(addr(0));
        head = (head + 1) % cap;
        --count;
        return e;
    }

    void push_back(Arena& a, const HeapEntry& e) {
        if (!primed) {
            for (std::uint64_t w = 0; w < cap; ++w) a.touch(base + w);
            primed = true;
        }
        a.write(addr(count), e);
        ++count;
    }

    void reset() {
        head = 0;
        count = 0;
    }

    // Untraced helpers for snapshots taken by tests and debug scans.
    const HeapEntry& peek_raw(Arena& a, std::uint64_t logical) const {
        return a.peek_raw(addr(logical));
    }
};

} // namespace fhsop

#endif
