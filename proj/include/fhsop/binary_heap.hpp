#ifndef FHSOP_BINARY_HEAP_HPP
#define FHSOP_BINARY_HEAP_HPP

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fhsop/arena.hpp"
#include "fhsop/counters.hpp"
#include "fhsop/entry.hpp"

namespace fhsop {

// Implicit binary max-heap over arena slots, instrumented identically to the
// funnel heap so counter tables line up.
class BinaryMaxHeap {
public:
    explicit BinaryMaxHeap(MemoryTraceSink* sink = nullptr, std::uint64_t max_words = 0);

    // Takes an externally owned arena so that a wrapper (chained variant) can
    // co-locate its chains with the slot array.
    explicit BinaryMaxHeap(Arena& arena);

    std::uint64_t insert(std::int64_t order, std::uint64_t payload = 0);
    void insert_entry(const HeapEntry& e); // pre-stamped seq
    HeapEntry extract_max();
    const HeapEntry& peek_max();

    bool empty() const { return size_ == 0; }
    std::uint64_t size() const { return size_; }

    Counters& counters() { return counters_; }
    const Counters& counters() const { return counters_; }
    Arena& arena() { return *arena_; }

    // Untraced slot read for replica scans by the chained wrapper.
    std::uint64_t slot_addr(std::uint64_t i) const { return slots_base_ + i; }

private:
    void ensure_capacity(std::uint64_t need);
    void sift_up(std::uint64_t i, HeapEntry e);
    void sift_down(std::uint64_t i, HeapEntry e);

    Arena owned_arena_;
    Arena* arena_;
    Counters counters_;
    std::uint64_t slots_base_ = 0;
    std::uint64_t capacity_ = 0;
    std::uint64_t size_ = 0;
    std::uint64_t next_seq_ = 0;
};

// Baseline chaining variant: duplicates never occupy a second heap slot, at
// the price of a linear replica scan over the live slot array on every
// insert. The scan cost lands in the comparison counter, which is the point
// of the baseline.
class NaiveChainedHeap {
public:
    explicit NaiveChainedHeap(MemoryTraceSink* sink = nullptr, std::uint64_t max_words = 0);

    std::uint64_t insert(std::int64_t order, std::uint64_t payload = 0);
    // Returns the max slot entry together with its whole chain (chain emptied).
    std::pair<HeapEntry, std::vector<HeapEntry>> extract_max();
    const HeapEntry& peek_max() { return inner_.peek_max(); }

    bool empty() const { return inner_.empty(); }
    std::uint64_t heap_size() const { return inner_.size(); }
    std::uint64_t chained_total() const { return chained_total_; }

    Counters& counters() { return inner_.counters(); }
    const Counters& counters() const { return inner_.counters(); }

private:
    struct ChainSlot {
        std::uint64_t addr;
        HeapEntry entry;
    };

    Arena arena_;
    BinaryMaxHeap inner_;
    std::unordered_map<std::int64_t, std::vector<ChainSlot>> chains_;
    std::uint64_t chained_total_ = 0;
    std::uint64_t next_seq_ = 0;
};

} // namespace fhsop

#endif
