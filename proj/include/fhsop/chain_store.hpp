#ifndef FHSOP_CHAIN_STORE_HPP
#define FHSOP_CHAIN_STORE_HPP

#include <cstdint>
#include <vector>

#include "fhsop/arena.hpp"
#include "fhsop/entry.hpp"

namespace fhsop {

// Per-order chains of monomial products excluded from the priority queue:
// a static directory D indexed by order, each slot heading a chain grown in
// fixed chunks bump-allocated from the arena. Appends touch the directory
// slot and the chain tail, so batched descending-order appends stay
// stride-friendly; every append is also logged host-side for trace replay.
class ChainStore {
public:
    ChainStore(Arena& arena, std::int64_t deg_bound);

    void append(const HeapEntry& e);
    std::vector<HeapEntry> take(std::int64_t order);

    std::uint64_t pending() const { return pending_; }
    std::uint64_t total_appends() const { return total_appends_; }
    std::int64_t deg_bound() const { return deg_bound_; }

    bool order_slots_consistent() const; // every stored cursor sits under its own order

    // Orders in the sequence in which they received their first append.
    const std::vector<std::int64_t>& first_append_orders() const {
        return first_append_orders_;
    }
    // Arena addresses touched by appends, in order (directory + chain slots).
    const std::vector<std::uint64_t>& append_trace() const { return append_trace_; }

private:
    static constexpr std::uint64_t kChunkCap = 8;

    struct Chunk {
        std::uint64_t base;
        std::uint64_t used = 0;
    };
    struct Chain {
        std::vector<Chunk> chunks;
        std::uint64_t len = 0;
    };

    Arena* arena_;
    std::int64_t deg_bound_;
    std::uint64_t dir_base_;
    std::vector<Chain> chains_;
    std::uint64_t pending_ = 0;
    std::uint64_t total_appends_ = 0;
    std::vector<std::int64_t> first_append_orders_;
    std::vector<std::uint64_t> append_trace_;
};

} // namespace fhsop

#endif
