#ifndef FHSOP_FUNNEL_HEAP_HPP
#define FHSOP_FUNNEL_HEAP_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "fhsop/arena.hpp"
#include "fhsop/counters.hpp"
#include "fhsop/entry.hpp"
#include "fhsop/kmerger.hpp"

namespace fhsop {

// Cache-oblivious priority queue: an insertion buffer S_{0,1} followed by a
// chain of links whose mergers grow doubly exponentially (k_1 = 2,
// k_{i+1} = next power of two >= k_i^{4/3}, s_i = k_i^3). Link i is laid out
// in its arena as c_i, A_i, v_i, B_i, K_i, S_{i,1..k_i}; links are allocated
// lazily on the first sweep that needs them.
class FunnelHeap {
public:
    enum class SweepMode { Canonical, Refined };

    struct Options {
        SweepMode mode = SweepMode::Canonical;
        MemoryTraceSink* sink = nullptr;
        std::uint64_t max_words = 0;
        // When set, equal-order entries found during S_{0,1} insertion or
        // while forming a sweep stream are handed out instead of stored.
        std::function<void(const HeapEntry&)> duplicate_handler;
        bool record_lifetimes = false;
    };

    FunnelHeap() : FunnelHeap(Options{}) {}
    explicit FunnelHeap(Options opt);

    // Rebind the chaining callback; meant for wiring a chain store that
    // itself lives in this heap's arena. Set before the first insert.
    void set_duplicate_handler(std::function<void(const HeapEntry&)> handler) {
        duplicate_handler_ = std::move(handler);
    }

    std::uint64_t insert(std::int64_t order, std::uint64_t payload = 0);
    HeapEntry extract_max();

    // Order of the current maximum without removing it. Fills A_1 at most
    // once; a subsequent extract or peek of the same element costs no FILL.
    std::optional<std::int64_t> peek_max_order();

    bool empty() const { return live_total_ == 0; }
    std::uint64_t size() const { return live_total_; }
    std::size_t links_allocated() const { return links_.size(); }

    Counters& counters() { return counters_; }
    const Counters& counters() const { return counters_; }
    Arena& arena() { return arena_; }

    std::uint64_t fill_root_invocations() const { return fill_root_invocations_; }
    std::uint64_t sweep_capacity_fallbacks() const { return sweep_capacity_fallbacks_; }
    std::uint64_t link_counter(std::size_t link_1based) const;
    std::uint64_t input_occupancy(std::size_t link_1based, std::size_t j_1based) const;

    // One line per buffer: "link <i> <name> <occupancy>/<capacity>".
    void debug_dump(std::ostream& os) const;
    bool debug_buffers_sorted();
    // Replica scan: no two equal orders within any single input buffer.
    bool debug_input_buffers_replica_free();

private:
    struct Link {
        std::uint32_t index;
        std::uint32_t k;
        std::uint64_t s;
        std::uint64_t c_addr;
        std::uint64_t c = 1; // 1..k+1; S_{i,c..k} are empty in canonical mode
        Buffer a;
        std::uint64_t v_state_addr;
        KMerger merger; // root output buffer is B_i
        std::vector<Buffer> inputs;
        std::uint64_t live = 0; // elements residing anywhere in this link
    };

    struct SweepPlan {
        std::size_t link;   // 1-based destination link
        std::uint32_t leaf; // 0-based destination input buffer
        bool consolidate = false;
        std::uint32_t j1 = 0;
        std::uint32_t j2 = 0;
    };

    class InputLeaves final : public LeafSource {
    public:
        InputLeaves(Arena& a, std::vector<Buffer>& bufs) : arena_(&a), bufs_(&bufs) {}
        std::uint64_t remaining(std::uint32_t leaf) const override {
            return (*bufs_)[leaf].count;
        }
        const HeapEntry& head(std::uint32_t leaf) override {
            return (*bufs_)[leaf].front(*arena_);
        }
        HeapEntry pop(std::uint32_t leaf) override {
            return (*bufs_)[leaf].pop_front_notrace(*arena_);
        }

    private:
        Arena* arena_;
        std::vector<Buffer>* bufs_;
    };

    Link& allocate_link();
    std::uint64_t suffix_live(std::size_t from_link_1based) const;
    void fill_v(std::size_t link_1based);
    void refill_a1_if_needed();

    void sweep();
    SweepPlan plan_sweep();
    std::uint64_t tail_estimate(std::size_t dest_link_1based) const;
    void consolidate_inputs(Link& link, std::uint32_t j1, std::uint32_t j2);
    void drain_buffer(Buffer& b, std::vector<std::vector<HeapEntry>>& runs);

    Arena arena_;
    Counters counters_;
    SweepMode mode_;
    std::function<void(const HeapEntry&)> duplicate_handler_;

    Buffer s01_;
    std::vector<std::unique_ptr<Link>> links_;
    std::uint64_t live_total_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t fill_root_invocations_ = 0;
    std::uint64_t sweep_capacity_fallbacks_ = 0;
};

} // namespace fhsop

#endif
