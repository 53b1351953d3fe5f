#ifndef FHSOP_KMERGER_HPP
#define FHSOP_KMERGER_HPP

#include <cstdint>
#include <vector>

#include "fhsop/arena.hpp"
#include "fhsop/counters.hpp"
#include "fhsop/entry.hpp"

namespace fhsop {

// Supplies the k sorted input streams of a merger. Concrete sources are
// external stream cursors (standalone benchmarks) or the S_{i,j} input
// buffers of a funnel heap link.
class LeafSource {
public:
    virtual ~LeafSource() = default;
    virtual std::uint64_t remaining(std::uint32_t leaf) const = 0;
    virtual const HeapEntry& head(std::uint32_t leaf) = 0; // traced read
    virtual HeapEntry pop(std::uint32_t leaf) = 0;         // untraced; head() was just read
};

// Streams staged in an arena region; merge-time reads are traced.
class StreamLeafSource final : public LeafSource {
public:
    struct Stream {
        std::uint64_t base;
        std::uint64_t len;
        std::uint64_t pos = 0;
    };

    StreamLeafSource(Arena& arena, std::vector<Stream> streams)
        : arena_(&arena), streams_(std::move(streams)) {}

    std::uint64_t remaining(std::uint32_t leaf) const override {
        if (leaf >= streams_.size()) return 0; // missing streams bind to empty
        return streams_[leaf].len - streams_[leaf].pos;
    }
    const HeapEntry& head(std::uint32_t leaf) override {
        const Stream& s = streams_[leaf];
        return arena_->read(s.base + s.pos);
    }
    HeapEntry pop(std::uint32_t leaf) override {
        Stream& s = streams_[leaf];
        return arena_->peek_raw(s.base + s.pos++);
    }

private:
    Arena* arena_;
    std::vector<Stream> streams_;
};

// Static cache-oblivious k-merger: a binary merge tree over k = 2^d input
// streams with output buffer of k^3 and intermediate buffers sized by the
// recursive square-root split (capacities rounded up to powers of two),
// all laid out contiguously in the arena in van Emde Boas order.
class KMerger {
public:
    struct ChildRef {
        bool is_leaf;
        std::uint32_t idx; // node index or leaf index
    };

    struct Node {
        ChildRef left;
        ChildRef right;
        Buffer out;
        std::uint64_t state_addr;
        std::uint64_t cnt = 0;   // live elements in out + everything below
        std::uint32_t leaf_lo;   // leaf range covered by this subtree
        std::uint32_t leaf_hi;
    };

    // Allocates the output buffer first, then the internal structure, so a
    // funnel link's layout comes out as B_i followed by K_i.
    static KMerger build(std::uint32_t k, Arena& arena, Counters& counters,
                         std::uint64_t output_capacity);

    // One invocation: merge until the output buffer is full or every input
    // is exhausted. Never emits more than the output capacity per call.
    // Subtree counts must be current: prime() once after the leaves change
    // hands (build, sweep rewrite); merge-driven drains stay consistent.
    void fill(LeafSource& leaves);
    void prime(const LeafSource& leaves) { recompute_counts(leaves); }

    Buffer& output() { return nodes_[root_].out; }
    const Buffer& output() const { return nodes_[root_].out; }

    // Pop from the output buffer; caller has already read the head.
    HeapEntry pop_output_after_head() {
        HeapEntry e = nodes_[root_].out.pop_front_notrace(*arena_);
        --nodes_[root_].cnt;
        return e;
    }
    const HeapEntry& output_head() { return nodes_[root_].out.front(*arena_); }

    std::uint64_t live() const { return nodes_[root_].cnt; }

    // Rebuild subtree counts from buffer occupancies and leaf remainders.
    void recompute_counts(const LeafSource& leaves);
    void zero_counts();

    std::uint32_t k() const { return k_; }
    std::vector<Node>& nodes() { return nodes_; }
    std::uint32_t root() const { return root_; }

    // Internal nodes strictly below the root on the route to a leaf,
    // ordered top-down. Their buffers form the in-merger part of a sweep path.
    std::vector<std::uint32_t> route_to_leaf(std::uint32_t leaf) const;

private:
    std::uint32_t build_rec(std::uint32_t depth, std::vector<std::pair<std::uint32_t, int>>& slots,
                            std::uint32_t& next_leaf);
    void fixup_leaf_ranges(std::uint32_t n);
    void fill_node(std::uint32_t n, LeafSource& leaves);
    bool child_ready(const ChildRef& c, LeafSource& leaves);
    const HeapEntry& child_head(const ChildRef& c, LeafSource& leaves);
    HeapEntry child_pop(const ChildRef& c, LeafSource& leaves);
    std::uint64_t recompute_rec(std::uint32_t n, const LeafSource& leaves);

    Arena* arena_ = nullptr;
    Counters* counters_ = nullptr;
    std::uint32_t k_ = 0;
    std::uint32_t root_ = 0;
    std::vector<Node> nodes_;
};

} // namespace fhsop

#endif
