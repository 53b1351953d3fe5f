#include "fhsop/kmerger.hpp"

#include <cassert>
#include <stdexcept>

namespace fhsop {

namespace {

std::uint32_t log2_exact(std::uint32_t k) {
    std::uint32_t d = 0;
    while ((1u << d) < k) ++d;
    if ((1u << d) != k || k < 2) throw std::invalid_argument("k must be a power of two >= 2");
    return d;
}

// Intermediate buffer capacity for the square-root split of a 2^d-merger:
// next power of two >= ceil((2^d)^{3/2}).
std::uint64_t middle_capacity(std::uint32_t d) { return 1ull << ((3 * d + 1) / 2); }

} // namespace

KMerger KMerger::build(std::uint32_t k, Arena& arena, Counters& counters,
                       std::uint64_t output_capacity) {
    std::uint32_t depth = log2_exact(k);
    KMerger m;
    m.arena_ = &arena;
    m.counters_ = &counters;
    m.k_ = k;

    Buffer out;
    out.base = arena.alloc(output_capacity);
    out.cap = output_capacity;

    std::vector<std::pair<std::uint32_t, int>> slots;
    std::uint32_t next_leaf = 0;
    m.root_ = m.build_rec(depth, slots, next_leaf);
    assert(next_leaf == k);
    assert(slots.size() == k);
    m.nodes_[m.root_].out = out;
    m.fixup_leaf_ranges(m.root_);
    return m;
}

std::uint32_t KMerger::build_rec(std::uint32_t depth,
                                 std::vector<std::pair<std::uint32_t, int>>& slots,
                                 std::uint32_t& next_leaf) {
    if (depth == 1) {
        std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
        nodes_[id].state_addr = arena_->alloc(1);
        nodes_[id].left = {true, next_leaf++};
        nodes_[id].right = {true, next_leaf++};
        slots.emplace_back(id, 0);
        slots.emplace_back(id, 1);
        return id;
    }

    std::uint32_t top_depth = (depth + 1) / 2;
    std::uint32_t bottom_depth = depth - top_depth;
    std::uint64_t mid_cap = middle_capacity(depth);

    // Top recursive part first; its leaf slots are placeholders that get
    // rewired to the bottom mergers, each sitting behind a middle buffer.
    std::vector<std::pair<std::uint32_t, int>> top_slots;
    std::uint32_t placeholder = 0;
    std::uint32_t top_root = build_rec(top_depth, top_slots, placeholder);

    for (auto& [node, side] : top_slots) {
        Buffer mid;
        mid.base = arena_->alloc(mid_cap);
        mid.cap = mid_cap;
        std::vector<std::pair<std::uint32_t, int>> bottom_slots;
        std::uint32_t bottom_root = build_rec(bottom_depth, bottom_slots, next_leaf);
        nodes_[bottom_root].out = mid;
        (side == 0 ? nodes_[node].left : nodes_[node].right) = ChildRef{false, bottom_root};
        slots.insert(slots.end(), bottom_slots.begin(), bottom_slots.end());
    }
    return top_root;
}

void KMerger::fixup_leaf_ranges(std::uint32_t n) {
    Node& node = nodes_[n];
    if (!node.left.is_leaf) fixup_leaf_ranges(node.left.idx);
    if (!node.right.is_leaf) fixup_leaf_ranges(node.right.idx);
    node.leaf_lo = node.left.is_leaf ? node.left.idx : nodes_[node.left.idx].leaf_lo;
    node.leaf_hi = node.right.is_leaf ? node.right.idx + 1 : nodes_[node.right.idx].leaf_hi;
}

bool KMerger::child_ready(const ChildRef& c, LeafSource& leaves) {
    if (c.is_leaf) return leaves.remaining(c.idx) > 0;
    Node& child = nodes_[c.idx];
    if (!child.out.empty()) return true;
    if (child.cnt == 0) return false;
    fill_node(c.idx, leaves);
    return !child.out.empty();
}

const HeapEntry& KMerger::child_head(const ChildRef& c, LeafSource& leaves) {
    if (c.is_leaf) return leaves.head(c.idx);
    return nodes_[c.idx].out.front(*arena_);
}

HeapEntry KMerger::child_pop(const ChildRef& c, LeafSource& leaves) {
    if (c.is_leaf) return leaves.pop(c.idx);
    Node& child = nodes_[c.idx];
    --child.cnt;
    return child.out.pop_front_notrace(*arena_);
}

void KMerger::fill_node(std::uint32_t n, LeafSource& leaves) {
    Node& node = nodes_[n];
    arena_->touch(node.state_addr);
    while (!node.out.full()) {
        bool lready = child_ready(node.left, leaves);
        bool rready = child_ready(node.right, leaves);
        if (!lready && !rready) break;
        ChildRef from;
        if (lready && rready) {
            const HeapEntry& lh = child_head(node.left, leaves);
            const HeapEntry& rh = child_head(node.right, leaves);
            ++counters_->comparisons;
            from = entry_greater(lh, rh) ? node.left : node.right;
        } else {
            from = lready ? node.left : node.right;
            child_head(from, leaves); // account the read of the lone live head
        }
        node.out.push_back(*arena_, child_pop(from, leaves));
    }
    arena_->touch(node.state_addr);
}

void KMerger::fill(LeafSource& leaves) { fill_node(root_, leaves); }

void KMerger::recompute_counts(const LeafSource& leaves) { recompute_rec(root_, leaves); }

std::uint64_t KMerger::recompute_rec(std::uint32_t n, const LeafSource& leaves) {
    Node& node = nodes_[n];
    std::uint64_t total = node.out.count;
    total += node.left.is_leaf ? leaves.remaining(node.left.idx)
                               : recompute_rec(node.left.idx, leaves);
    total += node.right.is_leaf ? leaves.remaining(node.right.idx)
                                : recompute_rec(node.right.idx, leaves);
    node.cnt = total;
    return total;
}

void KMerger::zero_counts() {
    for (Node& n : nodes_) n.cnt = 0;
}

std::vector<std::uint32_t> KMerger::route_to_leaf(std::uint32_t leaf) const {
    std::vector<std::uint32_t> route;
    std::uint32_t n = root_;
    while (true) {
        const Node& node = nodes_[n];
        ChildRef next;
        if (node.left.is_leaf || node.right.is_leaf) {
            assert(node.left.is_leaf && node.right.is_leaf);
            break;
        }
        next = leaf < nodes_[node.left.idx].leaf_hi ? node.left : node.right;
        route.push_back(next.idx);
        n = next.idx;
    }
    return route;
}

} // namespace fhsop
