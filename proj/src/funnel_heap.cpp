#include "fhsop/funnel_heap.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <queue>

namespace fhsop {

namespace {

// k exponents follow d_1 = 1, d_{i+1} = ceil(4 d_i / 3), i.e. k = 2, 4, 8,
// 16, 64, 256, 2048, ...
std::uint32_t link_k_exponent(std::uint32_t index_1based) {
    std::uint32_t d = 1;
    for (std::uint32_t i = 1; i < index_1based; ++i) d = (4 * d + 2) / 3;
    return d;
}

} // namespace

FunnelHeap::FunnelHeap(Options opt)
    : arena_(opt.sink, opt.max_words),
      mode_(opt.mode),
      duplicate_handler_(std::move(opt.duplicate_handler)) {
    counters_.record_lifetimes = opt.record_lifetimes;
    s01_.base = arena_.alloc(8); // s_1 = k_1^3
    s01_.cap = 8;
}

FunnelHeap::Link& FunnelHeap::allocate_link() {
    std::uint32_t index = static_cast<std::uint32_t>(links_.size()) + 1;
    std::uint32_t d = link_k_exponent(index);
    auto link = std::make_unique<Link>();
    link->index = index;
    link->k = 1u << d;
    link->s = 1ull << (3 * d);
    link->c_addr = arena_.alloc(1);
    link->a.base = arena_.alloc(link->s);
    link->a.cap = link->s;
    link->v_state_addr = arena_.alloc(1);
    link->merger = KMerger::build(link->k, arena_, counters_, link->s);
    link->inputs.resize(link->k);
    for (Buffer& b : link->inputs) {
        b.base = arena_.alloc(link->s);
        b.cap = link->s;
    }
    links_.push_back(std::move(link));
    return *links_.back();
}

std::uint64_t FunnelHeap::suffix_live(std::size_t from_link_1based) const {
    std::uint64_t total = 0;
    for (std::size_t m = from_link_1based; m <= links_.size(); ++m)
        total += links_[m - 1]->live;
    return total;
}

void FunnelHeap::fill_v(std::size_t i) {
    Link& link = *links_[i - 1];
    arena_.touch(link.v_state_addr);
    while (!link.a.full()) {
        bool left_ready = !link.merger.output().empty();
        if (!left_ready && link.merger.live() > 0) {
            InputLeaves leaves(arena_, link.inputs);
            link.merger.fill(leaves);
            left_ready = !link.merger.output().empty();
        }
        bool right_ready = false;
        if (suffix_live(i + 1) > 0) {
            Link& next = *links_[i];
            if (next.a.empty()) fill_v(i + 1);
            right_ready = !next.a.empty();
        }
        if (!left_ready && !right_ready) break;
        bool from_right;
        if (left_ready && right_ready) {
            const HeapEntry& lh = link.merger.output_head();
            const HeapEntry& rh = links_[i]->a.front(arena_);
            ++counters_.comparisons;
            from_right = entry_greater(rh, lh);
        } else {
            from_right = right_ready;
            if (from_right)
                links_[i]->a.front(arena_);
            else
                link.merger.output_head();
        }
        HeapEntry e;
        if (from_right) {
            e = links_[i]->a.pop_front_notrace(arena_);
            --links_[i]->live;
            ++link.live;
        } else {
            e = link.merger.pop_output_after_head();
        }
        link.a.push_back(arena_, e);
    }
    arena_.touch(link.v_state_addr);
}

void FunnelHeap::refill_a1_if_needed() {
    if (links_.empty()) return;
    if (!links_[0]->a.empty()) return;
    if (suffix_live(1) == 0) return;
    ++fill_root_invocations_;
    fill_v(1);
}

std::uint64_t FunnelHeap::insert(std::int64_t order, std::uint64_t payload) {
    std::uint64_t seq = next_seq_++;
    HeapEntry e{order, seq, payload};
    counters_.on_insert_seq(seq);
    ++counters_.inserts;

    // Position among current S_{0,1} entries; the buffer is sorted descending
    // and e carries the newest seq, so e precedes any equal-order resident.
    std::uint64_t pos = 0;
    bool duplicate = false;
    while (pos < s01_.count) {
        const HeapEntry& x = arena_.read(s01_.addr(pos));
        ++counters_.comparisons;
        if (x.order < e.order) break;
        if (x.order == e.order) {
            duplicate = true;
            break;
        }
        ++pos;
    }
    if (duplicate && duplicate_handler_) {
        duplicate_handler_(e);
        ++counters_.chain_events;
        return seq;
    }

    if (s01_.full()) {
        sweep();
        pos = 0; // buffer now empty
    }
    for (std::uint64_t j = s01_.count; j > pos; --j)
        arena_.write(s01_.addr(j), arena_.read(s01_.addr(j - 1)));
    arena_.write(s01_.addr(pos), e);
    ++s01_.count;
    ++live_total_;
    counters_.note_size(live_total_);
    return seq;
}

HeapEntry FunnelHeap::extract_max() {
    refill_a1_if_needed();
    bool s_has = !s01_.empty();
    bool a_has = !links_.empty() && !links_[0]->a.empty();
    if (!s_has && !a_has) throw EmptyHeap{};
    bool from_a;
    if (s_has && a_has) {
        const HeapEntry& sh = s01_.front(arena_);
        const HeapEntry& ah = links_[0]->a.front(arena_);
        ++counters_.comparisons;
        from_a = entry_greater(ah, sh);
    } else {
        from_a = a_has;
        if (from_a)
            links_[0]->a.front(arena_);
        else
            s01_.front(arena_);
    }
    HeapEntry e;
    if (from_a) {
        e = links_[0]->a.pop_front_notrace(arena_);
        --links_[0]->live;
    } else {
        e = s01_.pop_front_notrace(arena_);
    }
    --live_total_;
    ++counters_.extracts;
    counters_.on_extract_seq(e.seq);
    return e;
}

std::optional<std::int64_t> FunnelHeap::peek_max_order() {
    refill_a1_if_needed();
    bool s_has = !s01_.empty();
    bool a_has = !links_.empty() && !links_[0]->a.empty();
    if (!s_has && !a_has) return std::nullopt;
    if (s_has && a_has) {
        const HeapEntry& sh = s01_.front(arena_);
        const HeapEntry& ah = links_[0]->a.front(arena_);
        ++counters_.comparisons;
        return entry_greater(ah, sh) ? ah.order : sh.order;
    }
    return a_has ? links_[0]->a.front(arena_).order : s01_.front(arena_).order;
}

std::uint64_t FunnelHeap::tail_estimate(std::size_t dest) const {
    // Elements that end up in the destination buffer: S_{0,1} plus everything
    // in links 1..dest-1 except their A buffers, which are refilled in place.
    std::uint64_t tail = s01_.count;
    for (std::size_t m = 1; m < dest; ++m)
        tail += links_[m - 1]->live - links_[m - 1]->a.count;
    return tail;
}

FunnelHeap::SweepPlan FunnelHeap::plan_sweep() {
    if (mode_ == SweepMode::Refined) {
        // First link whose input buffers hold less than half their total
        // capacity: recycle its least-occupied buffer.
        for (std::size_t i = 1; i <= links_.size(); ++i) {
            Link& link = *links_[i - 1];
            std::uint64_t occupancy = 0;
            for (const Buffer& b : link.inputs) occupancy += b.count;
            if (occupancy * 2 >= link.k * link.s) continue;
            std::uint32_t j1 = 0;
            for (std::uint32_t j = 1; j < link.k; ++j)
                if (link.inputs[j].count < link.inputs[j1].count) j1 = j;
            SweepPlan plan{i, j1, false, j1, 0};
            std::uint64_t extra = 0;
            if (link.inputs[j1].count > 0) {
                std::uint32_t j2 = j1 == 0 ? 1 : 0;
                for (std::uint32_t j = 0; j < link.k; ++j) {
                    if (j == j1) continue;
                    if (link.inputs[j].count < link.inputs[j2].count) j2 = j;
                }
                plan.consolidate = true;
                plan.j2 = j2;
                // Internal buffers on the j2 route below the fork join the
                // stream, so they count toward the destination tail.
                auto r1 = link.merger.route_to_leaf(j1);
                auto r2 = link.merger.route_to_leaf(j2);
                std::size_t common = 0;
                while (common < r1.size() && common < r2.size() && r1[common] == r2[common])
                    ++common;
                for (std::size_t t = common; t < r2.size(); ++t)
                    extra += link.merger.nodes()[r2[t]].out.count;
            }
            if (tail_estimate(i) + extra > link.s) {
                ++sweep_capacity_fallbacks_;
                continue;
            }
            return plan;
        }
        // Every link at least half full: first physically unused buffer.
        for (std::size_t i = 1; i <= links_.size(); ++i) {
            Link& link = *links_[i - 1];
            for (std::uint32_t j = 0; j < link.k; ++j) {
                if (link.inputs[j].count != 0) continue;
                if (tail_estimate(i) > link.s) {
                    ++sweep_capacity_fallbacks_;
                    break;
                }
                return SweepPlan{i, j, false, j, 0};
            }
        }
        Link& fresh = allocate_link();
        return SweepPlan{fresh.index, 0, false, 0, 0};
    }

    // Canonical: first link with an unused input buffer, provided the
    // incoming stream actually fits there ("copied sufficiently downwards").
    for (std::size_t i = 1;; ++i) {
        if (i > links_.size()) allocate_link();
        Link& link = *links_[i - 1];
        arena_.touch(link.c_addr);
        if (link.c > link.k) continue;
        if (tail_estimate(i) > link.s) {
            ++sweep_capacity_fallbacks_;
            continue;
        }
        return SweepPlan{i, static_cast<std::uint32_t>(link.c - 1), false, 0, 0};
    }
}

void FunnelHeap::drain_buffer(Buffer& b, std::vector<std::vector<HeapEntry>>& runs) {
    if (b.empty()) return;
    std::vector<HeapEntry> run;
    run.reserve(b.count);
    while (!b.empty()) run.push_back(b.pop_front(arena_));
    b.reset();
    runs.push_back(std::move(run));
}

void FunnelHeap::consolidate_inputs(Link& link, std::uint32_t j1, std::uint32_t j2) {
    Buffer& from = link.inputs[j1];
    Buffer& into = link.inputs[j2];
    std::vector<HeapEntry> a, b;
    a.reserve(from.count);
    b.reserve(into.count);
    while (!from.empty()) a.push_back(from.pop_front(arena_));
    while (!into.empty()) b.push_back(into.pop_front(arena_));
    from.reset();
    into.reset();
    std::size_t ia = 0, ib = 0;
    bool have_last = false;
    std::int64_t last_order = 0;
    while (ia < a.size() || ib < b.size()) {
        HeapEntry e;
        if (ia < a.size() && ib < b.size()) {
            ++counters_.comparisons;
            e = entry_greater(a[ia], b[ib]) ? a[ia++] : b[ib++];
        } else if (ia < a.size()) {
            e = a[ia++];
        } else {
            e = b[ib++];
        }
        if (duplicate_handler_ && have_last && e.order == last_order) {
            duplicate_handler_(e);
            ++counters_.chain_events;
            continue;
        }
        have_last = true;
        last_order = e.order;
        into.push_back(arena_, e);
    }
}

void FunnelHeap::sweep() {
    SweepPlan plan = plan_sweep();
    Link& dest = *links_[plan.link - 1];

    if (plan.consolidate) consolidate_inputs(dest, plan.j1, plan.j2);
    assert(dest.inputs[plan.leaf].empty());

    // Gather the sorted runs forming the stream: S_{0,1}, all of links
    // 1..dest-1, and the path from A_1 down to the destination buffer.
    std::vector<std::vector<HeapEntry>> runs;
    std::vector<std::pair<Buffer*, std::uint64_t>> refills; // path buffers, original counts

    drain_buffer(s01_, runs);
    for (std::size_t m = 1; m < plan.link; ++m) {
        Link& link = *links_[m - 1];
        refills.emplace_back(&link.a, link.a.count);
        drain_buffer(link.a, runs);
    }
    refills.emplace_back(&dest.a, dest.a.count);
    drain_buffer(dest.a, runs);
    Buffer& b_dest = dest.merger.output();
    refills.emplace_back(&b_dest, b_dest.count);
    drain_buffer(b_dest, runs);
    auto route = dest.merger.route_to_leaf(plan.leaf);
    for (std::uint32_t n : route) {
        Buffer& rb = dest.merger.nodes()[n].out;
        refills.emplace_back(&rb, rb.count);
        drain_buffer(rb, runs);
    }
    if (plan.consolidate) {
        auto r2 = dest.merger.route_to_leaf(plan.j2);
        std::size_t common = 0;
        while (common < route.size() && common < r2.size() && route[common] == r2[common])
            ++common;
        for (std::size_t t = common; t < r2.size(); ++t)
            drain_buffer(dest.merger.nodes()[r2[t]].out, runs);
    }
    for (std::size_t m = 1; m < plan.link; ++m) {
        Link& link = *links_[m - 1];
        for (KMerger::Node& node : link.merger.nodes()) drain_buffer(node.out, runs);
        for (Buffer& s : link.inputs) drain_buffer(s, runs);
    }

    // Merge the runs into one descending stream, collapsing adjacent equal
    // orders into the duplicate handler when chaining is on, and write the
    // head back along the path (original occupancies) and the rest into the
    // destination buffer.
    struct Cursor {
        const std::vector<HeapEntry>* run;
        std::size_t pos;
    };
    auto cursor_less = [this](const Cursor& x, const Cursor& y) {
        ++counters_.comparisons;
        return entry_less((*x.run)[x.pos], (*y.run)[y.pos]);
    };
    std::priority_queue<Cursor, std::vector<Cursor>, decltype(cursor_less)> pq(cursor_less);
    for (const auto& run : runs)
        if (!run.empty()) pq.push(Cursor{&run, 0});

    std::size_t refill_idx = 0;
    std::uint64_t refill_left = refills.empty() ? 0 : refills[0].second;
    while (refill_idx < refills.size() && refill_left == 0) {
        ++refill_idx;
        refill_left = refill_idx < refills.size() ? refills[refill_idx].second : 0;
    }
    // Chained duplicates still consume their path-refill slot: a refilled
    // buffer must only receive elements from its pre-dedup position range in
    // the stream, or it could lift elements above larger off-path content.
    Buffer& dest_buf = dest.inputs[plan.leaf];
    bool have_last = false;
    std::int64_t last_order = 0;
    while (!pq.empty()) {
        Cursor cur = pq.top();
        pq.pop();
        const HeapEntry& e = (*cur.run)[cur.pos];
        if (cur.pos + 1 < cur.run->size()) pq.push(Cursor{cur.run, cur.pos + 1});
        bool duplicate = duplicate_handler_ && have_last && e.order == last_order;
        have_last = true;
        last_order = e.order;
        if (duplicate) {
            duplicate_handler_(e);
            ++counters_.chain_events;
        }
        if (refill_idx < refills.size()) {
            if (!duplicate) refills[refill_idx].first->push_back(arena_, e);
            --refill_left;
            while (refill_idx < refills.size() && refill_left == 0) {
                ++refill_idx;
                refill_left = refill_idx < refills.size() ? refills[refill_idx].second : 0;
            }
        } else if (!duplicate) {
            assert(!dest_buf.full());
            dest_buf.push_back(arena_, e);
        }
    }

    // Counter and occupancy bookkeeping.
    for (std::size_t m = 1; m < plan.link; ++m) {
        Link& link = *links_[m - 1];
        link.c = 1;
        arena_.touch(link.c_addr);
        link.merger.zero_counts();
        link.live = link.a.count;
    }
    if (mode_ == SweepMode::Canonical) {
        dest.c += 1;
    } else {
        std::uint64_t occupied = 0;
        for (const Buffer& bu : dest.inputs)
            if (!bu.empty()) ++occupied;
        dest.c = std::min<std::uint64_t>(occupied + 1, dest.k + 1);
    }
    arena_.touch(dest.c_addr);
    {
        InputLeaves leaves(arena_, dest.inputs);
        dest.merger.prime(leaves);
    }
    dest.live = dest.a.count + dest.merger.live();
    live_total_ = s01_.count;
    for (const auto& link : links_) live_total_ += link->live;
    counters_.bump_sweep(plan.link);
}

std::uint64_t FunnelHeap::link_counter(std::size_t link_1based) const {
    return links_[link_1based - 1]->c;
}

std::uint64_t FunnelHeap::input_occupancy(std::size_t link_1based, std::size_t j_1based) const {
    return links_[link_1based - 1]->inputs[j_1based - 1].count;
}

void FunnelHeap::debug_dump(std::ostream& os) const {
    os << "link 0 S0,1 " << s01_.count << "/" << s01_.cap << '\n';
    for (const auto& link : links_) {
        os << "link " << link->index << " A " << link->a.count << "/" << link->a.cap << '\n';
        const auto& nodes = link->merger.nodes();
        for (std::size_t n = 0; n < nodes.size(); ++n) {
            const char* name = n == link->merger.root() ? "B" : nullptr;
            if (name)
                os << "link " << link->index << " B ";
            else
                os << "link " << link->index << " K" << n << " ";
            os << nodes[n].out.count << "/" << nodes[n].out.cap << '\n';
        }
        for (std::size_t j = 0; j < link->inputs.size(); ++j)
            os << "link " << link->index << " S" << (j + 1) << " " << link->inputs[j].count
               << "/" << link->inputs[j].cap << '\n';
    }
}

namespace {

bool buffer_sorted(Arena& arena, const Buffer& b) {
    for (std::uint64_t i = 1; i < b.count; ++i) {
        const HeapEntry& prev = b.peek_raw(arena, i - 1);
        const HeapEntry& cur = b.peek_raw(arena, i);
        if (!entry_greater(prev, cur)) return false;
    }
    return true;
}

bool buffer_orders_distinct(Arena& arena, const Buffer& b) {
    for (std::uint64_t i = 1; i < b.count; ++i)
        if (b.peek_raw(arena, i - 1).order == b.peek_raw(arena, i).order) return false;
    return true;
}

} // namespace

bool FunnelHeap::debug_buffers_sorted() {
    if (!buffer_sorted(arena_, s01_)) return false;
    for (const auto& link : links_) {
        if (!buffer_sorted(arena_, link->a)) return false;
        for (auto& node : link->merger.nodes())
            if (!buffer_sorted(arena_, node.out)) return false;
        for (const Buffer& s : link->inputs)
            if (!buffer_sorted(arena_, s)) return false;
    }
    return true;
}

bool FunnelHeap::debug_input_buffers_replica_free() {
    if (!buffer_orders_distinct(arena_, s01_)) return false;
    for (const auto& link : links_)
        for (const Buffer& s : link->inputs)
            if (!buffer_orders_distinct(arena_, s)) return false;
    return true;
}

} // namespace fhsop
