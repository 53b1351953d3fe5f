#include "fhsop/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "fhsop/binary_heap.hpp"
#include "fhsop/chain_store.hpp"
#include "fhsop/kmerger.hpp"

namespace fhsop {

const char* kernel_variant_name(KernelVariant v) {
    switch (v) {
        case KernelVariant::Serial: return "serial";
        case KernelVariant::Binary: return "binary";
        case KernelVariant::BinaryChain: return "binary-chain";
        case KernelVariant::Funnel: return "funnel";
        case KernelVariant::FunnelChain: return "funnel-chain";
        case KernelVariant::FunnelRank: return "funnel-rank";
    }
    return "?";
}

std::optional<KernelVariant> kernel_variant_from_name(const std::string& name) {
    for (KernelVariant v :
         {KernelVariant::Serial, KernelVariant::Binary, KernelVariant::BinaryChain,
          KernelVariant::Funnel, KernelVariant::FunnelChain, KernelVariant::FunnelRank})
        if (name == kernel_variant_name(v)) return v;
    return std::nullopt;
}

std::uint64_t pack_cursor(const ProductCursor& c) {
    assert(c.pair < (1u << 16) && c.u < (1u << 24) && c.w < (1u << 24));
    return (static_cast<std::uint64_t>(c.pair) << 48) |
           (static_cast<std::uint64_t>(c.u) << 24) | c.w;
}

ProductCursor unpack_cursor(std::uint64_t payload) {
    return ProductCursor{static_cast<std::uint32_t>(payload >> 48),
                         static_cast<std::uint32_t>((payload >> 24) & 0xffffffu),
                         static_cast<std::uint32_t>(payload & 0xffffffu)};
}

void EventLog::write(std::ostream& os) const {
    static const char* names[] = {"insert", "extract", "chain", "activate"};
    for (const EventRecord& r : records)
        os << names[static_cast<int>(r.op)] << ' ' << r.order << ' ' << r.pair << ' '
           << r.u << ' ' << r.w << ' ' << r.tick << '\n';
}

OrderSchedule build_order_schedule(const std::vector<SparsePoly>& gs,
                                   const std::vector<SparsePoly>& hs) {
    std::size_t pairs = gs.size();
    std::vector<std::pair<std::int64_t, std::uint32_t>> heads; // (alpha, pair index)
    std::int64_t alpha_max = -1;
    for (std::size_t i = 1; i <= pairs; ++i) {
        const SparsePoly& g = gs[i - 1];
        const SparsePoly& h = hs[pairs - i];
        if (g.is_zero() || h.is_zero()) continue;
        std::int64_t alpha = g.max_order() + h.max_order();
        heads.emplace_back(alpha, static_cast<std::uint32_t>(i));
        alpha_max = std::max(alpha_max, alpha);
    }
    OrderSchedule sched;
    if (heads.empty()) return sched;

    // Counting sort when the order range is linear in the pair count,
    // comparison sort otherwise; identical output either way.
    if (static_cast<std::uint64_t>(alpha_max) + 1 <= 4 * static_cast<std::uint64_t>(pairs)) {
        std::vector<std::vector<std::uint32_t>> buckets(
            static_cast<std::size_t>(alpha_max) + 1);
        for (auto& [alpha, i] : heads) buckets[static_cast<std::size_t>(alpha)].push_back(i);
        for (std::int64_t a = alpha_max; a >= 0; --a) {
            auto& b = buckets[static_cast<std::size_t>(a)];
            if (!b.empty()) sched.entries.push_back({a, std::move(b)});
        }
    } else {
        std::sort(heads.begin(), heads.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first > y.first;
            return x.second < y.second;
        });
        for (auto& [alpha, i] : heads) {
            if (sched.entries.empty() || sched.entries.back().alpha != alpha)
                sched.entries.push_back({alpha, {}});
            sched.entries.back().pairs.push_back(i);
        }
    }
    return sched;
}

namespace {

// Pair-indexed view of the operand polynomials.
struct Instance {
    const std::vector<SparsePoly>* gs;
    const std::vector<SparsePoly>* hs;
    const FieldSpec* field;

    std::size_t pairs() const { return gs->size(); }
    const SparsePoly& g(std::uint32_t i) const { return (*gs)[i - 1]; }
    const SparsePoly& h(std::uint32_t i) const { return (*hs)[pairs() - i]; }
    bool live_pair(std::uint32_t i) const { return !g(i).is_zero() && !h(i).is_zero(); }

    std::int64_t order_of(const ProductCursor& c) const {
        return g(c.pair).terms()[c.u - 1].order + h(c.pair).terms()[c.w - 1].order;
    }
    std::int64_t coeff_of(const ProductCursor& c) const {
        return field->mul(g(c.pair).terms()[c.u - 1].coeff,
                          h(c.pair).terms()[c.w - 1].coeff);
    }
};

class QueueAdapter {
public:
    virtual ~QueueAdapter() = default;
    virtual void insert(std::int64_t order, std::uint64_t payload) = 0;
    // No live queue entries; chained duplicates may still be pending.
    virtual bool heap_empty() const = 0;
    // Nothing left anywhere: queue drained and no pending chains.
    virtual bool all_consumed() const { return heap_empty(); }
    virtual std::int64_t peek_order() = 0;
    virtual HeapEntry pop() = 0;
    virtual std::vector<HeapEntry> take_chained(std::int64_t) { return {}; }
    virtual Counters& counters() = 0;
    virtual std::uint64_t links() const { return 0; }
    virtual ChainStore* chain_store() { return nullptr; }
};

class BinaryQueue final : public QueueAdapter {
public:
    explicit BinaryQueue(MemoryTraceSink* sink) : heap_(sink) {}
    void insert(std::int64_t order, std::uint64_t payload) override {
        heap_.insert(order, payload);
    }
    bool heap_empty() const override { return heap_.empty(); }
    std::int64_t peek_order() override { return heap_.peek_max().order; }
    HeapEntry pop() override { return heap_.extract_max(); }
    Counters& counters() override { return heap_.counters(); }

private:
    BinaryMaxHeap heap_;
};

class BinaryChainQueue final : public QueueAdapter {
public:
    explicit BinaryChainQueue(MemoryTraceSink* sink) : heap_(sink) {}
    void insert(std::int64_t order, std::uint64_t payload) override {
        heap_.insert(order, payload);
    }
    bool heap_empty() const override { return heap_.empty(); }
    std::int64_t peek_order() override { return heap_.peek_max().order; }
    HeapEntry pop() override {
        auto [top, chained] = heap_.extract_max();
        round_chained_.insert(round_chained_.end(), chained.begin(), chained.end());
        return top;
    }
    std::vector<HeapEntry> take_chained(std::int64_t) override {
        return std::exchange(round_chained_, {});
    }
    Counters& counters() override { return heap_.counters(); }

private:
    NaiveChainedHeap heap_;
    std::vector<HeapEntry> round_chained_;
};

class FunnelQueue final : public QueueAdapter {
public:
    FunnelQueue(MemoryTraceSink* sink, FunnelHeap::SweepMode mode, bool chaining,
                std::int64_t deg_bound, bool record_lifetimes, EventLog* log,
                const std::uint64_t* tick)
        : heap_(FunnelHeap::Options{mode, sink, 0, nullptr, record_lifetimes}) {
        if (chaining) {
            store_ = std::make_unique<ChainStore>(heap_.arena(), deg_bound);
            heap_.set_duplicate_handler([this, log, tick](const HeapEntry& e) {
                store_->append(e);
                if (log) {
                    ProductCursor c = unpack_cursor(e.payload);
                    log->records.push_back({EventRecord::Op::Chain, e.order, c.pair, c.u,
                                            c.w, tick ? *tick : 0});
                }
            });
        }
    }
    void insert(std::int64_t order, std::uint64_t payload) override {
        heap_.insert(order, payload);
    }
    bool heap_empty() const override { return heap_.empty(); }
    bool all_consumed() const override {
        return heap_.empty() && (!store_ || store_->pending() == 0);
    }
    std::int64_t peek_order() override {
        auto o = heap_.peek_max_order();
        assert(o.has_value());
        return *o;
    }
    HeapEntry pop() override { return heap_.extract_max(); }
    std::vector<HeapEntry> take_chained(std::int64_t order) override {
        return store_ ? store_->take(order) : std::vector<HeapEntry>{};
    }
    Counters& counters() override { return heap_.counters(); }
    std::uint64_t links() const override { return heap_.links_allocated(); }
    ChainStore* chain_store() override { return store_.get(); }
    FunnelHeap& heap() { return heap_; }

private:
    FunnelHeap heap_;
    std::unique_ptr<ChainStore> store_;
};

// Heap-driven streaming of all products of one instance through a max queue,
// with optional rank-driven deferred seeding.
class KernelDriver {
public:
    KernelDriver(const Instance& inst, QueueAdapter& q, EventLog* log, std::uint64_t* tick,
                 bool rank_mode)
        : inst_(inst), q_(q), log_(log), tick_(tick), rank_(rank_mode) {}

    SparsePoly run(KernelStats& stats) {
        std::vector<Term> out;
        if (rank_) {
            sched_ = build_order_schedule(*inst_.gs, *inst_.hs);
            if (!sched_.entries.empty()) activate(0);
        } else {
            for (std::uint32_t i = 1; i <= inst_.pairs(); ++i)
                if (inst_.live_pair(i)) insert_cursor({i, 1, 1});
        }

        std::vector<HeapEntry> round;
        while (true) {
            if (q_.heap_empty()) {
                if (rank_ && ind_ + 1 < sched_.entries.size()) {
                    activate(ind_ + 1);
                    continue;
                }
                break;
            }
            std::int64_t beta = q_.peek_order();
            ++*tick_;
            round.clear();
            while (!q_.heap_empty() && q_.peek_order() == beta) round.push_back(q_.pop());
            std::vector<HeapEntry> chained = q_.take_chained(beta);
            round.insert(round.end(), chained.begin(), chained.end());

            std::int64_t acc = 0;
            for (const HeapEntry& e : round) {
                ProductCursor c = unpack_cursor(e.payload);
                acc += inst_.coeff_of(c);
                if (log_)
                    log_->records.push_back(
                        {EventRecord::Op::Extract, e.order, c.pair, c.u, c.w, *tick_});
            }
            stats.products_processed += round.size();
            acc = inst_.field->reduce(acc);
            if (acc != 0) out.push_back({acc, beta});

            for (const HeapEntry& e : round) {
                ProductCursor c = unpack_cursor(e.payload);
                std::uint32_t hsize = static_cast<std::uint32_t>(inst_.h(c.pair).size());
                std::uint32_t gsize = static_cast<std::uint32_t>(inst_.g(c.pair).size());
                if (c.w < hsize) insert_cursor({c.pair, c.u, c.w + 1});
                if (c.w == 1 && c.u < gsize) insert_cursor({c.pair, c.u + 1, 1});
            }

            if (rank_ && !q_.heap_empty()) {
                std::int64_t next_max = q_.peek_order();
                while (ind_ + 1 < sched_.entries.size() &&
                       sched_.entries[ind_ + 1].alpha >= next_max)
                    activate(ind_ + 1);
            }
        }
        return SparsePoly::from_sorted_terms(std::move(out));
    }

private:
    void insert_cursor(const ProductCursor& c) {
        std::int64_t order = inst_.order_of(c);
        if (log_)
            log_->records.push_back({EventRecord::Op::Insert, order, c.pair, c.u, c.w, *tick_});
        q_.insert(order, pack_cursor(c));
    }

    void activate(std::size_t entry) {
        ind_ = entry;
        const OrderSchedule::Entry& e = sched_.entries[entry];
        for (std::uint32_t i : e.pairs) {
            if (log_)
                log_->records.push_back({EventRecord::Op::Activate, e.alpha, i, 1, 1, *tick_});
            insert_cursor({i, 1, 1});
        }
    }

    const Instance& inst_;
    QueueAdapter& q_;
    EventLog* log_;
    std::uint64_t* tick_;
    bool rank_;
    OrderSchedule sched_;
    std::size_t ind_ = 0;
};

// One polynomial product via a local binary heap; the serialised variant's
// inner multiplication.
SparsePoly heap_multiply(const SparsePoly& g, const SparsePoly& h, const FieldSpec& field,
                         Arena& arena, Counters& counters, KernelStats& stats) {
    BinaryMaxHeap heap(arena);
    std::vector<Term> out;
    heap.insert(g.terms()[0].order + h.terms()[0].order, pack_cursor({1, 1, 1}));
    while (!heap.empty()) {
        std::int64_t beta = heap.peek_max().order;
        std::int64_t acc = 0;
        std::vector<ProductCursor> consumed;
        while (!heap.empty() && heap.peek_max().order == beta) {
            HeapEntry e = heap.extract_max();
            ProductCursor c = unpack_cursor(e.payload);
            acc += field.mul(g.terms()[c.u - 1].coeff, h.terms()[c.w - 1].coeff);
            consumed.push_back(c);
        }
        stats.products_processed += consumed.size();
        acc = field.reduce(acc);
        if (acc != 0) out.push_back({acc, beta});
        for (const ProductCursor& c : consumed) {
            if (c.w < h.size())
                heap.insert(g.terms()[c.u - 1].order + h.terms()[c.w].order,
                            pack_cursor({1, c.u, c.w + 1}));
            if (c.w == 1 && c.u < g.size())
                heap.insert(g.terms()[c.u].order + h.terms()[0].order,
                            pack_cursor({1, c.u + 1, 1}));
        }
    }
    counters.comparisons += heap.counters().comparisons;
    counters.inserts += heap.counters().inserts;
    counters.extracts += heap.counters().extracts;
    counters.note_size(heap.counters().peak_size);
    return SparsePoly::from_sorted_terms(std::move(out));
}

std::uint64_t next_pow2(std::uint64_t x) {
    std::uint64_t p = 1;
    while (p < x) p <<= 1;
    return p;
}

KernelResult run_serial(const Instance& inst, const KernelOptions& opt) {
    KernelResult result;
    Arena arena(opt.sink);
    Counters& counters = result.stats.counters;

    std::vector<SparsePoly> products;
    for (std::uint32_t i = 1; i <= inst.pairs(); ++i) {
        if (!inst.live_pair(i)) continue;
        products.push_back(
            heap_multiply(inst.g(i), inst.h(i), *inst.field, arena, counters, result.stats));
    }
    if (products.empty()) return result;

    // Merge the stored product streams in one k-merger (pair count rounded up
    // to a power of two, missing streams empty), accumulating coefficients
    // and dropping zeros on the way out.
    std::uint32_t k =
        static_cast<std::uint32_t>(next_pow2(std::max<std::uint64_t>(2, products.size())));
    std::uint32_t depth = 0;
    while ((1u << depth) < k) ++depth;
    std::vector<StreamLeafSource::Stream> streams;
    std::uint64_t total_terms = 0;
    for (const SparsePoly& p : products) total_terms += p.size();
    std::uint64_t seq = total_terms; // earlier streams win order ties
    for (const SparsePoly& p : products) {
        StreamLeafSource::Stream s{arena.alloc(p.size()), p.size(), 0};
        std::uint64_t a = s.base;
        for (const Term& t : p.terms())
            arena.write_raw(a++, HeapEntry{t.order, seq--, static_cast<std::uint64_t>(t.coeff)});
        streams.push_back(s);
    }
    KMerger merger = KMerger::build(k, arena, counters, 1ull << (3 * depth));
    StreamLeafSource leaves(arena, std::move(streams));
    merger.prime(leaves);

    std::vector<Term> out;
    bool have = false;
    std::int64_t cur_order = 0;
    std::int64_t acc = 0;
    while (true) {
        if (merger.output().empty()) {
            merger.fill(leaves);
            if (merger.output().empty()) break;
        }
        merger.output_head();
        HeapEntry e = merger.pop_output_after_head();
        if (have && e.order == cur_order) {
            acc += static_cast<std::int64_t>(e.payload);
        } else {
            if (have) {
                acc = inst.field->reduce(acc);
                if (acc != 0) out.push_back({acc, cur_order});
            }
            have = true;
            cur_order = e.order;
            acc = static_cast<std::int64_t>(e.payload);
        }
    }
    if (have) {
        acc = inst.field->reduce(acc);
        if (acc != 0) out.push_back({acc, cur_order});
    }
    result.s = SparsePoly::from_sorted_terms(std::move(out));
    return result;
}

} // namespace

KernelResult run_kernel(KernelVariant variant, const std::vector<SparsePoly>& gs,
                        const std::vector<SparsePoly>& hs, const FieldSpec& field,
                        const KernelOptions& opt) {
    if (gs.size() != hs.size())
        throw std::invalid_argument("kernel needs k-1 polynomials on each side");
    Instance inst{&gs, &hs, &field};

    KernelResult result;
    for (std::uint32_t i = 1; i <= inst.pairs(); ++i)
        if (inst.live_pair(i))
            result.stats.products_total +=
                static_cast<std::uint64_t>(inst.g(i).size()) * inst.h(i).size();

    if (variant == KernelVariant::Serial) {
        KernelResult r = run_serial(inst, opt);
        r.stats.products_total = result.stats.products_total;
        return r;
    }

    std::int64_t deg_bound = -1;
    for (std::uint32_t i = 1; i <= inst.pairs(); ++i)
        if (inst.live_pair(i))
            deg_bound = std::max(deg_bound, inst.g(i).max_order() + inst.h(i).max_order());
    if (deg_bound < 0) return result; // no live pairs: zero polynomial

    std::uint64_t tick = 0;
    std::unique_ptr<QueueAdapter> queue;
    switch (variant) {
        case KernelVariant::Binary:
            queue = std::make_unique<BinaryQueue>(opt.sink);
            break;
        case KernelVariant::BinaryChain:
            queue = std::make_unique<BinaryChainQueue>(opt.sink);
            break;
        case KernelVariant::Funnel:
            queue = std::make_unique<FunnelQueue>(opt.sink, opt.sweep_mode, false, deg_bound,
                                                  opt.record_lifetimes, opt.event_log, &tick);
            break;
        case KernelVariant::FunnelChain:
        case KernelVariant::FunnelRank:
            queue = std::make_unique<FunnelQueue>(opt.sink, opt.sweep_mode, true, deg_bound,
                                                  opt.record_lifetimes, opt.event_log, &tick);
            break;
        case KernelVariant::Serial:
            break;
    }

    KernelDriver driver(inst, *queue, opt.event_log, &tick,
                        variant == KernelVariant::FunnelRank);
    result.s = driver.run(result.stats);
    result.stats.counters = queue->counters();
    result.stats.counters.finalize_lifetimes();
    result.stats.links_allocated = queue->links();
    if (ChainStore* store = queue->chain_store()) {
        result.stats.chain_appends = store->total_appends();
        result.stats.chain_first_append_orders = store->first_append_orders();
        result.stats.chain_append_trace = store->append_trace();
    }
    return result;
}

} // namespace fhsop
