#include "fhsop/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "fhsop/binary_heap.hpp"
#include "fhsop/cache_model.hpp"
#include "fhsop/errors.hpp"
#include "fhsop/kmerger.hpp"

namespace fhsop {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool is_pow2(std::uint64_t x) { return x >= 2 && (x & (x - 1)) == 0; }

} // namespace

std::uint64_t Rng::uniform(std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t range = hi - lo + 1;
    if (range == 0) return next(); // full 64-bit range
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return lo + x % range;
}

SparsePoly random_poly(Rng& rng, std::uint64_t terms, std::uint64_t max_order,
                       const FieldSpec& field) {
    if (terms > max_order + 1)
        throw std::invalid_argument("more terms requested than distinct orders available");
    std::unordered_set<std::uint64_t> used;
    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    raw.reserve(terms);
    while (used.size() < terms) {
        std::uint64_t o = rng.uniform(0, max_order);
        if (!used.insert(o).second) continue;
        std::int64_t c = static_cast<std::int64_t>(rng.uniform(1, field.p - 1));
        raw.emplace_back(c, static_cast<std::int64_t>(o));
    }
    return SparsePoly::normalize(std::move(raw), field);
}

void generate_hensel_instance(const HenselSpec& spec, std::vector<SparsePoly>& gs,
                              std::vector<SparsePoly>& hs) {
    FieldSpec field(spec.prime);
    Rng rng(spec.seed);
    gs.clear();
    hs.clear();
    for (std::uint64_t i = 0; i + 1 < spec.k; ++i)
        gs.push_back(random_poly(rng, spec.terms, spec.n, field));
    for (std::uint64_t i = 0; i + 1 < spec.k; ++i)
        hs.push_back(random_poly(rng, spec.terms, spec.n, field));
}

std::vector<BenchRow> run_generic_pq(const GenericPqSpec& spec) {
    if (spec.n < 2 || spec.n % 2 != 0)
        throw std::invalid_argument("generic-pq needs an even element count n >= 2");

    std::vector<BenchRow> rows;
    std::vector<std::vector<std::int64_t>> popped_per_variant;

    for (const std::string& variant : spec.variants) {
        std::unique_ptr<CacheModel> cache;
        if (spec.cache.enabled)
            cache = std::make_unique<CacheModel>(spec.cache.m, spec.cache.b);

        Rng rng(spec.seed);
        std::vector<std::int64_t> popped;
        popped.reserve(spec.n + spec.n / 2);
        auto t0 = std::chrono::steady_clock::now();
        Counters counters_out;

        auto run_phases = [&](auto& heap, auto&& push, auto&& pop) {
            for (std::uint64_t i = 0; i < spec.n; ++i)
                push(static_cast<std::int64_t>(rng.uniform(0, (1ull << 62))));
            for (std::uint64_t i = 0; i < spec.n / 2; ++i) popped.push_back(pop());
            for (std::uint64_t i = 0; i < spec.n / 2; ++i)
                push(static_cast<std::int64_t>(rng.uniform(0, (1ull << 62))));
            for (std::uint64_t i = 0; i < spec.n; ++i) popped.push_back(pop());
            counters_out = heap.counters();
        };

        BenchRow row;
        row.scenario = "generic-pq";
        row.variant = variant;
        row.n = spec.n;
        row.seed = spec.seed;
        row.cache_m = spec.cache.enabled ? spec.cache.m : 0;
        row.cache_b = spec.cache.enabled ? spec.cache.b : 0;

        if (variant == "binary") {
            BinaryMaxHeap heap(cache.get());
            run_phases(
                heap, [&](std::int64_t v) { heap.insert(v); },
                [&]() { return heap.extract_max().order; });
        } else if (variant == "funnel") {
            FunnelHeap heap(FunnelHeap::Options{spec.sweep_mode, cache.get(), 0, nullptr, false});
            run_phases(
                heap, [&](std::int64_t v) { heap.insert(v); },
                [&]() { return heap.extract_max().order; });
            row.links = heap.links_allocated();
        } else {
            throw std::invalid_argument("unknown generic-pq variant: " + variant);
        }

        row.time_s = seconds_since(t0);
        row.comparisons = counters_out.comparisons;
        row.inserts = counters_out.inserts;
        row.extracts = counters_out.extracts;
        row.peak_size = counters_out.peak_size;
        row.max_capacity = counters_out.peak_size;
        row.chain_events = counters_out.chain_events;
        if (variant == "funnel") row.sweeps_per_link = counters_out.sweeps_per_link;
        if (cache) row.simulated_misses = cache->misses();
        popped_per_variant.push_back(std::move(popped));
        rows.push_back(std::move(row));
    }

    // All variants run the same workload, so their pop streams must agree.
    for (std::size_t v = 1; v < popped_per_variant.size(); ++v)
        if (popped_per_variant[v] != popped_per_variant[0])
            for (auto& r : rows) r.oracle_ok = false;
    return rows;
}

std::vector<BenchRow> run_hensel(const HenselSpec& spec) {
    if (spec.k < 2) throw std::invalid_argument("hensel needs k >= 2");
    if (spec.k > 65535) throw std::invalid_argument("hensel k exceeds cursor limit");

    std::vector<SparsePoly> gs, hs;
    if (spec.fixture_gs && spec.fixture_hs) {
        gs = *spec.fixture_gs;
        hs = *spec.fixture_hs;
    } else {
        generate_hensel_instance(spec, gs, hs);
    }
    FieldSpec field(spec.prime);
    SparsePoly oracle = naive_sum_of_products(gs, hs, field);

    std::vector<KernelVariant> variants = spec.variants;
    if (variants.empty())
        variants = {KernelVariant::Serial,      KernelVariant::Binary,
                    KernelVariant::BinaryChain, KernelVariant::Funnel,
                    KernelVariant::FunnelChain, KernelVariant::FunnelRank};

    std::vector<BenchRow> rows;
    for (KernelVariant v : variants) {
        std::unique_ptr<CacheModel> cache;
        if (spec.cache.enabled)
            cache = std::make_unique<CacheModel>(spec.cache.m, spec.cache.b);
        KernelOptions opt;
        opt.sweep_mode = spec.sweep_mode;
        opt.sink = cache.get();
        opt.record_lifetimes = v == KernelVariant::FunnelRank;

        auto t0 = std::chrono::steady_clock::now();
        KernelResult result = run_kernel(v, gs, hs, field, opt);
        double elapsed = seconds_since(t0);

        if (!(result.s == oracle)) {
            std::ostringstream dump;
            dump << "variant " << kernel_variant_name(v)
                 << " disagrees with the direct-accumulation oracle\n";
            dump << "instance:\n";
            std::vector<SparsePoly> all = gs;
            all.insert(all.end(), hs.begin(), hs.end());
            write_poly_set(dump, field, all);
            throw OracleMismatch(dump.str());
        }

        BenchRow row;
        row.scenario = "hensel";
        row.variant = kernel_variant_name(v);
        row.n = spec.n;
        row.k = spec.k;
        row.terms = spec.terms;
        row.seed = spec.seed;
        row.cache_m = spec.cache.enabled ? spec.cache.m : 0;
        row.cache_b = spec.cache.enabled ? spec.cache.b : 0;
        row.comparisons = result.stats.counters.comparisons;
        row.inserts = result.stats.counters.inserts;
        row.extracts = result.stats.counters.extracts;
        row.peak_size = result.stats.counters.peak_size;
        row.max_capacity = result.stats.counters.peak_size;
        row.chain_events = result.stats.counters.chain_events;
        row.sweeps_per_link = result.stats.counters.sweeps_per_link;
        row.links = result.stats.links_allocated;
        row.time_s = elapsed;
        if (cache) row.simulated_misses = cache->misses();
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<BenchRow> run_merger_bench(const MergerSpec& spec) {
    if (!is_pow2(spec.k) || spec.k > 512)
        throw std::invalid_argument("merger needs k a power of two in [2, 512]");
    std::uint64_t per_stream;
    if (spec.shape == "k2xk") {
        per_stream = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(spec.k)));
    } else if (spec.shape == "kxk") {
        per_stream = spec.k;
    } else if (spec.shape == "kxk2") {
        per_stream = spec.k * spec.k;
    } else {
        throw std::invalid_argument("merger shape must be one of k2xk, kxk, kxk2");
    }
    std::uint64_t total = spec.k * per_stream;

    // Shared input: k descending runs of random integers.
    Rng rng(spec.seed);
    std::vector<std::vector<std::int64_t>> stream_values(spec.k);
    std::vector<std::int64_t> expected;
    expected.reserve(total);
    for (auto& sv : stream_values) {
        sv.reserve(per_stream);
        for (std::uint64_t i = 0; i < per_stream; ++i)
            sv.push_back(static_cast<std::int64_t>(rng.uniform(0, (1ull << 62))));
        std::sort(sv.begin(), sv.end(), std::greater<>());
        expected.insert(expected.end(), sv.begin(), sv.end());
    }
    std::sort(expected.begin(), expected.end(), std::greater<>());

    std::vector<BenchRow> rows;
    for (const std::string& variant : spec.variants) {
        std::unique_ptr<CacheModel> cache;
        if (spec.cache.enabled)
            cache = std::make_unique<CacheModel>(spec.cache.m, spec.cache.b);

        BenchRow row;
        row.scenario = "merger";
        row.variant = variant;
        row.k = spec.k;
        row.n = per_stream;
        row.shape = spec.shape;
        row.seed = spec.seed;
        row.cache_m = spec.cache.enabled ? spec.cache.m : 0;
        row.cache_b = spec.cache.enabled ? spec.cache.b : 0;
        row.inserts = total;
        row.extracts = total;

        std::vector<std::int64_t> got;
        got.reserve(total);
        auto t0 = std::chrono::steady_clock::now();

        if (variant == "kmerger") {
            Arena arena(cache.get());
            Counters counters;
            std::vector<StreamLeafSource::Stream> streams;
            std::uint64_t seq = total; // earlier streams win order ties
            for (const auto& sv : stream_values) {
                StreamLeafSource::Stream s{arena.alloc(std::max<std::uint64_t>(1, sv.size())),
                                           sv.size(), 0};
                std::uint64_t a = s.base;
                for (std::int64_t v : sv)
                    arena.write_raw(a++, HeapEntry{v, seq--, 0});
                streams.push_back(s);
            }
            std::uint32_t depth = 0;
            while ((1ull << depth) < spec.k) ++depth;
            KMerger merger =
                KMerger::build(static_cast<std::uint32_t>(spec.k), arena, counters,
                               1ull << (3 * depth));
            StreamLeafSource leaves(arena, std::move(streams));
            merger.prime(leaves);
            while (true) {
                if (merger.output().empty()) {
                    merger.fill(leaves);
                    if (merger.output().empty()) break;
                }
                merger.output_head();
                got.push_back(merger.pop_output_after_head().order);
            }
            row.comparisons = counters.comparisons;
            row.peak_size = total;
            row.max_capacity = total;
        } else if (variant == "funnelheap") {
            FunnelHeap heap(FunnelHeap::Options{spec.sweep_mode, cache.get(), 0, nullptr, false});
            std::uint64_t base = heap.arena().alloc(total);
            std::uint64_t a = base;
            for (const auto& sv : stream_values)
                for (std::int64_t v : sv) heap.arena().write_raw(a++, HeapEntry{v, 0, 0});
            for (std::uint64_t i = 0; i < total; ++i)
                heap.insert(heap.arena().read(base + i).order);
            while (!heap.empty()) got.push_back(heap.extract_max().order);
            row.comparisons = heap.counters().comparisons;
            row.peak_size = heap.counters().peak_size;
            row.max_capacity = heap.counters().peak_size;
            row.sweeps_per_link = heap.counters().sweeps_per_link;
            row.links = heap.links_allocated();
        } else {
            throw std::invalid_argument("unknown merger variant: " + variant);
        }

        row.time_s = seconds_since(t0);
        if (cache) row.simulated_misses = cache->misses();
        row.oracle_ok = got == expected;
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string join_sweeps(const std::vector<std::uint64_t>& sweeps) {
    std::string out;
    for (std::size_t i = 0; i < sweeps.size(); ++i) {
        if (i) out += '|';
        out += std::to_string(sweeps[i]);
    }
    return out;
}

} // namespace

void write_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
    os << "scenario,variant,n,k,terms,shape,seed,cache_m,cache_b,comparisons,"
          "simulated_misses,inserts,extracts,peak_size,max_capacity,chain_events,"
          "sweeps_per_link,links,time_s,oracle_ok\n";
    for (const BenchRow& r : rows) {
        os << r.scenario << ',' << r.variant << ',' << r.n << ',' << r.k << ',' << r.terms
           << ',' << r.shape << ',' << r.seed << ',' << r.cache_m << ',' << r.cache_b << ','
           << r.comparisons << ',' << r.simulated_misses << ',' << r.inserts << ','
           << r.extracts << ',' << r.peak_size << ',' << r.max_capacity << ','
           << r.chain_events << ',' << join_sweeps(r.sweeps_per_link) << ',' << r.links << ','
           << r.time_s << ',' << (r.oracle_ok ? "true" : "false") << '\n';
    }
}

void write_json(std::ostream& os, const std::vector<BenchRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const BenchRow& r : rows) {
        nlohmann::json o;
        o["scenario"] = r.scenario;
        o["variant"] = r.variant;
        o["n"] = r.n;
        o["k"] = r.k;
        o["terms"] = r.terms;
        o["shape"] = r.shape;
        o["seed"] = r.seed;
        o["cache_m"] = r.cache_m;
        o["cache_b"] = r.cache_b;
        o["comparisons"] = r.comparisons;
        o["simulated_misses"] = r.simulated_misses;
        o["inserts"] = r.inserts;
        o["extracts"] = r.extracts;
        o["peak_size"] = r.peak_size;
        o["max_capacity"] = r.max_capacity;
        o["chain_events"] = r.chain_events;
        o["sweeps_per_link"] = r.sweeps_per_link;
        o["links"] = r.links;
        o["time_s"] = r.time_s;
        o["oracle_ok"] = r.oracle_ok;
        arr.push_back(std::move(o));
    }
    os << arr.dump(2) << '\n';
}

} // namespace fhsop
