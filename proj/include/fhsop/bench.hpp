#ifndef FHSOP_BENCH_HPP
#define FHSOP_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fhsop/funnel_heap.hpp"
#include "fhsop/kernels.hpp"
#include "fhsop/poly.hpp"

namespace fhsop {

// Deterministic uniform draw in [lo, hi]: raw mt19937_64 output (fully
// specified by the standard) with rejection, so results do not depend on
// the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    std::uint64_t next() { return eng_(); }
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);

private:
    std::mt19937_64 eng_;
};

struct CacheConfig {
    bool enabled = false;
    std::uint64_t m = 0;
    std::uint64_t b = 0;
};

// One output row; the column set is fixed across scenarios and mirrored
// exactly by the JSON writer.
struct BenchRow {
    std::string scenario;
    std::string variant;
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    std::uint64_t terms = 0;
    std::string shape;
    std::uint64_t seed = 0;
    std::uint64_t cache_m = 0;
    std::uint64_t cache_b = 0;
    std::uint64_t comparisons = 0;
    std::uint64_t simulated_misses = 0;
    std::uint64_t inserts = 0;
    std::uint64_t extracts = 0;
    std::uint64_t peak_size = 0;
    std::uint64_t max_capacity = 0;
    std::uint64_t chain_events = 0;
    std::vector<std::uint64_t> sweeps_per_link;
    std::uint64_t links = 0;
    double time_s = 0.0;
    bool oracle_ok = true;
};

struct GenericPqSpec {
    std::uint64_t n = 1u << 16; // even, >= 2
    std::vector<std::string> variants{"binary", "funnel"};
    FunnelHeap::SweepMode sweep_mode = FunnelHeap::SweepMode::Canonical;
    std::uint64_t seed = 1;
    CacheConfig cache;
};

struct HenselSpec {
    std::uint64_t n = 1000; // maximal order drawn for terms
    std::uint64_t k = 64;   // lifting step: k-1 polynomial pairs
    std::uint64_t terms = 32;
    std::int64_t prime = 3;
    std::vector<KernelVariant> variants;
    FunnelHeap::SweepMode sweep_mode = FunnelHeap::SweepMode::Canonical;
    std::uint64_t seed = 1;
    CacheConfig cache;
    // When set, the instance comes from a fixture instead of the generator.
    const std::vector<SparsePoly>* fixture_gs = nullptr;
    const std::vector<SparsePoly>* fixture_hs = nullptr;
};

struct MergerSpec {
    std::string shape = "kxk"; // k2xk | kxk | kxk2
    std::uint64_t k = 64;      // number of streams, power of two <= 512
    std::vector<std::string> variants{"kmerger", "funnelheap"};
    FunnelHeap::SweepMode sweep_mode = FunnelHeap::SweepMode::Canonical;
    std::uint64_t seed = 1;
    CacheConfig cache;
};

// Random sparse polynomial: exactly `terms` orders drawn uniformly without
// replacement from [0, max_order], coefficients uniform in [1, p-1].
SparsePoly random_poly(Rng& rng, std::uint64_t terms, std::uint64_t max_order,
                       const FieldSpec& field);

// Instance generator for the Hensel scenario: k-1 polynomials per side.
void generate_hensel_instance(const HenselSpec& spec, std::vector<SparsePoly>& gs,
                              std::vector<SparsePoly>& hs);

std::vector<BenchRow> run_generic_pq(const GenericPqSpec& spec);
std::vector<BenchRow> run_hensel(const HenselSpec& spec); // throws OracleMismatch
std::vector<BenchRow> run_merger_bench(const MergerSpec& spec);

void write_csv(std::ostream& os, const std::vector<BenchRow>& rows);
void write_json(std::ostream& os, const std::vector<BenchRow>& rows);

} // namespace fhsop

#endif
