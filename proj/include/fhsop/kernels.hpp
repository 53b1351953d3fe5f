#ifndef FHSOP_KERNELS_HPP
#define FHSOP_KERNELS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fhsop/counters.hpp"
#include "fhsop/entry.hpp"
#include "fhsop/funnel_heap.hpp"
#include "fhsop/poly.hpp"
#include "fhsop/trace.hpp"

namespace fhsop {

// Sums-of-products kernel variants computing S_k = sum g_i * h_{k-i}.
enum class KernelVariant {
    Serial,      // every product separately, then one k-merger pass
    Binary,      // global binary max-heap
    BinaryChain, // binary heap with scan-and-chain on insert
    Funnel,      // funnel heap, no chaining
    FunnelChain, // funnel heap with batched chaining
    FunnelRank,  // batched chaining plus rank-driven deferred seeding
};

const char* kernel_variant_name(KernelVariant v);
std::optional<KernelVariant> kernel_variant_from_name(const std::string& name);

// Product cursor (i, u, w): term u of g_i times term w of h_{k-i}, 1-based.
struct ProductCursor {
    std::uint32_t pair; // i in 1..k-1
    std::uint32_t u;
    std::uint32_t w;
};

std::uint64_t pack_cursor(const ProductCursor& c);
ProductCursor unpack_cursor(std::uint64_t payload);

struct EventRecord {
    enum class Op { Insert, Extract, Chain, Activate } op;
    std::int64_t order;
    std::uint32_t pair;
    std::uint32_t u;
    std::uint32_t w;
    std::uint64_t tick; // extraction round index
};

struct EventLog {
    std::vector<EventRecord> records;
    void write(std::ostream& os) const; // "<op> <order> <pair> <u> <w> <tick>"
};

// Pair activation schedule: distinct head orders alpha, each with the set of
// pair indices whose product has that total order, sorted strictly
// decreasing on alpha.
struct OrderSchedule {
    struct Entry {
        std::int64_t alpha;
        std::vector<std::uint32_t> pairs;
    };
    std::vector<Entry> entries;
};

OrderSchedule build_order_schedule(const std::vector<SparsePoly>& gs,
                                   const std::vector<SparsePoly>& hs);

struct KernelOptions {
    FunnelHeap::SweepMode sweep_mode = FunnelHeap::SweepMode::Canonical;
    MemoryTraceSink* sink = nullptr;
    EventLog* event_log = nullptr;
    bool record_lifetimes = false;
};

struct KernelStats {
    Counters counters;
    std::uint64_t products_total = 0;
    std::uint64_t products_processed = 0;
    std::uint64_t chain_appends = 0;
    std::uint64_t links_allocated = 0;
    std::vector<std::int64_t> chain_first_append_orders;
    std::vector<std::uint64_t> chain_append_trace;
};

struct KernelResult {
    SparsePoly s;
    KernelStats stats;
};

KernelResult run_kernel(KernelVariant variant, const std::vector<SparsePoly>& gs,
                        const std::vector<SparsePoly>& hs, const FieldSpec& field,
                        const KernelOptions& opt = KernelOptions{});

} // namespace fhsop

#endif
