#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "fhsop/bench.hpp"
#include "fhsop/binary_heap.hpp"

using namespace fhsop;

TEST_CASE("insert extract basics") {
    BinaryMaxHeap h;
    h.insert(5);
    CHECK(h.extract_max().order == 5);
    CHECK(h.empty());

    h.insert(1);
    h.insert(3);
    h.insert(2);
    CHECK(h.extract_max().order == 3);
    CHECK(h.extract_max().order == 2);
    CHECK(h.extract_max().order == 1);
    CHECK_THROWS_AS(h.extract_max(), EmptyHeap);
}

TEST_CASE("extraction equals descending stable sort by (order, seq)") {
    Rng rng(2024);
    BinaryMaxHeap h;
    std::vector<HeapEntry> inserted;
    for (int i = 0; i < 10000; ++i) {
        std::int64_t v = static_cast<std::int64_t>(rng.uniform(0, 500)); // duplicates likely
        std::uint64_t seq = h.insert(v);
        inserted.push_back({v, seq, 0});
    }
    std::sort(inserted.begin(), inserted.end(), entry_greater);
    for (const HeapEntry& want : inserted) {
        HeapEntry got = h.extract_max();
        CHECK(got.order == want.order);
        CHECK(got.seq == want.seq);
    }
    CHECK(h.empty());
}

TEST_CASE("comparison counter grows and slot traffic reaches the sink") {
    TraceRecorder rec;
    BinaryMaxHeap h(&rec);
    std::size_t before = rec.addresses().size();
    h.insert(1);
    h.insert(2);
    CHECK(h.counters().comparisons > 0);
    CHECK(rec.addresses().size() > before);
}

TEST_CASE("chained insert groups duplicates") {
    NaiveChainedHeap h;
    SUBCASE("same order twice: one slot, one chained") {
        h.insert(7);
        h.insert(7);
        CHECK(h.heap_size() == 1);
        CHECK(h.chained_total() == 1);
        auto [top, chained] = h.extract_max();
        CHECK(top.order == 7);
        REQUIRE(chained.size() == 1);
        CHECK(chained[0].order == 7);
    }
    SUBCASE("two orders twice: two slots, two chains of one") {
        for (std::int64_t v : {7, 5, 7, 5}) h.insert(v);
        CHECK(h.heap_size() == 2);
        CHECK(h.chained_total() == 2);
    }
    SUBCASE("no duplicates means empty chains") {
        for (std::int64_t v : {4, 9, 1}) h.insert(v);
        while (!h.empty()) CHECK(h.extract_max().second.empty());
    }
}

TEST_CASE("chained heap size equals distinct order count") {
    Rng rng(31);
    NaiveChainedHeap h;
    std::multiset<std::int64_t> inserted;
    std::set<std::int64_t> distinct;
    for (int i = 0; i < 1000; ++i) {
        std::int64_t v = static_cast<std::int64_t>(rng.uniform(0, 60));
        h.insert(v);
        inserted.insert(v);
        distinct.insert(v);
    }
    CHECK(h.heap_size() == distinct.size());

    // Conservation and drain count: one extraction per distinct order, and
    // everything inserted comes back out.
    std::multiset<std::int64_t> returned;
    std::uint64_t extract_calls = 0;
    std::int64_t prev = INT64_MAX;
    while (!h.empty()) {
        auto [top, chained] = h.extract_max();
        ++extract_calls;
        CHECK(top.order < prev);
        prev = top.order;
        returned.insert(top.order);
        for (const HeapEntry& e : chained) {
            CHECK(e.order == top.order);
            returned.insert(e.order);
        }
    }
    CHECK(extract_calls == distinct.size());
    CHECK(returned == inserted);
}

TEST_CASE("replica scan cost lands in the comparison counter") {
    NaiveChainedHeap h;
    for (std::int64_t v = 0; v < 100; ++v) h.insert(v);
    std::uint64_t before = h.counters().comparisons;
    h.insert(1000); // full scan, no replica
    CHECK(h.counters().comparisons - before >= 100);
}
