#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "fhsop/arena.hpp"
#include "fhsop/bench.hpp"
#include "fhsop/cache_model.hpp"

using namespace fhsop;

TEST_CASE("line granularity: one miss per fresh line") {
    CacheModel m(64, 8);
    for (std::uint64_t a = 0; a < 8; ++a) m.on_access(a);
    CHECK(m.misses() == 1);
    CHECK(m.hits() == 7);
}

TEST_CASE("single-line cache thrashes on alternation") {
    CacheModel m(8, 8); // M == B: one resident line
    for (int i = 0; i < 10; ++i) {
        m.on_access(0);
        m.on_access(8);
    }
    CHECK(m.misses() == 20);
}

TEST_CASE("sequential scan costs ceil(N/B) misses") {
    for (std::uint64_t n : {1ull, 63ull, 64ull, 65ull, 1000ull}) {
        CacheModel m(4096, 64);
        for (std::uint64_t a = 0; a < n; ++a) m.on_access(a);
        CHECK(m.misses() == (n + 63) / 64);
    }
}

TEST_CASE("identical traces give identical miss counts") {
    Rng rng(5);
    std::vector<std::uint64_t> trace;
    for (int i = 0; i < 20000; ++i) trace.push_back(rng.uniform(0, 1 << 16));
    CacheModel a(1 << 12, 64), b(1 << 12, 64);
    for (std::uint64_t x : trace) a.on_access(x);
    for (std::uint64_t x : trace) b.on_access(x);
    CHECK(a.misses() == b.misses());
}

TEST_CASE("LRU inclusion: misses monotone non-increasing in M") {
    Rng rng(9);
    std::vector<std::uint64_t> trace;
    for (int i = 0; i < 30000; ++i) trace.push_back(rng.uniform(0, 1 << 15));
    std::uint64_t prev = UINT64_MAX;
    for (std::uint64_t m : {1u << 9, 1u << 11, 1u << 13, 1u << 15}) {
        CacheModel c(m, 64);
        for (std::uint64_t x : trace) c.on_access(x);
        CHECK(c.misses() <= prev);
        prev = c.misses();
    }
}

TEST_CASE("traversal bound accepts batched appends and rejects random ones") {
    SUBCASE("descending batched trace passes with c=2") {
        // Two accesses per item, directory slot then chain slot, orders
        // visited in one descending pass.
        std::vector<std::uint64_t> trace;
        std::uint64_t chain_base = 20000;
        std::uint64_t n = 10000;
        for (std::uint64_t i = 0; i < n; ++i) {
            trace.push_back(n - 1 - i);          // directory, descending
            trace.push_back(chain_base + i);     // chain log, ascending
        }
        CHECK(traversal_miss_bound_check(trace, n, 1 << 12, 64));
    }
    SUBCASE("random-order appends violate the bound for small M") {
        Rng rng(3);
        std::vector<std::uint64_t> trace;
        std::uint64_t n = 10000;
        for (std::uint64_t i = 0; i < n; ++i) {
            trace.push_back(rng.uniform(0, 1 << 16));
            trace.push_back(rng.uniform(1 << 16, 1 << 17));
        }
        CHECK_FALSE(traversal_miss_bound_check(trace, n, 512, 64));
    }
    SUBCASE("empty trace has zero misses") {
        std::uint64_t misses = 1;
        CHECK(traversal_miss_bound_check({}, 0, 4096, 64, 2, &misses));
        CHECK(misses == 0);
    }
}

TEST_CASE("trace recorder round trips through the text format") {
    TraceRecorder rec;
    rec.on_access(5);
    rec.on_access(700);
    rec.on_access(5);
    std::stringstream ss;
    rec.write(ss);
    CHECK(ss.str() == "0 5\n1 700\n2 5\n");
    CHECK(TraceRecorder::read(ss) == rec.addresses());
}

TEST_CASE("arena allocations are contiguous and never move") {
    Arena a;
    std::uint64_t b1 = a.alloc(10);
    std::uint64_t b2 = a.alloc(5);
    CHECK(b2 == b1 + 10);
    a.write(b1 + 3, HeapEntry{42, 1, 0});
    a.alloc(1 << 20); // growth must not disturb existing slots
    a.write(b2 + 4, HeapEntry{7, 2, 0});
    CHECK(a.peek_raw(b1 + 3).order == 42);
    CHECK(a.peek_raw(b2 + 4).order == 7);
}

TEST_CASE("arena reports every slot access to its sink") {
    TraceRecorder rec;
    Arena a(&rec);
    std::uint64_t base = a.alloc(4);
    a.write(base + 2, HeapEntry{1, 0, 0});
    a.read(base + 2);
    a.touch(base);
    CHECK(rec.addresses() == std::vector<std::uint64_t>{base + 2, base + 2, base});
}

TEST_CASE("arena limit raises ArenaExhausted") {
    Arena a(nullptr, 100);
    CHECK_NOTHROW(a.alloc(100));
    CHECK_THROWS_AS(a.alloc(1), ArenaExhausted);
}

TEST_CASE("arena commits backing chunks lazily") {
    Arena a;
    a.alloc(1ull << 30); // huge address range, nothing touched
    CHECK(a.committed_words() == 0);
    a.write(12345, HeapEntry{});
    CHECK(a.committed_words() == Arena::kChunkSlots);
}
