#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "fhsop/bench.hpp"
#include "fhsop/kmerger.hpp"

using namespace fhsop;

namespace {

// Stage plain values as descending streams and drain the merger fully.
struct Rig {
    Arena arena;
    Counters counters;

    std::vector<StreamLeafSource::Stream> stage(
        const std::vector<std::vector<std::int64_t>>& vals) {
        std::uint64_t total = 0;
        for (const auto& v : vals) total += v.size();
        std::uint64_t seq = total;
        std::vector<StreamLeafSource::Stream> streams;
        for (const auto& v : vals) {
            StreamLeafSource::Stream s{arena.alloc(std::max<std::size_t>(1, v.size())),
                                       v.size(), 0};
            std::uint64_t a = s.base;
            for (std::int64_t x : v) arena.write_raw(a++, HeapEntry{x, seq--, 0});
            streams.push_back(s);
        }
        return streams;
    }

    std::vector<std::int64_t> drain(KMerger& m, StreamLeafSource& leaves) {
        std::vector<std::int64_t> out;
        while (true) {
            if (m.output().empty()) {
                m.fill(leaves);
                if (m.output().empty()) break;
            }
            m.output_head();
            out.push_back(m.pop_output_after_head().order);
        }
        return out;
    }
};

std::size_t count_buffers_with_capacity(KMerger& m, std::uint64_t cap) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < m.nodes().size(); ++i)
        if (i != m.root() && m.nodes()[i].out.cap == cap) ++n;
    return n;
}

} // namespace

TEST_CASE("build: output capacity is k^3 and split buffers follow k^{3/2}") {
    Rig r;
    SUBCASE("k=2 is a single binary merger with output 8") {
        KMerger m = KMerger::build(2, r.arena, r.counters, 8);
        CHECK(m.output().cap == 8);
        CHECK(m.nodes().size() == 1);
    }
    SUBCASE("k=4: top and bottom 2-mergers joined by capacity-8 buffers") {
        KMerger m = KMerger::build(4, r.arena, r.counters, 64);
        CHECK(m.output().cap == 64);
        CHECK(m.nodes().size() == 3);
        CHECK(count_buffers_with_capacity(m, 8) == 2);
    }
    SUBCASE("k=16: the split feeds the top part through four 16^{3/2} = 64 buffers") {
        KMerger m = KMerger::build(16, r.arena, r.counters, 4096);
        CHECK(m.nodes().size() == 15);
        CHECK(count_buffers_with_capacity(m, 64) == 4);
        CHECK(count_buffers_with_capacity(m, 8) == 10); // 2-merger outputs inside both parts
    }
    SUBCASE("k=8: fractional exponent rounds up to a power of two") {
        KMerger m = KMerger::build(8, r.arena, r.counters, 512);
        CHECK(count_buffers_with_capacity(m, 32) == 4); // next pow2 above 8^{3/2}
    }
    SUBCASE("k must be a power of two") {
        CHECK_THROWS_AS(KMerger::build(3, r.arena, r.counters, 27), std::invalid_argument);
    }
}

TEST_CASE("build respects arena limits") {
    Arena small(nullptr, 50);
    Counters c;
    CHECK_THROWS_AS(KMerger::build(4, small, c, 64), ArenaExhausted);
}

TEST_CASE("merge basics") {
    Rig r;
    SUBCASE("k=2 simple merge") {
        auto streams = r.stage({{5, 3}, {4}});
        KMerger m = KMerger::build(2, r.arena, r.counters, 8);
        StreamLeafSource leaves(r.arena, streams);
        m.prime(leaves);
        CHECK(r.drain(m, leaves) == std::vector<std::int64_t>{5, 4, 3});
    }
    SUBCASE("k=4 equal keys come out stably by stream index") {
        auto streams = r.stage({{2, 1}, {2, 1}, {2, 1}, {2, 1}});
        KMerger m = KMerger::build(4, r.arena, r.counters, 64);
        StreamLeafSource leaves(r.arena, streams);
        m.prime(leaves);
        CHECK(r.drain(m, leaves) == std::vector<std::int64_t>{2, 2, 2, 2, 1, 1, 1, 1});
    }
    SUBCASE("missing streams bind to empty inputs") {
        auto streams = r.stage({{9, 2}});
        KMerger m = KMerger::build(4, r.arena, r.counters, 64);
        StreamLeafSource leaves(r.arena, streams);
        m.prime(leaves);
        CHECK(r.drain(m, leaves) == std::vector<std::int64_t>{9, 2});
    }
}

TEST_CASE("k=64 random streams: merge equals descending sort, bounded comparisons") {
    Rig r;
    Rng rng(64);
    std::vector<std::vector<std::int64_t>> vals(64);
    std::vector<std::int64_t> expected;
    for (auto& v : vals) {
        for (int i = 0; i < 8; ++i)
            v.push_back(static_cast<std::int64_t>(rng.uniform(0, 100000)));
        std::sort(v.begin(), v.end(), std::greater<>());
        expected.insert(expected.end(), v.begin(), v.end());
    }
    std::sort(expected.begin(), expected.end(), std::greater<>());
    auto streams = r.stage(vals);
    KMerger m = KMerger::build(64, r.arena, r.counters, 64 * 64 * 64);
    StreamLeafSource leaves(r.arena, streams);
    m.prime(leaves);
    CHECK(r.drain(m, leaves) == expected);
    // 512 elements through depth log2(64) = 6.
    CHECK(r.counters.comparisons <= 512 * 6);
    MESSAGE("k=64 x 8 comparison count: ", r.counters.comparisons);
}

TEST_CASE("unequal stream lengths merge correctly") {
    Rig r;
    Rng rng(7);
    std::vector<std::vector<std::int64_t>> vals(8);
    std::vector<std::int64_t> expected;
    for (std::size_t s = 0; s < vals.size(); ++s) {
        std::uint64_t len = rng.uniform(0, 40);
        for (std::uint64_t i = 0; i < len; ++i)
            vals[s].push_back(static_cast<std::int64_t>(rng.uniform(0, 1000)));
        std::sort(vals[s].begin(), vals[s].end(), std::greater<>());
        expected.insert(expected.end(), vals[s].begin(), vals[s].end());
    }
    std::sort(expected.begin(), expected.end(), std::greater<>());
    auto streams = r.stage(vals);
    KMerger m = KMerger::build(8, r.arena, r.counters, 512);
    StreamLeafSource leaves(r.arena, streams);
    m.prime(leaves);
    CHECK(r.drain(m, leaves) == expected);
}

TEST_CASE("fill against a tiny output buffer stops exactly at capacity") {
    Rig r;
    auto streams = r.stage({{5}, {4, 2}});
    KMerger m = KMerger::build(2, r.arena, r.counters, 2);
    StreamLeafSource leaves(r.arena, streams);
    m.prime(leaves);
    m.fill(leaves);
    REQUIRE(m.output().count == 2);
    m.output_head();
    CHECK(m.pop_output_after_head().order == 5);
    m.output_head();
    CHECK(m.pop_output_after_head().order == 4);
    CHECK(leaves.remaining(1) == 1); // the 2 stays behind
    m.fill(leaves);
    m.output_head();
    CHECK(m.pop_output_after_head().order == 2);
}

TEST_CASE("fill with exhausted inputs is a no-op") {
    Rig r;
    auto streams = r.stage({{}, {}});
    KMerger m = KMerger::build(2, r.arena, r.counters, 8);
    StreamLeafSource leaves(r.arena, streams);
    m.prime(leaves);
    m.fill(leaves);
    CHECK(m.output().empty());
    CHECK(r.counters.comparisons == 0);
}

TEST_CASE("one invocation emits at most the output capacity") {
    Rig r;
    std::vector<std::vector<std::int64_t>> vals(2);
    for (int i = 100; i > 0; --i) vals[i % 2].push_back(i);
    auto streams = r.stage(vals);
    KMerger m = KMerger::build(2, r.arena, r.counters, 8);
    StreamLeafSource leaves(r.arena, streams);
    m.prime(leaves);
    m.fill(leaves);
    CHECK(m.output().count == 8); // capacity k^3, not the full input
}
