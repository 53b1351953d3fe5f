#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "fhsop/bench.hpp"
#include "fhsop/poly.hpp"

using namespace fhsop;

namespace {

SparsePoly poly(std::initializer_list<std::pair<std::int64_t, std::int64_t>> raw,
                const FieldSpec& f) {
    return SparsePoly::normalize(std::vector<std::pair<std::int64_t, std::int64_t>>(raw), f);
}

std::vector<Term> terms(std::initializer_list<Term> ts) { return {ts}; }

} // namespace

TEST_CASE("field modulus must be prime") {
    CHECK_NOTHROW(FieldSpec(2));
    CHECK_NOTHROW(FieldSpec(3));
    CHECK_NOTHROW(FieldSpec(7));
    CHECK_THROWS_AS(FieldSpec(1), std::invalid_argument);
    CHECK_THROWS_AS(FieldSpec(9), std::invalid_argument);
}

TEST_CASE("normalize combines, reduces, drops zeros") {
    FieldSpec f3(3);
    CHECK(poly({{2, 5}, {2, 5}}, f3).terms() == terms({{1, 5}}));
    CHECK(poly({{1, 4}, {2, 4}}, f3).is_zero());
    CHECK(poly({{1, 0}, {2, 7}, {1, 7}}, f3).terms() == terms({{1, 0}}));
}

TEST_CASE("normalize is idempotent") {
    FieldSpec f7(7);
    Rng rng(99);
    for (int it = 0; it < 50; ++it) {
        std::vector<std::pair<std::int64_t, std::int64_t>> raw;
        std::uint64_t n = rng.uniform(0, 30);
        for (std::uint64_t i = 0; i < n; ++i)
            raw.emplace_back(static_cast<std::int64_t>(rng.uniform(0, 40)) - 20,
                             static_cast<std::int64_t>(rng.uniform(0, 12)));
        SparsePoly once = SparsePoly::normalize(raw, f7);
        std::vector<std::pair<std::int64_t, std::int64_t>> again;
        for (const Term& t : once.terms()) again.emplace_back(t.coeff, t.order);
        CHECK(SparsePoly::normalize(again, f7) == once);
        CHECK(once.invariants_hold(f7));
    }
}

TEST_CASE("naive sum of products on the worked examples") {
    FieldSpec f3(3);
    SUBCASE("k=2 single product") {
        std::vector<SparsePoly> gs{poly({{1, 1}}, f3)};
        std::vector<SparsePoly> hs{poly({{1, 1}}, f3)};
        CHECK(naive_sum_of_products(gs, hs, f3).terms() == terms({{1, 2}}));
    }
    SUBCASE("k=3 full cancellation") {
        std::vector<SparsePoly> gs{poly({{1, 1}}, f3), poly({{1, 0}}, f3)};
        std::vector<SparsePoly> hs{poly({{1, 1}}, f3), poly({{2, 0}}, f3)};
        CHECK(naive_sum_of_products(gs, hs, f3).is_zero());
    }
    SUBCASE("k=3 hand multiplication") {
        std::vector<SparsePoly> gs{poly({{1, 2}, {1, 0}}, f3), poly({{1, 1}}, f3)};
        std::vector<SparsePoly> hs{poly({{2, 0}}, f3), poly({{1, 2}}, f3)};
        CHECK(naive_sum_of_products(gs, hs, f3).terms() ==
              terms({{1, 4}, {1, 2}, {2, 1}}));
    }
}

TEST_CASE("sum of products accepts zero polynomials") {
    FieldSpec f3(3);
    // Pair 1 is gs[0]*hs[1], pair 2 is gs[1]*hs[0]; both hit a zero operand.
    std::vector<SparsePoly> gs{SparsePoly{}, poly({{1, 1}}, f3)};
    std::vector<SparsePoly> hs{SparsePoly{}, poly({{2, 3}}, f3)};
    CHECK(naive_sum_of_products(gs, hs, f3).is_zero());
    CHECK(naive_sum_of_products({}, {}, f3).is_zero());

    std::vector<SparsePoly> hs2{poly({{2, 3}}, f3), SparsePoly{}};
    CHECK(naive_sum_of_products(gs, hs2, f3).terms() ==
          terms({{2, 4}})); // only the live pair contributes
}

TEST_CASE("pair swap symmetry") {
    FieldSpec f7(7);
    Rng rng(123);
    for (int it = 0; it < 30; ++it) {
        std::uint64_t k = rng.uniform(2, 8);
        std::vector<SparsePoly> gs, hs;
        for (std::uint64_t i = 0; i + 1 < k; ++i) {
            gs.push_back(random_poly(rng, rng.uniform(0, 6), 15, f7));
            hs.push_back(random_poly(rng, rng.uniform(0, 6), 15, f7));
        }
        // Swapping (g_i, h_{k-i}) with (h_{k-i}, g_i) for all i reverses both
        // sides: product i of the swapped instance is h_{k-i} * g_i.
        std::vector<SparsePoly> gs2(hs.rbegin(), hs.rend());
        std::vector<SparsePoly> hs2(gs.rbegin(), gs.rend());
        CHECK(naive_sum_of_products(gs, hs, f7) == naive_sum_of_products(gs2, hs2, f7));
    }
}

TEST_CASE("k=2 term count bounds") {
    FieldSpec f7(7);
    Rng rng(77);
    for (int it = 0; it < 40; ++it) {
        SparsePoly g = random_poly(rng, rng.uniform(1, 10), 30, f7);
        SparsePoly h = random_poly(rng, rng.uniform(1, 10), 30, f7);
        SparsePoly s = naive_sum_of_products({g}, {h}, f7);
        CHECK(s.size() <= g.size() * h.size());
        // Detect cancellation directly so the lower bound only applies when
        // no coefficient ever vanished during accumulation.
        std::vector<std::int64_t> dense(
            static_cast<std::size_t>(g.max_order() + h.max_order()) + 1, 0);
        bool cancelled = false;
        for (const Term& tg : g.terms())
            for (const Term& th : h.terms()) {
                auto& slot = dense[static_cast<std::size_t>(tg.order + th.order)];
                slot = f7.reduce(slot + f7.mul(tg.coeff, th.coeff));
                if (slot == 0) cancelled = true;
            }
        if (!cancelled) CHECK(s.size() >= std::max(g.size(), h.size()));
    }
}

TEST_CASE("polynomial set text round trip") {
    FieldSpec f3(3);
    std::vector<SparsePoly> polys{poly({{1, 4}, {2, 1}}, f3), SparsePoly{},
                                  poly({{2, 9}}, f3)};
    std::stringstream ss;
    write_poly_set(ss, f3, polys);
    auto [field, back] = read_poly_set(ss);
    CHECK(field.p == 3);
    CHECK(back == polys);
}

TEST_CASE("rejects malformed text") {
    std::stringstream ss("q 3 k 1\n");
    CHECK_THROWS(read_poly_set(ss));
}
