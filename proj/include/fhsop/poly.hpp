#ifndef FHSOP_POLY_HPP
#define FHSOP_POLY_HPP

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace fhsop {

// Prime field F_p with word-sized elements. The kernels only add and
// multiply, so no inverse machinery is needed; p stays small (default 3).
struct FieldSpec {
    std::int64_t p;

    explicit FieldSpec(std::int64_t prime);

    static bool is_prime(std::int64_t n);

    std::int64_t reduce(std::int64_t x) const {
        std::int64_t r = x % p;
        return r < 0 ? r + p : r;
    }
    std::int64_t add(std::int64_t a, std::int64_t b) const { return reduce(a + b); }
    std::int64_t mul(std::int64_t a, std::int64_t b) const { return reduce(a * b); }
};

// Non-zero term: coefficient in [1, p-1] and total-degree order.
struct Term {
    std::int64_t coeff;
    std::int64_t order;

    friend bool operator==(const Term&, const Term&) = default;
};

// Sparse distributed representation: the sum of non-zero terms, sorted on
// strictly decreasing order. The zero polynomial has no terms.
class SparsePoly {
public:
    SparsePoly() = default;

    // Reduces mod p, combines equal orders, drops zeros, sorts descending.
    static SparsePoly normalize(std::vector<std::pair<std::int64_t, std::int64_t>> raw,
                                const FieldSpec& field);

    // Terms must already satisfy the representation invariants.
    static SparsePoly from_sorted_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    std::int64_t max_order() const { return terms_.front().order; }

    bool invariants_hold(const FieldSpec& field) const;

    friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

private:
    std::vector<Term> terms_;
};

// Direct-accumulation oracle for S_k = sum_{i=1}^{k-1} g_i * h_{k-i}.
// gs[i-1] pairs with hs[k-i-1]; every kernel variant is checked against this.
SparsePoly naive_sum_of_products(const std::vector<SparsePoly>& gs,
                                 const std::vector<SparsePoly>& hs,
                                 const FieldSpec& field);

// Text fixture format: header "p <modulus> k <count>", then per polynomial a
// "terms <n>" line followed by n lines of "coeff order".
void write_poly_set(std::ostream& os, const FieldSpec& field,
                    const std::vector<SparsePoly>& polys);
std::pair<FieldSpec, std::vector<SparsePoly>> read_poly_set(std::istream& is);

} // namespace fhsop

#endif
