#include "fhsop/poly.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fhsop {

FieldSpec::FieldSpec(std::int64_t prime) : p(prime) {
    if (!is_prime(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
}

bool FieldSpec::is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

SparsePoly SparsePoly::normalize(std::vector<std::pair<std::int64_t, std::int64_t>> raw,
                                 const FieldSpec& field) {
    std::sort(raw.begin(), raw.end(),
              [](const auto& a, const auto& b) { return a.second > b.second; });
    SparsePoly out;
    std::size_t i = 0;
    while (i < raw.size()) {
        std::int64_t order = raw[i].second;
        std::int64_t acc = 0;
        while (i < raw.size() && raw[i].second == order) {
            acc = field.add(acc, field.reduce(raw[i].first));
            ++i;
        }
        if (acc != 0) out.terms_.push_back({acc, order});
    }
    return out;
}

SparsePoly SparsePoly::from_sorted_terms(std::vector<Term> terms) {
    SparsePoly out;
    out.terms_ = std::move(terms);
    return out;
}

bool SparsePoly::invariants_hold(const FieldSpec& field) const {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].coeff <= 0 || terms_[i].coeff >= field.p) return false;
        if (terms_[i].order < 0) return false;
        if (i > 0 && terms_[i - 1].order <= terms_[i].order) return false;
    }
    if (!terms_.empty() &&
        static_cast<std::int64_t>(terms_.size()) > max_order() + 1)
        return false;
    return true;
}

SparsePoly naive_sum_of_products(const std::vector<SparsePoly>& gs,
                                 const std::vector<SparsePoly>& hs,
                                 const FieldSpec& field) {
    if (gs.size() != hs.size())
        throw std::invalid_argument("sum of products needs k-1 polynomials on each side");
    std::int64_t deg = -1;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        const SparsePoly& g = gs[i];
        const SparsePoly& h = hs[hs.size() - 1 - i];
        if (g.is_zero() || h.is_zero()) continue;
        deg = std::max(deg, g.max_order() + h.max_order());
    }
    if (deg < 0) return SparsePoly{};

    std::vector<std::int64_t> dense(static_cast<std::size_t>(deg) + 1, 0);
    for (std::size_t i = 0; i < gs.size(); ++i) {
        const SparsePoly& g = gs[i];
        const SparsePoly& h = hs[hs.size() - 1 - i];
        for (const Term& tg : g.terms())
            for (const Term& th : h.terms()) {
                std::size_t o = static_cast<std::size_t>(tg.order + th.order);
                dense[o] = field.add(dense[o], field.mul(tg.coeff, th.coeff));
            }
    }
    std::vector<Term> terms;
    for (std::int64_t o = deg; o >= 0; --o)
        if (dense[static_cast<std::size_t>(o)] != 0)
            terms.push_back({dense[static_cast<std::size_t>(o)], o});
    return SparsePoly::from_sorted_terms(std::move(terms));
}

void write_poly_set(std::ostream& os, const FieldSpec& field,
                    const std::vector<SparsePoly>& polys) {
    os << "p " << field.p << " k " << polys.size() << '\n';
    for (const SparsePoly& poly : polys) {
        os << "terms " << poly.size() << '\n';
        for (const Term& t : poly.terms()) os << t.coeff << ' ' << t.order << '\n';
    }
}

std::pair<FieldSpec, std::vector<SparsePoly>> read_poly_set(std::istream& is) {
    std::string tok;
    std::int64_t p = 0;
    std::size_t count = 0;
    if (!(is >> tok) || tok != "p" || !(is >> p) || !(is >> tok) || tok != "k" ||
        !(is >> count))
        throw std::runtime_error("bad polynomial set header");
    FieldSpec field(p);
    std::vector<SparsePoly> polys;
    polys.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t n = 0;
        if (!(is >> tok) || tok != "terms" || !(is >> n))
            throw std::runtime_error("bad polynomial block header");
        std::vector<std::pair<std::int64_t, std::int64_t>> raw;
        raw.reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            std::int64_t c, o;
            if (!(is >> c >> o)) throw std::runtime_error("truncated polynomial term");
            raw.emplace_back(c, o);
        }
        polys.push_back(SparsePoly::normalize(std::move(raw), field));
    }
    return {field, std::move(polys)};
}

} // namespace fhsop
