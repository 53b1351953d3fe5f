#include "fhsop/cache_model.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace fhsop {

void CacheModel::on_access(std::uint64_t address) {
    if (max_lines_ == 0) { // degenerate cache: everything misses
        ++misses_;
        return;
    }
    std::uint64_t line = address / line_words_;
    auto it = where_.find(line);
    if (it != where_.end()) {
        ++hits_;
        lru_.splice(lru_.begin(), lru_, it->second);
        return;
    }
    ++misses_;
    lru_.push_front(line);
    where_[line] = lru_.begin();
    if (lru_.size() > max_lines_) {
        where_.erase(lru_.back());
        lru_.pop_back();
    }
}

bool traversal_miss_bound_check(const std::vector<std::uint64_t>& trace,
                                std::uint64_t n_items, std::uint64_t m_words,
                                std::uint64_t b_words, std::uint64_t c,
                                std::uint64_t* out_misses) {
    CacheModel model(m_words, b_words);
    for (std::uint64_t a : trace) model.on_access(a);
    std::uint64_t bound =
        (c * n_items + b_words - 1) / b_words + (m_words + b_words - 1) / b_words;
    if (out_misses) *out_misses = model.misses();
    return model.misses() <= bound;
}

void TraceRecorder::write(std::ostream& os) const {
    for (std::size_t i = 0; i < addresses_.size(); ++i)
        os << i << ' ' << addresses_[i] << '\n';
}

std::vector<std::uint64_t> TraceRecorder::read(std::istream& is) {
    std::vector<std::uint64_t> addrs;
    std::uint64_t tick, addr;
    while (is >> tick >> addr) addrs.push_back(addr);
    return addrs;
}

} // namespace fhsop
