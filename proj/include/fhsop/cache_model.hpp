#ifndef FHSOP_CACHE_MODEL_HPP
#define FHSOP_CACHE_MODEL_HPP

#include <cstdint>
#include <list>
#include <unordered_map>
#include <vector>

#include "fhsop/trace.hpp"

namespace fhsop {

// Ideal-cache model: fully associative, LRU, capacity M words in lines of B
// words. A miss is one block transfer. Fully associative LRU keeps the
// inclusion property, so miss counts are monotone non-increasing in M.
class CacheModel final : public MemoryTraceSink {
public:
    CacheModel(std::uint64_t capacity_words, std::uint64_t line_words)
        : capacity_words_(capacity_words),
          line_words_(line_words),
          max_lines_(capacity_words / line_words) {}

    void on_access(std::uint64_t address) override;

    std::uint64_t misses() const { return misses_; }
    std::uint64_t hits() const { return hits_; }
    std::uint64_t accesses() const { return misses_ + hits_; }
    std::uint64_t capacity_words() const { return capacity_words_; }
    std::uint64_t line_words() const { return line_words_; }

private:
    std::uint64_t capacity_words_;
    std::uint64_t line_words_;
    std::uint64_t max_lines_;
    std::uint64_t misses_ = 0;
    std::uint64_t hits_ = 0;
    std::list<std::uint64_t> lru_; // front = most recently used line
    std::unordered_map<std::uint64_t, std::list<std::uint64_t>::iterator> where_;
};

// Replays a recorded access trace and checks the traversal bound
// misses <= c*n_items/B + M/B (rounded up). n_items is the logical item
// count of whatever produced the trace, not the access count.
bool traversal_miss_bound_check(const std::vector<std::uint64_t>& trace,
                                std::uint64_t n_items, std::uint64_t m_words,
                                std::uint64_t b_words, std::uint64_t c = 2,
                                std::uint64_t* out_misses = nullptr);

} // namespace fhsop

#endif
