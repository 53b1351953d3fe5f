#ifndef FHSOP_ERRORS_HPP
#define FHSOP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fhsop {

struct ArenaExhausted : std::runtime_error {
    explicit ArenaExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyHeap : std::runtime_error {
    EmptyHeap() : std::runtime_error("extract on empty heap") {}
};

struct OracleMismatch : std::runtime_error {
    explicit OracleMismatch(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fhsop

#endif
