#ifndef FHSOP_ENTRY_HPP
#define FHSOP_ENTRY_HPP

#include <cstdint>

namespace fhsop {

// The unit flowing through every queue and merger: a key (monomial order or
// benchmark integer), an insertion sequence number used as tie-break, and an
// opaque payload (packed product cursor, or unused).
struct HeapEntry {
    std::int64_t order = 0;
    std::uint64_t seq = 0;
    std::uint64_t payload = 0;
};

// Priority rule shared by all structures: lexicographic on (order, seq),
// larger wins. seq is unique per structure, so this is a total order.
inline bool entry_greater(const HeapEntry& a, const HeapEntry& b) {
    if (a.order != b.order) return a.order > b.order;
    return a.seq > b.seq;
}

inline bool entry_less(const HeapEntry& a, const HeapEntry& b) {
    return entry_greater(b, a);
}

} // namespace fhsop

#endif
