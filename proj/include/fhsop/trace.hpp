#ifndef FHSOP_TRACE_HPP
#define FHSOP_TRACE_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace fhsop {

// Passive observer of word-granular memory accesses. Structures report every
// slot read/write here and never look back, so the algorithms stay oblivious
// to the simulated hierarchy.
class MemoryTraceSink {
public:
    virtual ~MemoryTraceSink() = default;
    virtual void on_access(std::uint64_t address) = 0;
};

// Records a trace for later replay. Tick is the position in the sequence.
class TraceRecorder final : public MemoryTraceSink {
public:
    void on_access(std::uint64_t address) override { addresses_.push_back(address); }

    const std::vector<std::uint64_t>& addresses() const { return addresses_; }
    void clear() { addresses_.clear(); }

    // One "tick address" line per access.
    void write(std::ostream& os) const;
    static std::vector<std::uint64_t> read(std::istream& is);

private:
    std::vector<std::uint64_t> addresses_;
};

// Forwards one access stream to two sinks (e.g. cache model + recorder).
class TeeSink final : public MemoryTraceSink {
public:
    TeeSink(MemoryTraceSink* a, MemoryTraceSink* b) : a_(a), b_(b) {}
    void on_access(std::uint64_t address) override {
        if (a_) a_->on_access(address);
        if (b_) b_->on_access(address);
    }

private:
    MemoryTraceSink* a_;
    MemoryTraceSink* b_;
};

} // namespace fhsop

#endif
