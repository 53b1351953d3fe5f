#ifndef FHSOP_COUNTERS_HPP
#define FHSOP_COUNTERS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fhsop {

// Shared instrumentation block. Every structure carries one so that counter
// tables are comparable across baseline and funnel variants.
struct Counters {
    std::uint64_t comparisons = 0;
    std::uint64_t inserts = 0;
    std::uint64_t extracts = 0;
    std::uint64_t chain_events = 0;
    std::uint64_t peak_size = 0;
    std::vector<std::uint64_t> sweeps_per_link; // index 0 = link 1

    // Optional per-insert lifetime N_r = (first insert index after this
    // entry's extraction) - (this entry's insert index). seq doubles as the
    // insert index.
    bool record_lifetimes = false;
    std::vector<std::uint64_t> lifetimes;

    void bump_sweep(std::size_t link_index_1based) {
        if (sweeps_per_link.size() < link_index_1based)
            sweeps_per_link.resize(link_index_1based, 0);
        ++sweeps_per_link[link_index_1based - 1];
    }

    void note_size(std::uint64_t live) {
        if (live > peak_size) peak_size = live;
    }

    void on_extract_seq(std::uint64_t seq) {
        if (record_lifetimes) pending_extracts_.push_back(seq);
    }

    void on_insert_seq(std::uint64_t seq) {
        if (record_lifetimes && !pending_extracts_.empty()) {
            for (std::uint64_t r : pending_extracts_) lifetimes.push_back(seq - r);
            pending_extracts_.clear();
        }
    }

    // Entries extracted after the last insert get the end-of-run index.
    void finalize_lifetimes() {
        if (!record_lifetimes) return;
        for (std::uint64_t r : pending_extracts_) lifetimes.push_back(inserts - r);
        pending_extracts_.clear();
    }

    std::map<std::string, std::uint64_t> flat() const {
        std::map<std::string, std::uint64_t> m;
        m["comparisons"] = comparisons;
        m["inserts"] = inserts;
        m["extracts"] = extracts;
        m["chain_events"] = chain_events;
        m["peak_size"] = peak_size;
        for (std::size_t i = 0; i < sweeps_per_link.size(); ++i)
            m["sweeps_link_" + std::to_string(i + 1)] = sweeps_per_link[i];
        return m;
    }

private:
    std::vector<std::uint64_t> pending_extracts_;
};

} // namespace fhsop

#endif
