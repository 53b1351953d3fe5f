// Counter-based benchmark harness: generic priority-queue workloads, Hensel
// sums-of-products kernels, and funnel-heap-versus-k-merger merging, each
// emitting one CSV or JSON row per structure run.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fhsop/bench.hpp"
#include "fhsop/errors.hpp"

namespace {

struct CommonOpts {
    std::uint64_t seed = 1;
    std::string cache; // "M,B"
    std::string format = "csv";
    std::string out;
    std::string sweep = "canonical";
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--seed", c.seed, "RNG seed; fully determines generated inputs");
    cmd->add_option("--cache", c.cache,
                    "simulate an LRU cache, words: M,B (e.g. 16384,64); off when absent");
    cmd->add_option("--format", c.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", c.out, "write the table to this path instead of stdout");
    cmd->add_option("--sweep", c.sweep, "funnel heap sweep mode")
        ->check(CLI::IsMember({"canonical", "refined"}));
}

fhsop::CacheConfig parse_cache(const std::string& s) {
    fhsop::CacheConfig cfg;
    if (s.empty()) return cfg;
    auto comma = s.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("--cache", "expected M,B");
    cfg.enabled = true;
    cfg.m = std::stoull(s.substr(0, comma));
    cfg.b = std::stoull(s.substr(comma + 1));
    if (cfg.b == 0 || cfg.m < cfg.b)
        throw CLI::ValidationError("--cache", "need B >= 1 and M >= B");
    return cfg;
}

fhsop::FunnelHeap::SweepMode parse_sweep(const std::string& s) {
    return s == "refined" ? fhsop::FunnelHeap::SweepMode::Refined
                          : fhsop::FunnelHeap::SweepMode::Canonical;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void emit(const CommonOpts& c, const std::vector<fhsop::BenchRow>& rows) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!c.out.empty()) {
        file.open(c.out);
        if (!file) throw std::runtime_error("cannot open output file " + c.out);
        os = &file;
    }
    if (c.format == "json")
        fhsop::write_json(*os, rows);
    else
        fhsop::write_csv(*os, rows);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"funnel heap / k-merger / sums-of-products counter benchmarks"};
    app.require_subcommand(1);

    CommonOpts generic_common, hensel_common, merger_common;

    auto* generic = app.add_subcommand("generic-pq",
                                       "push N, pop N/2, push N/2, pop N on a heap");
    std::uint64_t generic_n = 1u << 16;
    std::string generic_variant = "both";
    generic->add_option("--n", generic_n, "element count N (even)");
    generic->add_option("--variant", generic_variant, "binary, funnel, or both")
        ->check(CLI::IsMember({"binary", "funnel", "both"}));
    add_common(generic, generic_common);

    auto* hensel = app.add_subcommand(
        "hensel", "sums-of-products kernels on one random lifting-step instance");
    fhsop::HenselSpec hspec;
    std::string hensel_variants = "all";
    std::string fixture_path;
    hensel->add_option("--n", hspec.n, "maximal monomial order drawn");
    hensel->add_option("--k", hspec.k, "lifting step (k-1 polynomial pairs)");
    hensel->add_option("--terms", hspec.terms, "non-zero terms per polynomial");
    hensel->add_option("--prime", hspec.prime, "field modulus (prime)");
    hensel->add_option("--variant", hensel_variants,
                       "comma list of serial,binary,binary-chain,funnel,funnel-chain,"
                       "funnel-rank, or all");
    hensel->add_option("--fixture", fixture_path,
                       "read the instance from a polynomial-set file (g_1..g_{k-1} then "
                       "h_1..h_{k-1}) instead of generating it");
    add_common(hensel, hensel_common);

    auto* merger = app.add_subcommand(
        "merger", "merge k sorted streams with a k-merger and with a funnel heap");
    fhsop::MergerSpec mspec;
    std::string merger_variant = "both";
    merger->add_option("--k", mspec.k, "number of streams (power of two <= 512)");
    merger->add_option("--shape", mspec.shape, "k2xk (k streams of sqrt(k)), kxk, kxk2")
        ->check(CLI::IsMember({"k2xk", "kxk", "kxk2"}));
    merger->add_option("--variant", merger_variant, "kmerger, funnelheap, or both")
        ->check(CLI::IsMember({"kmerger", "funnelheap", "both"}));
    add_common(merger, merger_common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (generic->parsed()) {
            fhsop::GenericPqSpec spec;
            spec.n = generic_n;
            spec.seed = generic_common.seed;
            spec.cache = parse_cache(generic_common.cache);
            spec.sweep_mode = parse_sweep(generic_common.sweep);
            if (generic_variant == "both")
                spec.variants = {"binary", "funnel"};
            else
                spec.variants = {generic_variant};
            emit(generic_common, fhsop::run_generic_pq(spec));
        } else if (hensel->parsed()) {
            hspec.seed = hensel_common.seed;
            hspec.cache = parse_cache(hensel_common.cache);
            hspec.sweep_mode = parse_sweep(hensel_common.sweep);
            if (hensel_variants != "all") {
                for (const std::string& name : split_list(hensel_variants)) {
                    auto v = fhsop::kernel_variant_from_name(name);
                    if (!v) throw std::runtime_error("unknown hensel variant: " + name);
                    hspec.variants.push_back(*v);
                }
            }
            std::vector<fhsop::SparsePoly> fixture_gs, fixture_hs;
            if (!fixture_path.empty()) {
                std::ifstream in(fixture_path);
                if (!in) throw std::runtime_error("cannot open fixture " + fixture_path);
                auto [field, polys] = fhsop::read_poly_set(in);
                if (polys.empty() || polys.size() % 2 != 0)
                    throw std::runtime_error("fixture must hold 2(k-1) polynomials");
                hspec.prime = field.p;
                hspec.k = polys.size() / 2 + 1;
                fixture_gs.assign(polys.begin(), polys.begin() + polys.size() / 2);
                fixture_hs.assign(polys.begin() + polys.size() / 2, polys.end());
                hspec.fixture_gs = &fixture_gs;
                hspec.fixture_hs = &fixture_hs;
            }
            emit(hensel_common, fhsop::run_hensel(hspec));
        } else if (merger->parsed()) {
            mspec.seed = merger_common.seed;
            mspec.cache = parse_cache(merger_common.cache);
            mspec.sweep_mode = parse_sweep(merger_common.sweep);
            if (merger_variant == "both")
                mspec.variants = {"kmerger", "funnelheap"};
            else
                mspec.variants = {merger_variant};
            emit(merger_common, fhsop::run_merger_bench(mspec));
        }
    } catch (const fhsop::OracleMismatch& e) {
        std::cerr << "oracle mismatch: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
