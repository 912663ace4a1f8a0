#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "voltkit/integrals.hpp"
#include "voltkit/laxkit.hpp"
#include "voltkit/poisson.hpp"
#include "voltkit/verify.hpp"

namespace voltkit {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

struct AnalyzeOptions {
    std::uint64_t seed = 1;
    bool numeric = false;
    double step = 1e-3;
    double t_end = 10;
    std::size_t independence_trials = 10;
    std::size_t max_chop_dim = 8; // chopped determinants only for dim(L) up to this
};

struct TraceEntry {
    unsigned k;
    std::string normalization;
    Poly poly;
};

// One coordinate system (a-variables, or LV x-variables) of an analysed system.
struct CoordinateView {
    std::string prefix; // "a" or "x"
    std::vector<Poly> equations;
    std::optional<PoissonMatrix> poisson;
    IntegralSet integrals;
    std::vector<std::string> rejected_dependent;
    std::vector<std::string> rejected_not_constant;
    Certificate certificate;
};

struct SystemAnalysis {
    explicit SystemAnalysis(LaxPair pair) : lax(std::move(pair)) {}

    std::string system_id;
    std::uint64_t seed = 1;
    LaxPair lax;
    std::optional<LVReduction> lv;
    CoordinateView a;
    std::optional<CoordinateView> x;
    std::vector<TraceEntry> traces;
    Poly det_L;
    std::vector<ChoppedDet> chops;
    std::vector<MoserReduction> moser;
    std::optional<Poly> moser_extra;
    std::optional<std::pair<std::size_t, std::size_t>> twodiag; // (m, n)
    std::vector<std::string> notes;

    bool symbolic_passed() const;
    bool all_passed() const;
};

SystemAnalysis analyze(const LaxPair& lax, const AnalyzeOptions& opts = {});

// Unit-scale starting point in (0.5, 1.5), drawn from `seed`.
std::vector<double> unit_scale_point(std::size_t nvars, std::uint64_t seed);

Json to_json(const SystemAnalysis& s);
std::string to_text(const SystemAnalysis& s);

Json certificate_to_json(const Certificate& c, const VarNames& names);
Json enumeration_to_json(const EnumerationSummary& s);
Json trajectory_to_json(const Trajectory& t, std::size_t sample_every);

// A system read back from a report (or a hand-written file with the same keys).
struct SystemInput {
    std::string system_id;
    std::string prefix;
    std::vector<Poly> equations;
    std::optional<PolyMatrix> poisson;
    IntegralSet integrals;
};

// Reads every coordinate view present in a report: "a" first, then "x".
std::vector<SystemInput> parse_system_json(const Json& j);
// Symbolic re-certification of a parsed system (constants, Jacobi, involution, independence).
Certificate recertify(const SystemInput& in, std::uint64_t seed, std::size_t trials = 10);

} // namespace voltkit
