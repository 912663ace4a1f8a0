#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "voltkit/integrals.hpp"
#include "voltkit/poisson.hpp"
#include "voltkit/poly.hpp"

namespace voltkit {

Poly lie_derivative(const Poly& F, const std::vector<Poly>& xdot);
// p'q - pq' for F = p/q.
Poly lie_derivative(const RationalFn& F, const std::vector<Poly>& xdot);

enum class CheckKind { Symbolic, Numeric };
const char* to_string(CheckKind k);

struct Check {
    std::string name;
    CheckKind kind = CheckKind::Symbolic;
    bool passed = false;
    std::optional<Poly> residual;       // symbolic checks
    double value = 0;                   // numeric drift, or best rank for independence
    double tolerance = 0;
    std::uint64_t seed = 0;
    std::vector<Rational> point;        // witness point, when one exists
    std::string note;
};

struct Certificate {
    std::string system_id;
    std::vector<Check> checks;

    bool passed() const;
    bool symbolic_passed() const;
    void append(const Certificate& other);
};

// One "constant:<label>" check per member.
Certificate certify_constants(const IntegralSet& set, const std::vector<Poly>& xdot);

// Numerator of {F,G} for F=p/q, G=r/s: grad-numerators (q dp - p dq) paired through pi.
Poly bracket_numerator(const RationalFn& F, const RationalFn& G, const PolyMatrix& pi);

Certificate check_involution_serial(const IntegralSet& set, const PoissonMatrix& pi);
Certificate check_involution_parallel(const IntegralSet& set, const PoissonMatrix& pi, int threads = 0);
inline Certificate check_involution(const IntegralSet& set, const PoissonMatrix& pi) {
    return check_involution_parallel(set, pi);
}

// Exact Jacobian rank at up to `trials` random odd-integer points; passes
// once some point reaches |set|.
Certificate functional_independence(const IntegralSet& set, std::size_t trials, std::uint64_t seed);
// Exact rank of the Jacobian of `fns` at `point` (points where a denominator
// vanishes give rank 0).
std::size_t jacobian_rank(const std::vector<RationalFn>& fns, const std::vector<Rational>& point);

// Keeps candidates in order when their Lie derivative vanishes and they raise
// the Jacobian rank at a few random points.
struct Selection {
    IntegralSet kept;
    std::vector<std::string> rejected_not_constant;
    std::vector<std::string> rejected_dependent;
};
Selection select_integrals(const IntegralSet& candidates, const std::vector<Poly>& xdot, std::uint64_t seed);

// ---------------------------------------------------------------- numerics

class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(const Poly& p);
    double operator()(const std::vector<double>& x) const;

private:
    struct Factor {
        std::uint32_t var;
        std::uint32_t power;
    };
    std::vector<double> coeffs_;
    std::vector<std::uint32_t> offsets_; // term t uses factors_[offsets_[t], offsets_[t+1])
    std::vector<Factor> factors_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    double step = 0;
    std::string method = "rk4";
    std::optional<double> diverged_at; // set only by integrate_rk4_until
};

// Classical fixed-step RK4; throws DivergenceError on a non-finite state.
Trajectory integrate_rk4(const std::vector<Poly>& xdot, const std::vector<double>& x0, double step, double t_end);
// Stops at the first non-finite state, keeps the finite prefix and records the time.
Trajectory integrate_rk4_until(const std::vector<Poly>& xdot, const std::vector<double>& x0, double step,
                               double t_end);

inline constexpr double kDriftTolerance = 1e-8;

// Max over samples of |F(x(t)) - F(x(0))| / max(1, |F(x(0))|) for each member.
std::vector<double> drift_values(const Trajectory& traj, const IntegralSet& set);
Certificate drift_report(const Trajectory& traj, const IntegralSet& set, double tolerance = kDriftTolerance);

struct HalvingOptions {
    double coarse_step = 0.04;
    double t_end = 10;
    double min_ratio = 8;
    double floor = 1e-12; // coarse drift below this is already at round-off
};

// RK4 self-convergence: drift at h over drift at h/2, one "halving:<label>" check per member.
Certificate step_halving_report(const std::vector<Poly>& xdot, const std::vector<double>& x0, const IntegralSet& set,
                                const HalvingOptions& opts = {});

} // namespace voltkit
