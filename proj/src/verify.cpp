#include "voltkit/verify.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <random>

#include <omp.h>

#include "voltkit/error.hpp"
#include "voltkit/sampling.hpp"

namespace voltkit {

namespace {

void check_ring(std::size_t nvars, const std::vector<Poly>& xdot) {
    if (nvars != xdot.size()) throw Error(ErrorKind::VariableMismatch, "function and vector field have different variable counts");
    for (const auto& e : xdot)
        if (e.nvars() != nvars) throw Error(ErrorKind::VariableMismatch, "vector field components live in different rings");
}

std::vector<Poly> gradient_numerators(const RationalFn& F) {
    const std::size_t nv = F.nvars();
    std::vector<Poly> g(nv, Poly(nv));
    for (std::size_t i = 0; i < nv; ++i) {
        Poly dp = F.num().partial(i);
        Poly dq = F.den().partial(i);
        if (!dp.is_zero()) g[i] += F.den() * dp;
        if (!dq.is_zero()) g[i] -= F.num() * dq;
    }
    return g;
}

Poly pair_through(const std::vector<Poly>& f, const std::vector<Poly>& g, const PolyMatrix& pi) {
    const std::size_t nv = pi.dim();
    Poly s(pi.nvars());
    for (std::size_t i = 0; i < nv; ++i) {
        if (f[i].is_zero()) continue;
        for (std::size_t j = 0; j < nv; ++j) {
            if (i == j || g[j].is_zero() || pi.at(i, j).is_zero()) continue;
            s += pi.at(i, j) * f[i] * g[j];
        }
    }
    return s;
}

} // namespace

Poly lie_derivative(const Poly& F, const std::vector<Poly>& xdot) {
    check_ring(F.nvars(), xdot);
    Poly s(F.nvars());
    for (std::size_t k = 0; k < xdot.size(); ++k) {
        Poly d = F.partial(k);
        if (!d.is_zero() && !xdot[k].is_zero()) s += d * xdot[k];
    }
    return s;
}

Poly lie_derivative(const RationalFn& F, const std::vector<Poly>& xdot) {
    return lie_derivative(F.num(), xdot) * F.den() - F.num() * lie_derivative(F.den(), xdot);
}

const char* to_string(CheckKind k) { return k == CheckKind::Symbolic ? "symbolic" : "numeric"; }

bool Certificate::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

bool Certificate::symbolic_passed() const {
    for (const auto& c : checks)
        if (c.kind == CheckKind::Symbolic && !c.passed) return false;
    return true;
}

void Certificate::append(const Certificate& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

Certificate certify_constants(const IntegralSet& set, const std::vector<Poly>& xdot) {
    Certificate cert;
    auto add = [&](const std::string& label, Poly residual) {
        Check c;
        c.name = "constant:" + label;
        c.passed = residual.is_zero();
        c.residual = std::move(residual);
        cert.checks.push_back(std::move(c));
    };
    for (const auto& p : set.polys) add(p.label, lie_derivative(p.poly, xdot));
    for (const auto& r : set.rationals) add(r.label, lie_derivative(r.fn, xdot));
    return cert;
}

Poly bracket_numerator(const RationalFn& F, const RationalFn& G, const PolyMatrix& pi) {
    return pair_through(gradient_numerators(F), gradient_numerators(G), pi);
}

namespace {

Certificate involution_impl(const IntegralSet& set, const PoissonMatrix& pi, bool parallel, int threads) {
    const auto fns = set.as_functions();
    const auto labels = set.labels();
    for (const auto& f : fns)
        if (f.nvars() != pi.pi.dim()) throw Error(ErrorKind::VariableMismatch, "integral and Poisson matrix rings differ");
    std::vector<std::vector<Poly>> grads(fns.size());
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < fns.size(); ++i)
        for (std::size_t j = i + 1; j < fns.size(); ++j) pairs.emplace_back(i, j);
    std::vector<Poly> residual(pairs.size());

    const long n_f = static_cast<long>(fns.size());
    const long n_p = static_cast<long>(pairs.size());
    if (parallel) {
        const int t = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(t)
        {
#pragma omp for schedule(dynamic)
            for (long i = 0; i < n_f; ++i) grads[i] = gradient_numerators(fns[i]);
#pragma omp for schedule(dynamic)
            for (long p = 0; p < n_p; ++p)
                residual[p] = pair_through(grads[pairs[p].first], grads[pairs[p].second], pi.pi);
        }
    } else {
        for (long i = 0; i < n_f; ++i) grads[i] = gradient_numerators(fns[i]);
        for (long p = 0; p < n_p; ++p)
            residual[p] = pair_through(grads[pairs[p].first], grads[pairs[p].second], pi.pi);
    }

    Certificate cert;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        Check c;
        c.name = "involution:" + labels[pairs[p].first] + "," + labels[pairs[p].second];
        c.passed = residual[p].is_zero();
        c.residual = std::move(residual[p]);
        cert.checks.push_back(std::move(c));
    }
    return cert;
}

} // namespace

Certificate check_involution_serial(const IntegralSet& set, const PoissonMatrix& pi) {
    return involution_impl(set, pi, false, 1);
}

Certificate check_involution_parallel(const IntegralSet& set, const PoissonMatrix& pi, int threads) {
    return involution_impl(set, pi, true, threads);
}

namespace {

std::size_t rank_from_gradients(const std::vector<RationalFn>& fns, const std::vector<std::vector<Poly>>& grads,
                                const std::vector<Rational>& point) {
    RatMatrix m;
    for (std::size_t i = 0; i < fns.size(); ++i) {
        if (fns[i].den().eval(point) == 0) return 0;
        std::vector<Rational> row(point.size());
        for (std::size_t k = 0; k < point.size(); ++k)
            if (!grads[i][k].is_zero()) row[k] = grads[i][k].eval(point);
        m.push_back(std::move(row));
    }
    return rank(std::move(m));
}

} // namespace

std::size_t jacobian_rank(const std::vector<RationalFn>& fns, const std::vector<Rational>& point) {
    std::vector<std::vector<Poly>> grads;
    for (const auto& f : fns) grads.push_back(gradient_numerators(f));
    return rank_from_gradients(fns, grads, point);
}

Certificate functional_independence(const IntegralSet& set, std::size_t trials, std::uint64_t seed) {
    const auto fns = set.as_functions();
    Check c;
    c.name = "independence";
    c.seed = seed;
    c.tolerance = static_cast<double>(fns.size());
    if (!fns.empty()) {
        std::vector<std::vector<Poly>> grads;
        for (const auto& f : fns) grads.push_back(gradient_numerators(f));
        std::mt19937_64 rng(seed);
        std::size_t best = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            auto pt = odd_point(rng, fns.front().nvars());
            std::size_t r = rank_from_gradients(fns, grads, pt);
            if (r > best || c.point.empty()) {
                best = r;
                c.point = pt;
            }
            if (best == fns.size()) break;
        }
        c.value = static_cast<double>(best);
        c.passed = best == fns.size();
    }
    c.note = "rank " + std::to_string(static_cast<std::size_t>(c.value)) + " of " + std::to_string(fns.size());
    Certificate cert;
    cert.checks.push_back(std::move(c));
    return cert;
}

Selection select_integrals(const IntegralSet& candidates, const std::vector<Poly>& xdot, std::uint64_t seed) {
    constexpr std::size_t kPoints = 3;
    Selection out;
    std::mt19937_64 rng(seed);
    std::vector<std::vector<Rational>> points;
    for (std::size_t i = 0; i < kPoints; ++i) points.push_back(odd_point(rng, xdot.size()));

    std::vector<RationalFn> kept_fns;
    std::vector<std::vector<Poly>> kept_grads;
    auto current_rank = [&](const std::vector<RationalFn>& fns, const std::vector<std::vector<Poly>>& grads) {
        std::size_t best = 0;
        for (const auto& p : points) best = std::max(best, rank_from_gradients(fns, grads, p));
        return best;
    };
    auto consider = [&](const std::string& label, const RationalFn& fn, auto&& keep) {
        if (!lie_derivative(fn, xdot).is_zero()) {
            out.rejected_not_constant.push_back(label);
            return;
        }
        const std::size_t before = kept_fns.size();
        kept_fns.push_back(fn);
        kept_grads.push_back(gradient_numerators(fn));
        if (current_rank(kept_fns, kept_grads) == before + 1) {
            keep();
        } else {
            kept_fns.pop_back();
            kept_grads.pop_back();
            out.rejected_dependent.push_back(label);
        }
    };
    for (const auto& p : candidates.polys) {
        if (p.poly.is_constant()) continue;
        consider(p.label, RationalFn(p.poly), [&] { out.kept.polys.push_back(p); });
    }
    for (const auto& r : candidates.rationals) {
        if (r.fn.num().is_constant() && r.fn.den().is_constant()) continue;
        consider(r.label, r.fn, [&] { out.kept.rationals.push_back(r); });
    }
    return out;
}

// ---------------------------------------------------------------- numerics

CompiledPoly::CompiledPoly(const Poly& p) {
    offsets_.push_back(0);
    for (const auto& t : p.terms()) {
        coeffs_.push_back(t.coeff.get_d());
        for (std::size_t v = 0; v < p.nvars(); ++v)
            if (t.mono[v]) factors_.push_back({static_cast<std::uint32_t>(v), t.mono[v]});
        offsets_.push_back(static_cast<std::uint32_t>(factors_.size()));
    }
}

double CompiledPoly::operator()(const std::vector<double>& x) const {
    double s = 0;
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
        double m = coeffs_[t];
        for (std::uint32_t f = offsets_[t]; f < offsets_[t + 1]; ++f) {
            const double b = x[factors_[f].var];
            for (std::uint32_t k = 0; k < factors_[f].power; ++k) m *= b;
        }
        s += m;
    }
    return s;
}

Trajectory integrate_rk4_until(const std::vector<Poly>& xdot, const std::vector<double>& x0, double step,
                               double t_end) {
    if (!(step > 0) || !(t_end > 0)) throw Error(ErrorKind::Constraint, "step and t_end must be positive");
    if (x0.size() != xdot.size()) throw Error(ErrorKind::VariableMismatch, "initial state has wrong dimension");
    std::vector<CompiledPoly> f;
    for (const auto& p : xdot) f.emplace_back(p);
    const std::size_t n = x0.size();
    auto field = [&](const std::vector<double>& x, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f[i](x);
    };

    Trajectory tr;
    tr.step = step;
    const auto steps = static_cast<std::size_t>(std::llround(t_end / step));
    tr.times.reserve(steps + 1);
    tr.states.reserve(steps + 1);
    tr.times.push_back(0);
    tr.states.push_back(x0);

    std::vector<double> x = x0, k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (std::size_t s = 1; s <= steps; ++s) {
        field(x, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * step * k1[i];
        field(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * step * k2[i];
        field(tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + step * k3[i];
        field(tmp, k4);
        for (std::size_t i = 0; i < n; ++i) x[i] += step / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        const double t = static_cast<double>(s) * step;
        for (double v : x) {
            if (!std::isfinite(v)) {
                tr.diverged_at = t;
                return tr;
            }
        }
        tr.times.push_back(t);
        tr.states.push_back(x);
    }
    return tr;
}

Trajectory integrate_rk4(const std::vector<Poly>& xdot, const std::vector<double>& x0, double step, double t_end) {
    Trajectory tr = integrate_rk4_until(xdot, x0, step, t_end);
    if (tr.diverged_at)
        throw DivergenceError(*tr.diverged_at, "trajectory left the finite range at t=" + std::to_string(*tr.diverged_at));
    return tr;
}

namespace {

constexpr double kMinDenominator = 1e-6;

struct CompiledFn {
    CompiledPoly num, den;
    bool rational = false;
    double operator()(const std::vector<double>& x) const { return rational ? num(x) / den(x) : num(x); }
};

std::vector<CompiledFn> compile_set(const IntegralSet& set) {
    std::vector<CompiledFn> out;
    for (const auto& p : set.polys) out.push_back({CompiledPoly(p.poly), CompiledPoly(), false});
    for (const auto& r : set.rationals) out.push_back({CompiledPoly(r.fn.num()), CompiledPoly(r.fn.den()), true});
    return out;
}

} // namespace

std::vector<double> drift_values(const Trajectory& traj, const IntegralSet& set) {
    const auto fns = compile_set(set);
    std::vector<double> drift(fns.size(), 0.0);
    const long nf = static_cast<long>(fns.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < nf; ++i) {
        const double f0 = fns[i](traj.states.front());
        const double scale = std::max(1.0, std::fabs(f0));
        double worst = 0;
        for (const auto& x : traj.states) {
            const double d = std::fabs(fns[i](x) - f0) / scale;
            if (!(d <= worst)) worst = d; // NaN propagates
        }
        drift[i] = worst;
    }
    return drift;
}

Certificate drift_report(const Trajectory& traj, const IntegralSet& set, double tolerance) {
    const auto labels = set.labels();
    const auto drift = drift_values(traj, set);
    Certificate cert;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        Check c;
        c.name = "drift:" + labels[i];
        c.kind = CheckKind::Numeric;
        c.value = drift[i];
        c.tolerance = tolerance;
        c.passed = drift[i] < tolerance;
        if (i >= set.polys.size()) {
            const auto& r = set.rationals[i - set.polys.size()];
            if (std::fabs(CompiledPoly(r.fn.den())(traj.states.front())) < kMinDenominator) {
                c.passed = false;
                c.note = "initial condition too close to a pole";
            }
        }
        cert.checks.push_back(std::move(c));
    }
    return cert;
}

Certificate step_halving_report(const std::vector<Poly>& xdot, const std::vector<double>& x0, const IntegralSet& set,
                                const HalvingOptions& opts) {
    const Trajectory coarse = integrate_rk4_until(xdot, x0, opts.coarse_step, opts.t_end);
    const Trajectory fine = integrate_rk4_until(xdot, x0, opts.coarse_step / 2, opts.t_end);
    const bool diverged = coarse.diverged_at || fine.diverged_at;
    std::vector<double> dc, df;
    if (!diverged) {
        dc = drift_values(coarse, set);
        df = drift_values(fine, set);
    }
    const auto labels = set.labels();
    Certificate cert;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        Check c;
        c.name = "halving:" + labels[i];
        c.kind = CheckKind::Numeric;
        c.tolerance = opts.min_ratio;
        if (diverged) {
            c.note = "trajectory diverged";
        } else if (dc[i] < opts.floor) {
            c.passed = true;
            c.value = dc[i] > 0 && df[i] > 0 ? dc[i] / df[i] : 0;
            c.note = "coarse drift at round-off";
        } else {
            c.value = df[i] > 0 ? dc[i] / df[i] : std::numeric_limits<double>::infinity();
            c.passed = c.value >= opts.min_ratio;
            std::ostringstream os;
            os << "drift " << dc[i] << " at h=" << opts.coarse_step << ", " << df[i] << " at h/2";
            c.note = os.str();
        }
        cert.checks.push_back(std::move(c));
    }
    return cert;
}

} // namespace voltkit
