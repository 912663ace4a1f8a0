#include <cmath>

#include <doctest.h>

#include "fixtures.hpp"
#include "helpers.hpp"
#include "voltkit/error.hpp"
#include "voltkit/integrals.hpp"
#include "voltkit/laxkit.hpp"
#include "voltkit/poisson.hpp"
#include "voltkit/verify.hpp"

using namespace voltkit;
using testing::P;
using testing::Ps;

namespace {

IntegralSet polys(std::vector<std::pair<std::string, Poly>> items) {
    IntegralSet s;
    for (auto& [l, p] : items) s.polys.push_back({l, std::move(p), ""});
    return s;
}

const Check* find(const Certificate& c, const std::string& name) {
    for (const auto& k : c.checks)
        if (k.name == name) return &k;
    return nullptr;
}

IntegralSet twodiag_4_10_set() {
    auto t = two_diagonal_family(4, 10);
    IntegralSet s;
    for (unsigned k : {2u, 4u, 6u, 7u, 8u, 9u}) s.polys.push_back({"H" + std::to_string(k), trace_power(t.L, k), ""});
    s.polys.push_back({"det L", det(t.L), ""});
    return s;
}

} // namespace

TEST_CASE("Lie derivative of polynomials") {
    auto x = Ps(fixtures::ex41_x, 4, "x");
    CHECK(lie_derivative(P("x1*x3", 4, "x"), x).is_zero());
    CHECK(lie_derivative(P("x1*x2*x4", 4, "x"), x).is_zero());
    CHECK(lie_derivative(P("x1 + x2 + x3 + x4", 4, "x"), x).is_zero());
    CHECK(lie_derivative(P("x1", 4, "x"), x) == x[0]);
    CHECK(lie_derivative(P("x1^2", 4, "x"), x) == P("2*x1", 4, "x") * x[0]);
}

TEST_CASE("Lie derivative of a rational function is the cross-multiplied numerator") {
    auto x = Ps(fixtures::chop5_a, 5);
    RationalFn C(P("a2^2*a5 - a1*a2*a3", 5), P("a5", 5));
    CHECK(lie_derivative(C, x).is_zero());
    RationalFn wrong(P("a2^2*a5 + a1*a2*a3", 5), P("a5", 5));
    CHECK(!lie_derivative(wrong, x).is_zero());
    RationalFn g(P("a1", 2), P("a2", 2));
    std::vector<Poly> f{P("a1", 2), P("2*a2", 2)};
    CHECK(lie_derivative(g, f) == P("-a1*a2", 2));
}

TEST_CASE("certify_constants names each check") {
    auto x = Ps(fixtures::ex41_x, 4, "x");
    auto set = polys({{"C1", P("x1*x3", 4, "x")}, {"bad", P("x1", 4, "x")}});
    auto cert = certify_constants(set, x);
    REQUIRE(cert.checks.size() == 2);
    CHECK(cert.checks[0].name == "constant:C1");
    CHECK(cert.checks[0].passed);
    CHECK(!cert.checks[1].passed);
    CHECK(cert.checks[1].residual == x[0]);
    CHECK(!cert.passed());
}

TEST_CASE("involution: symmetric in its arguments, serial equals parallel") {
    auto lv = detect_lv(search_signs(PhiSystem::parse(3, "1,2,3,1+2")).value());
    auto pi = lv_poisson(lv->A);
    auto set = polys({{"H", P("x1 + x2 + x3 + x4", 4, "x")}, {"C1", P("x1*x3", 4, "x")}, {"G", P("x1*x2", 4, "x")}});
    auto s = check_involution_serial(set, pi), p = check_involution_parallel(set, pi, 3);
    REQUIRE(s.checks.size() == 3);
    REQUIRE(s.checks.size() == p.checks.size());
    for (std::size_t i = 0; i < s.checks.size(); ++i) {
        CHECK(s.checks[i].name == p.checks[i].name);
        CHECK(s.checks[i].passed == p.checks[i].passed);
        CHECK(s.checks[i].residual == p.checks[i].residual);
    }
    CHECK(find(s, "involution:H,C1")->passed);
    CHECK(!find(s, "involution:H,G")->passed);
    const Poly hg = bracket(set.polys[0].poly, set.polys[2].poly, pi.pi);
    CHECK(bracket(set.polys[2].poly, set.polys[0].poly, pi.pi) == -hg);
    CHECK(*find(s, "involution:H,G")->residual == hg);
}

TEST_CASE("two-diagonal m = 4, n = 10 integrals are constant and in involution") {
    auto t = two_diagonal_family(4, 10);
    auto set = twodiag_4_10_set();
    CHECK(certify_constants(set, t.xdot).passed());
    auto pi = twodiag_poisson(4, 10);
    auto inv = check_involution(set, pi);
    CHECK(inv.checks.size() == 21);
    CHECK(inv.passed());
    auto ind = functional_independence(set, 10, 1);
    REQUIRE(ind.checks.size() == 1);
    CHECK(ind.checks[0].passed);
    CHECK(ind.checks[0].value == 7);
    CHECK(ind.checks[0].point.size() == 13);
    CHECK(jacobian_rank(set.as_functions(), ind.checks[0].point) == 7);
}

TEST_CASE("functional independence") {
    auto F = P("x1*x3", 4, "x");
    auto dep = functional_independence(polys({{"F", F}, {"F2", F * F}}), 10, 1);
    CHECK(!dep.passed());
    CHECK(dep.checks[0].value == 1);
    CHECK(dep.checks[0].note == "rank 1 of 2");

    auto ok = functional_independence(
        polys({{"C1", F}, {"C2", P("x1*x2*x4", 4, "x")}, {"H", P("x1 + x2 + x3 + x4", 4, "x")}}), 10, 1);
    CHECK(ok.passed());
    CHECK(ok.checks[0].value == 3);

    // adding functions never lowers the rank
    std::vector<RationalFn> fns;
    std::vector<Rational> pt{3, 5, 7, 11};
    std::size_t last = 0;
    for (const char* s : {"x1", "x1^2", "x2*x3", "x1 + x2*x3", "x4", "x3"}) {
        fns.emplace_back(P(s, 4, "x"));
        std::size_t r = jacobian_rank(fns, pt);
        CHECK(r >= last);
        last = r;
    }
    CHECK(last == 4);
    // a vanishing denominator gives rank 0
    CHECK(jacobian_rank({RationalFn(P("x1", 2, "x"), P("x2", 2, "x"))}, {1, 0}) == 0);
}

TEST_CASE("select_integrals drops dependent and non-constant candidates") {
    auto x = Ps(fixtures::ex41_x, 4, "x");
    auto F = P("x1*x3", 4, "x");
    auto cands = polys({{"C1", F}, {"C1sq", F * F}, {"X", P("x1", 4, "x")}, {"H", P("x1 + x2 + x3 + x4", 4, "x")}});
    auto sel = select_integrals(cands, x, 1);
    CHECK(sel.kept.labels() == std::vector<std::string>{"C1", "H"});
    CHECK(sel.rejected_dependent == std::vector<std::string>{"C1sq"});
    CHECK(sel.rejected_not_constant == std::vector<std::string>{"X"});
}

TEST_CASE("compiled polynomials evaluate like exact ones") {
    Poly p = P("3*a1^2*a2 - 1/2*a2*a3 + 5", 3);
    CompiledPoly c(p);
    CHECK(c({2, 3, 0.5}) == doctest::Approx(36 - 0.75 + 5));
}

TEST_CASE("RK4 keeps a fixed point and integrates linear growth") {
    std::vector<Poly> zero{Poly(2), Poly(2)};
    auto tr = integrate_rk4(zero, {1.5, -2}, 0.1, 1);
    CHECK(tr.states.back() == std::vector<double>{1.5, -2});
    CHECK(tr.times.size() == 11);
    CHECK(tr.method == "rk4");

    std::vector<Poly> grow{P("a1", 1)};
    auto g = integrate_rk4(grow, {1}, 1e-3, 1);
    CHECK(g.states.back()[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("drift of the A3 integrals stays at round-off") {
    auto x = Ps(fixtures::ex41_x, 4, "x");
    auto set = polys({{"C1", P("x1*x3", 4, "x")}, {"C2", P("x1*x2*x4", 4, "x")}, {"H", P("x1 + x2 + x3 + x4", 4, "x")}});
    auto tr = integrate_rk4(x, {0.1, 0.2, 0.3, 0.4}, 1e-3, 10);
    auto rep = drift_report(tr, set);
    CHECK(rep.passed());
    for (const auto& c : rep.checks) {
        CHECK(c.kind == CheckKind::Numeric);
        CHECK(c.value < kDriftTolerance);
    }
}

TEST_CASE("halving the step shrinks the drift") {
    auto t = two_diagonal_family(2, 7);
    auto set = polys({{"F", moser_extra_integral(2, 7)}, {"H4", trace_power(t.L, 4)}});
    std::vector<double> x0{0.6, 1.1, 0.9, 1.3, 0.7, 1.2, 0.8, 1.0};
    auto rep = step_halving_report(t.xdot, x0, set);
    REQUIRE(rep.checks.size() == 2);
    for (const auto& c : rep.checks) {
        CAPTURE(c.name);
        CHECK(c.passed);
        CHECK(c.value >= 8);
    }
    auto coarse = drift_values(integrate_rk4(t.xdot, x0, 0.04, 10), set);
    auto fine = drift_values(integrate_rk4(t.xdot, x0, 0.02, 10), set);
    for (std::size_t i = 0; i < 2; ++i) CHECK(coarse[i] / fine[i] >= 8);
}

TEST_CASE("divergence is reported, not truncated") {
    std::vector<Poly> blow{P("a1^2", 1)};
    try {
        (void)integrate_rk4(blow, {1}, 1e-3, 2);
        FAIL("no divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.kind() == ErrorKind::Divergence);
        CHECK(e.time() <= 1.01);
        CHECK(e.time() > 0.9);
    }
    auto tr = integrate_rk4_until(blow, {1}, 1e-3, 2);
    REQUIRE(tr.diverged_at);
    CHECK(*tr.diverged_at < 2);
    CHECK(tr.times.back() < *tr.diverged_at + 1e-9);
    for (const auto& s : tr.states) CHECK(std::isfinite(s[0]));
    auto halving = step_halving_report(blow, {1}, polys({{"a", P("a1", 1)}}));
    CHECK(!halving.passed());
}

TEST_CASE("drift near a pole fails with a note") {
    IntegralSet s;
    s.rationals.push_back({"R", RationalFn(P("1", 1), P("a1", 1)), ""});
    std::vector<Poly> still{Poly(1)};
    auto tr = integrate_rk4(still, {1e-9}, 0.1, 1);
    auto rep = drift_report(tr, s);
    CHECK(!rep.passed());
    CHECK(rep.checks[0].note == "initial condition too close to a pole");
}
