#include <random>

#include <doctest.h>

#include "fixtures.hpp"
#include "helpers.hpp"
#include "voltkit/integrals.hpp"
#include "voltkit/laxkit.hpp"
#include "voltkit/matrix.hpp"
#include "voltkit/poisson.hpp"

using namespace voltkit;
using testing::P;
using testing::Ps;

namespace {

PolyMatrix skew_from_upper(std::size_t dim, const std::vector<std::string>& upper, const std::string& prefix = "a") {
    PolyMatrix m(dim, dim);
    std::size_t k = 0;
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = r + 1; c < dim; ++c, ++k) {
            m.at(r, c) = P(upper.at(k), dim, prefix);
            m.at(c, r) = -m.at(r, c);
        }
    REQUIRE(k == upper.size());
    return m;
}

bool is_casimir(const Poly& C, const PolyMatrix& pi) {
    for (const auto& e : hamiltonian_field(pi, C))
        if (!e.is_zero()) return false;
    return true;
}

LaxPair nth_solution(std::size_t rank, const char* phi, std::size_t k) {
    auto sols = all_sign_solutions(PhiSystem::parse(rank, phi), k + 1);
    REQUIRE(sols.size() > k);
    return sols[k];
}

Poly random_quadratic_poly(std::mt19937_64& rng, std::size_t nv) {
    std::uniform_int_distribution<int> var(0, static_cast<int>(nv) - 1), c(-3, 3), deg(0, 3);
    Poly p(nv);
    for (int t = 0; t < 4; ++t) {
        Monomial m;
        for (int d = deg(rng); d > 0; --d) m = m * Monomial::var(static_cast<std::size_t>(var(rng)));
        p += Poly::monomial(nv, m, c(rng));
    }
    return p;
}

} // namespace

TEST_CASE("A3 example: Lotka-Volterra bracket, rank and Casimirs") {
    auto A = fixtures::ex41_A;
    PoissonMatrix pi = lv_poisson(A);
    CHECK(pi.pi == skew_from_upper(4, {"x1*x2", "0", "-x1*x4", "x2*x3", "x2*x4", "x3*x4"}, "x"));
    CHECK(jacobi_check_serial(pi.pi).ok);
    CHECK(pi.generic_rank == 2);
    auto cas = monomial_casimirs(A);
    REQUIRE(cas.size() == 2);
    CHECK(cas[0].to_poly(4) == P("x1*x3", 4, "x"));
    CHECK(cas[1].to_poly(4) == P("x1*x2*x4", 4, "x"));
    for (const auto& c : cas) CHECK(is_casimir(c.to_poly(4), pi.pi));
    CHECK(hamiltonian_field(pi.pi, P("x1 + x2 + x3 + x4", 4, "x")) == Ps(fixtures::ex41_x, 4, "x"));
}

TEST_CASE("A3 example: the a-side bracket reproduces the ODEs") {
    auto lp = search_signs(PhiSystem::parse(3, "1,2,3,1+2"));
    REQUIRE(lp);
    auto pi = derive_a_poisson(*lp);
    REQUIRE(pi);
    CHECK(pi->jacobi_certified);
    CHECK(pi->generic_rank == 2);
    CHECK(hamiltonian_field(pi->pi, half_sum_of_squares(4)) == lp->xdot);
}

TEST_CASE("periodic KM in A3") {
    auto lp = search_signs(PhiSystem::parse(3, "1,2,3,1+2+3"), {.require_lv = true});
    auto lv = detect_lv(*lp);
    REQUIRE(lv);
    PoissonMatrix pi = lv_poisson(lv->A);
    CHECK(pi.generic_rank == 2);
    auto cas = monomial_casimirs(lv->A);
    REQUIRE(cas.size() == 2);
    CHECK(cas[0].to_poly(4) == P("x1*x3", 4, "x"));
    CHECK(cas[1].to_poly(4) == P("x2*x4", 4, "x"));
}

TEST_CASE("A3 non-LV example with five variables") {
    auto lp = nth_solution(3, "1,2,3,1+2,2+3", 3);
    PolyMatrix reference = skew_from_upper(5, fixtures::ex42_pi);
    CHECK(jacobi_check_serial(reference).ok);
    CHECK(hamiltonian_field(reference, half_sum_of_squares(5)) == lp.xdot);
    CHECK(generic_rank(reference, 1) == 4);
    CHECK(is_casimir(P("a1*a3 - a4*a5", 5).pow(2), reference));
    CHECK(det(lp.L) == P("a1*a3 - a4*a5", 5).pow(2));

    auto derived = derive_a_poisson(lp);
    REQUIRE(derived);
    CHECK(derived->pi == reference);
    CHECK(derived->generic_rank == 4);
}

TEST_CASE("A3 example with roots 2+3 and 1+2+3") {
    auto lp = nth_solution(3, "1,2,3,2+3,1+2+3", 2);
    PolyMatrix reference = skew_from_upper(5, fixtures::ex43_pi);
    CHECK(jacobi_check_serial(reference).ok);
    CHECK(hamiltonian_field(reference, half_sum_of_squares(5)) == lp.xdot);
    CHECK(generic_rank(reference, 1) == 4);
    CHECK(det(lp.L) == P("a1*a3 - a2*a5", 5).pow(2));
    CHECK(is_casimir(det(lp.L), reference));
    auto derived = derive_a_poisson(lp);
    REQUIRE(derived);
    CHECK(derived->pi == reference);
}

TEST_CASE("A4 example: rank 4 and Casimir x2 x3 x5") {
    auto lp = search_signs(PhiSystem::parse(4, "1,2,3,4,2+3"), {.require_lv = true});
    auto lv = detect_lv(*lp);
    REQUIRE(lv);
    PoissonMatrix pi = lv_poisson(lv->A);
    CHECK(pi.generic_rank == 4);
    auto cas = monomial_casimirs(lv->A);
    REQUIRE(cas.size() == 1);
    CHECK(cas[0].to_poly(5) == P("x2*x3*x5", 5, "x"));
    CHECK(pi.pi == skew_from_upper(5, {"x1*x2", "0", "0", "-x1*x5", "x2*x3", "0", "-x2*x5", "x3*x4", "x3*x5",
                                       "x4*x5"},
                                   "x"));
}

TEST_CASE("family Casimirs and ranks") {
    struct Row {
        FamilyCase c;
        std::size_t n;
        int rank;
        std::vector<std::string> casimirs;
    };
    const std::vector<Row> rows = {
        {FamilyCase::Family2, 6, 6, {"x2*x3*x4*x5*x7"}},
        {FamilyCase::Family2, 5, 4, {"x1*x3*x5", "x2*x3*x4*x6"}},
        {FamilyCase::Family3, 6, 6, {"x1*x2*x3*x4*x5*x7"}},
        {FamilyCase::Family3, 5, 4, {"x1*x3*x5", "x1*x2*x3*x4*x6"}},
        {FamilyCase::Family4, 6, 6, {"x2*x3*x4*x5*x6*x7"}},
    };
    for (const auto& r : rows) {
        CAPTURE(family_case_name(r.c));
        CAPTURE(r.n);
        auto lv = detect_lv(named_family(r.c, r.n));
        REQUIRE(lv);
        const std::size_t nv = lv->A.size();
        PoissonMatrix pi = lv_poisson(lv->A);
        CHECK(pi.generic_rank == r.rank);
        CHECK(jacobi_check(pi.pi).ok);
        auto cas = monomial_casimirs(lv->A);
        REQUIRE(cas.size() == r.casimirs.size());
        for (std::size_t k = 0; k < cas.size(); ++k) CHECK(cas[k].to_poly(nv) == P(r.casimirs[k], nv, "x"));
    }
}

TEST_CASE("Laurent Casimir of family 4 with n = 5") {
    auto lv = detect_lv(named_family(FamilyCase::Family4, 5));
    REQUIRE(lv);
    auto cas = monomial_casimirs(lv->A);
    REQUIRE(cas.size() == 2);
    CHECK(cas[0].to_poly(6) == P("x1*x3*x5", 6, "x"));
    CHECK(!cas[1].is_polynomial());
    auto f = cas[1].to_function(6);
    CHECK(f.equivalent(RationalFn(P("x1", 6, "x"), P("x2*x4*x6", 6, "x"))));
    PoissonMatrix pi = lv_poisson(lv->A);
    for (std::size_t j = 0; j < 6; ++j) {
        Poly s(6);
        for (std::size_t i = 0; i < 6; ++i)
            s += (f.num().partial(i) * f.den() - f.num() * f.den().partial(i)) * pi.pi.at(i, j);
        CHECK(s.is_zero());
    }
}

TEST_CASE("odd family 2: first Casimir is a multiple of det L") {
    auto lp = named_family(FamilyCase::Family2, 5);
    auto lv = detect_lv(lp);
    REQUIRE(lv);
    auto cas = monomial_casimirs(lv->A);
    // x = 2 a^2
    const std::size_t nv = lp.phi.var_count();
    std::vector<Poly> to_a;
    for (std::size_t k = 0; k < nv; ++k) to_a.push_back(Poly::variable(nv, k).pow(2) * Rational(2));
    Poly c1 = cas[0].to_poly(nv).compose(to_a);
    CHECK(det(lp.L) == P("-a1^2*a3^2*a5^2", nv));
    CHECK(c1 == det(lp.L) * Rational(-8));
}

TEST_CASE("two-diagonal closed-form brackets") {
    auto p37 = twodiag_poisson(3, 7);
    CHECK(p37.pi == skew_from_upper(9, fixtures::twodiag_3_7_pi));
    CHECK(p37.jacobi_certified);
    auto p38 = twodiag_poisson(3, 8);
    CHECK(p38.pi == skew_from_upper(10, fixtures::twodiag_3_8_pi));
    CHECK(p38.generic_rank == 8);
    auto p410 = twodiag_poisson(4, 10);
    CHECK(p410.generic_rank == 12);
    for (std::size_t m = 2; m <= 4; ++m)
        for (std::size_t n = 2 * m; n <= 9; ++n) {
            CAPTURE(m);
            CAPTURE(n);
            auto t = two_diagonal_family(m, n);
            auto pi = twodiag_poisson(m, n);
            CHECK(jacobi_check(pi.pi).ok);
            CHECK(hamiltonian_field(pi.pi, half_sum_of_squares(n + m - 1)) == t.xdot);
            CHECK(pi.generic_rank % 2 == 0);
            if (m == 2) CHECK(pi.generic_rank == static_cast<int>(n % 2 ? n + 1 : n));
        }
}

TEST_CASE("bracket is skew, bilinear and Leibniz") {
    std::mt19937_64 rng(17);
    PolyMatrix pi = skew_from_upper(5, fixtures::ex42_pi);
    for (int trial = 0; trial < 30; ++trial) {
        Poly f = random_quadratic_poly(rng, 5), g = random_quadratic_poly(rng, 5), h = random_quadratic_poly(rng, 5);
        CHECK(bracket(f, g, pi) == -bracket(g, f, pi));
        CHECK(bracket(f + h, g, pi) == bracket(f, g, pi) + bracket(h, g, pi));
        CHECK(bracket(f * g, h, pi) == f * bracket(g, h, pi) + g * bracket(f, h, pi));
        Poly jac = bracket(f, bracket(g, h, pi), pi) + bracket(g, bracket(h, f, pi), pi) + bracket(h, bracket(f, g, pi), pi);
        CHECK(jac.is_zero());
    }
}

TEST_CASE("Jacobi failure is located; serial and parallel agree") {
    PolyMatrix bad(3, 3);
    bad.at(0, 1) = P("a1", 3);
    bad.at(1, 0) = -bad.at(0, 1);
    bad.at(1, 2) = P("a2", 3);
    bad.at(2, 1) = -bad.at(1, 2);
    auto s = jacobi_check_serial(bad), p = jacobi_check_parallel(bad, 4);
    CHECK(!s.ok);
    CHECK(s.ok == p.ok);
    CHECK(s.failing == p.failing);
    CHECK(!s.residual.is_zero());
    for (std::size_t m = 2; m <= 3; ++m) {
        auto pi = twodiag_poisson(m, 8).pi;
        auto a = jacobi_check_serial(pi), b = jacobi_check_parallel(pi, 3);
        CHECK(a.ok == b.ok);
        CHECK(a.triples == b.triples);
    }
}
