#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "voltkit/laxkit.hpp"
#include "voltkit/matrix.hpp"
#include "voltkit/poly.hpp"

namespace voltkit {

struct PoissonMatrix {
    PolyMatrix pi;
    bool jacobi_certified = false;
    int generic_rank = -1;
    std::uint64_t rank_seed = 0;
    std::string origin;

    std::size_t var_count() const { return pi.dim(); }
};

struct JacobiResult {
    bool ok = true;
    std::size_t triples = 0;
    std::optional<std::array<std::size_t, 3>> failing; // lowest failing (i,j,k)
    Poly residual;                                      // Schouten expression at `failing`
};

// Full Schouten check over all i<j<k.
JacobiResult jacobi_check_serial(const PolyMatrix& pi);
JacobiResult jacobi_check_parallel(const PolyMatrix& pi, int threads = 0);
inline JacobiResult jacobi_check(const PolyMatrix& pi) { return jacobi_check_parallel(pi); }

using IntMatrix = std::vector<std::vector<long long>>;

// pi_ij = A_ij x_i x_j.
PoissonMatrix lv_poisson(const IntMatrix& A, std::uint64_t seed = 1);

struct DeriveOptions {
    std::vector<int> alphabet = {0, 1, -1, 2, -2};
    std::size_t max_candidates = 4096; // alphabet assignments tried before giving up
    std::uint64_t seed = 1;
};

// Quadratic skew pi with xdot = pi * grad(1/2 sum a_k^2) that satisfies Jacobi.
// Two-diagonal pairs use the closed form instead of the search.
std::optional<PoissonMatrix> derive_a_poisson(const LaxPair& pair, const DeriveOptions& opts = {});
PoissonMatrix twodiag_poisson(std::size_t m, std::size_t n, std::uint64_t seed = 1);

Poly bracket(const Poly& F, const Poly& G, const PolyMatrix& pi);
// pi * grad H.
std::vector<Poly> hamiltonian_field(const PolyMatrix& pi, const Poly& H);
Poly half_sum_of_squares(std::size_t nvars);

struct MonomialCasimir {
    std::vector<long long> exponents;
    bool is_polynomial() const;
    Poly to_poly(std::size_t nvars) const;           // requires is_polynomial()
    RationalFn to_function(std::size_t nvars) const; // Laurent monomial as num/den
};

std::vector<MonomialCasimir> monomial_casimirs(const IntMatrix& A);

// Max exact rank over `trials` random points with odd coordinates in [1,97].
int generic_rank(const PolyMatrix& pi, std::uint64_t seed, std::size_t trials = 10);

} // namespace voltkit
