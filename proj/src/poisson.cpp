#include "voltkit/poisson.hpp"

#include <map>
#include <random>

#include <omp.h>

#include "voltkit/error.hpp"
#include "voltkit/sampling.hpp"

namespace voltkit {

// ---------------------------------------------------------------- Jacobi

namespace {

struct Partials {
    std::size_t m;
    std::vector<Poly> d; // d[(j*m + k)*m + l] = d pi_jk / d a_l

    explicit Partials(const PolyMatrix& pi) : m(pi.dim()), d(m * m * m) {
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) {
                if (pi.at(j, k).is_zero()) continue;
                for (std::size_t l = 0; l < m; ++l) {
                    Poly p = pi.at(j, k).partial(l);
                    d[(k * m + j) * m + l] = -p;
                    d[(j * m + k) * m + l] = std::move(p);
                }
            }
        for (auto& p : d)
            if (p.nvars() != pi.nvars()) p = Poly(pi.nvars());
    }
    const Poly& at(std::size_t j, std::size_t k, std::size_t l) const { return d[(j * m + k) * m + l]; }
};

Poly schouten(const PolyMatrix& pi, const Partials& dp, std::size_t i, std::size_t j, std::size_t k) {
    Poly s(pi.nvars());
    for (std::size_t l = 0; l < pi.dim(); ++l) {
        if (!pi.at(l, i).is_zero() && !dp.at(j, k, l).is_zero()) s += pi.at(l, i) * dp.at(j, k, l);
        if (!pi.at(l, j).is_zero() && !dp.at(k, i, l).is_zero()) s += pi.at(l, j) * dp.at(k, i, l);
        if (!pi.at(l, k).is_zero() && !dp.at(i, j, l).is_zero()) s += pi.at(l, k) * dp.at(i, j, l);
    }
    return s;
}

void check_square_ring(const PolyMatrix& pi) {
    if (pi.dim() != pi.nvars())
        throw Error(ErrorKind::VariableMismatch, "Poisson matrix dimension must equal the variable count");
    if (!pi.is_skew()) throw Error(ErrorKind::Constraint, "Poisson matrix is not skew-symmetric");
}

std::vector<std::array<std::size_t, 3>> triples(std::size_t m) {
    std::vector<std::array<std::size_t, 3>> t;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) t.push_back({i, j, k});
    return t;
}

} // namespace

JacobiResult jacobi_check_serial(const PolyMatrix& pi) {
    check_square_ring(pi);
    Partials dp(pi);
    JacobiResult r;
    for (const auto& t : triples(pi.dim())) {
        ++r.triples;
        Poly s = schouten(pi, dp, t[0], t[1], t[2]);
        if (!s.is_zero()) {
            r.ok = false;
            r.failing = t;
            r.residual = std::move(s);
            return r;
        }
    }
    return r;
}

JacobiResult jacobi_check_parallel(const PolyMatrix& pi, int threads) {
    check_square_ring(pi);
    Partials dp(pi);
    const auto ts = triples(pi.dim());
    const long long count = static_cast<long long>(ts.size());
    long long first_bad = count;
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(nt) reduction(min : first_bad)
    for (long long idx = 0; idx < count; ++idx) {
        const auto& t = ts[std::size_t(idx)];
        if (!schouten(pi, dp, t[0], t[1], t[2]).is_zero()) first_bad = std::min(first_bad, idx);
    }
    JacobiResult r;
    r.triples = ts.size();
    if (first_bad < count) {
        const auto& t = ts[std::size_t(first_bad)];
        r.ok = false;
        r.failing = t;
        r.residual = schouten(pi, dp, t[0], t[1], t[2]);
    }
    return r;
}

// ---------------------------------------------------------------- constructions

PoissonMatrix lv_poisson(const IntMatrix& A, std::uint64_t seed) {
    const std::size_t m = A.size();
    PolyMatrix pi(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        if (A[i].size() != m) throw Error(ErrorKind::Constraint, "LV matrix must be square");
        for (std::size_t j = 0; j < m; ++j) {
            if (A[i][j] != -A[j][i]) throw Error(ErrorKind::Constraint, "LV matrix must be skew-symmetric");
            if (A[i][j] == 0) continue;
            std::size_t vars[2] = {i, j};
            pi.at(i, j) = Poly::product(m, vars, Rational(static_cast<long>(A[i][j])));
        }
    }
    PoissonMatrix out{pi, false, -1, seed, "lv"};
    out.jacobi_certified = jacobi_check(pi).ok;
    out.generic_rank = generic_rank(pi, seed);
    return out;
}

PoissonMatrix twodiag_poisson(std::size_t m, std::size_t n, std::uint64_t seed) {
    if (m < 1 || n < m + 2) throw Error(ErrorKind::InvalidRank, "invalid two-diagonal parameters");
    const std::size_t nv = n + m - 1;
    auto a = [&](std::size_t i) { return Poly::variable(nv, i - 1); };
    PolyMatrix q(nv, nv);
    auto add = [&](std::size_t r, std::size_t c, const Poly& v) { q.at(r - 1, c - 1) += v; };
    for (std::size_t i = 1; i + 1 <= m; ++i) add(i, i + n, a(i) * a(i + n));
    for (std::size_t i = 1; i <= m; ++i) add(i, i + n - 1, -(a(i) * a(i + n - 1)));
    for (std::size_t i = 1; i <= m; ++i) add(i + n - m - 1, i + n - 1, a(i + n - 1) * a(i + n - m - 1));
    for (std::size_t i = 1; i + 1 <= m; ++i) add(i + n - m, i + n - 1, -(a(i + n - 1) * a(i + n - m)));
    for (std::size_t i = 1; i <= n - 2; ++i) add(i, i + 1, a(i) * a(i + 1));
    for (std::size_t i = 1; i + 1 <= m; ++i) add(i + n - 1, i + n, Rational(2) * a(i) * a(i + n - m));
    PolyMatrix pi = q - q.transpose();
    PoissonMatrix out{pi, false, -1, seed, "twodiag"};
    out.jacobi_certified = jacobi_check(pi).ok;
    out.generic_rank = generic_rank(pi, seed);
    return out;
}

Poly half_sum_of_squares(std::size_t nvars) {
    Poly h(nvars);
    for (std::size_t k = 0; k < nvars; ++k) h += Poly::monomial(nvars, Monomial::var(k, 2), Rational(1, 2));
    return h;
}

std::vector<Poly> hamiltonian_field(const PolyMatrix& pi, const Poly& H) {
    const std::size_t m = pi.dim();
    std::vector<Poly> grad;
    for (std::size_t l = 0; l < m; ++l) grad.push_back(H.partial(l));
    std::vector<Poly> out(m, Poly(pi.nvars()));
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l)
            if (!pi.at(k, l).is_zero() && !grad[l].is_zero()) out[k] += pi.at(k, l) * grad[l];
    return out;
}

namespace {

struct UnknownKey {
    std::size_t k, l; // k < l
    Monomial q;
    bool operator<(const UnknownKey& o) const {
        if (k != o.k) return k < o.k;
        if (l != o.l) return l < o.l;
        return graded_lex_greater(q, o.q);
    }
};

struct RowKey {
    std::size_t k;
    Monomial mono;
    bool operator<(const RowKey& o) const {
        if (k != o.k) return k < o.k;
        return graded_lex_greater(mono, o.mono);
    }
};

} // namespace

std::optional<PoissonMatrix> derive_a_poisson(const LaxPair& pair, const DeriveOptions& opts) {
    if (pair.origin == "twodiag") {
        const std::size_t n = pair.L.dim();
        const std::size_t m = pair.xdot.size() + 1 - n;
        PoissonMatrix p = twodiag_poisson(m, n, opts.seed);
        if (!p.jacobi_certified) return std::nullopt;
        return p;
    }
    const std::size_t m = pair.xdot.size();

    // Unknown coefficients of pi_kl (k<l), one per admissible quadratic monomial.
    std::map<UnknownKey, std::size_t> unknowns;
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = 0; l < m; ++l) {
            if (k == l) continue;
            for (const auto& t : pair.xdot[k].terms()) {
                if (t.mono[l] == 0) continue;
                UnknownKey key{std::min(k, l), std::max(k, l), t.mono / Monomial::var(l)};
                unknowns.emplace(key, 0);
            }
        }
    }
    std::vector<UnknownKey> keys;
    for (auto& [key, idx] : unknowns) {
        idx = keys.size();
        keys.push_back(key);
    }

    // Equations: for each k, sum_l pi_kl a_l = xdot_k, compared monomial-wise.
    std::map<RowKey, std::size_t> rows;
    auto row_of = [&](std::size_t k, const Monomial& mono) {
        auto [it, inserted] = rows.emplace(RowKey{k, mono}, rows.size());
        return it->second;
    };
    std::vector<std::vector<std::pair<std::size_t, int>>> entries;
    for (std::size_t u = 0; u < keys.size(); ++u) {
        const auto& key = keys[u];
        std::size_t r1 = row_of(key.k, key.q * Monomial::var(key.l));
        std::size_t r2 = row_of(key.l, key.q * Monomial::var(key.k));
        entries.resize(rows.size());
        entries[r1].emplace_back(u, +1);
        entries[r2].emplace_back(u, -1);
    }
    for (std::size_t k = 0; k < m; ++k)
        for (const auto& t : pair.xdot[k].terms()) row_of(k, t.mono);
    entries.resize(rows.size());

    RatMatrix M(rows.size(), std::vector<Rational>(keys.size(), 0));
    std::vector<Rational> rhs(rows.size(), 0);
    for (std::size_t r = 0; r < entries.size(); ++r)
        for (auto [u, w] : entries[r]) M[r][u] += w;
    for (std::size_t k = 0; k < m; ++k)
        for (const auto& t : pair.xdot[k].terms()) rhs[rows.at(RowKey{k, t.mono})] = t.coeff;

    std::vector<std::size_t> free_cols;
    Rref red;
    auto particular = solve_linear(M, rhs, keys.size(), &free_cols, &red);
    if (!particular) return std::nullopt;

    const std::size_t nfree = free_cols.size();
    const std::size_t base = opts.alphabet.size();
    std::vector<std::size_t> digits(nfree, 0);
    std::size_t tried = 0;
    while (tried < opts.max_candidates) {
        ++tried;
        std::vector<Rational> x(keys.size(), 0);
        for (std::size_t f = 0; f < nfree; ++f) x[free_cols[f]] = opts.alphabet[digits[f]];
        for (std::size_t i = 0; i < red.pivots.size(); ++i) {
            Rational v = red.rows[i][keys.size()];
            for (std::size_t f = 0; f < nfree; ++f) v -= red.rows[i][free_cols[f]] * x[free_cols[f]];
            x[red.pivots[i]] = v;
        }
        PolyMatrix pi(m, m);
        for (std::size_t u = 0; u < keys.size(); ++u) {
            if (x[u] == 0) continue;
            Poly term = Poly::monomial(m, keys[u].q, x[u]);
            pi.at(keys[u].k, keys[u].l) += term;
            pi.at(keys[u].l, keys[u].k) -= term;
        }
        if (jacobi_check(pi).ok) {
            PoissonMatrix out{pi, true, -1, opts.seed, "derived"};
            out.generic_rank = generic_rank(pi, opts.seed);
            return out;
        }
        // Next assignment, last free variable fastest.
        std::size_t pos = nfree;
        while (pos > 0) {
            --pos;
            if (++digits[pos] < base) break;
            digits[pos] = 0;
            if (pos == 0) return std::nullopt;
        }
        if (nfree == 0) return std::nullopt;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- brackets and Casimirs

Poly bracket(const Poly& F, const Poly& G, const PolyMatrix& pi) {
    const std::size_t m = pi.dim();
    if (F.nvars() != m || G.nvars() != m) throw Error(ErrorKind::VariableMismatch, "bracket: ring mismatch");
    std::vector<Poly> dF, dG;
    for (std::size_t i = 0; i < m; ++i) {
        dF.push_back(F.partial(i));
        dG.push_back(G.partial(i));
    }
    Poly s(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (dF[i].is_zero()) continue;
        for (std::size_t j = 0; j < m; ++j) {
            if (dG[j].is_zero() || pi.at(i, j).is_zero()) continue;
            s += pi.at(i, j) * dF[i] * dG[j];
        }
    }
    return s;
}

bool MonomialCasimir::is_polynomial() const {
    for (auto e : exponents)
        if (e < 0) return false;
    return true;
}

Poly MonomialCasimir::to_poly(std::size_t nvars) const {
    if (!is_polynomial()) throw Error(ErrorKind::Constraint, "Casimir has negative exponents");
    Monomial mono;
    for (std::size_t i = 0; i < exponents.size(); ++i)
        if (exponents[i]) mono = mono * Monomial::var(i, unsigned(exponents[i]));
    return Poly::monomial(nvars, mono);
}

RationalFn MonomialCasimir::to_function(std::size_t nvars) const {
    Monomial num, den;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        if (exponents[i] > 0) num = num * Monomial::var(i, unsigned(exponents[i]));
        if (exponents[i] < 0) den = den * Monomial::var(i, unsigned(-exponents[i]));
    }
    return RationalFn(Poly::monomial(nvars, num), Poly::monomial(nvars, den));
}

std::vector<MonomialCasimir> monomial_casimirs(const IntMatrix& A) {
    const std::size_t m = A.size();
    RatMatrix M(m, std::vector<Rational>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (A[i][j] != -A[j][i]) throw Error(ErrorKind::Constraint, "LV matrix must be skew-symmetric");
            M[i][j] = static_cast<long>(A[i][j]);
        }
    std::vector<MonomialCasimir> out;
    for (auto& v : integer_kernel(M, m)) out.push_back({std::move(v)});
    return out;
}

int generic_rank(const PolyMatrix& pi, std::uint64_t seed, std::size_t trials) {
    std::mt19937_64 rng(seed);
    int best = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        auto p = odd_point(rng, pi.nvars());
        best = std::max(best, int(rank(pi.eval(p))));
    }
    if (best % 2 != 0) throw Error(ErrorKind::Constraint, "skew matrix with odd rank");
    return best;
}

} // namespace voltkit
