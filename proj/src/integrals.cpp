#include "voltkit/integrals.hpp"

#include <algorithm>

#include "voltkit/error.hpp"

namespace voltkit {

std::vector<RationalFn> IntegralSet::as_functions() const {
    std::vector<RationalFn> out;
    out.reserve(size());
    for (const auto& p : polys) out.emplace_back(p.poly);
    for (const auto& r : rationals) out.push_back(r.fn);
    return out;
}

std::vector<std::string> IntegralSet::labels() const {
    std::vector<std::string> out;
    for (const auto& p : polys) out.push_back(p.label);
    for (const auto& r : rationals) out.push_back(r.label);
    return out;
}

Poly trace_power(const PolyMatrix& L, unsigned k) {
    if (k == 0) throw Error(ErrorKind::Constraint, "trace power must be positive");
    PolyMatrix p = L;
    for (unsigned i = 1; i < k; ++i) p = p * L;
    Rational scale(1, k % 2 == 0 ? k : 2 * k);
    return p.trace() * scale;
}

std::string trace_normalization(unsigned k) {
    return k % 2 == 0 ? "tr(L^" + std::to_string(k) + ")/" + std::to_string(k)
                      : "tr(L^" + std::to_string(k) + ")/" + std::to_string(2 * k);
}

ChoppedDet chop(const PolyMatrix& L, std::size_t k) {
    const std::size_t D = L.dim();
    if (2 * k >= D) throw Error(ErrorKind::Constraint, "chop order too large for matrix dimension");
    const std::size_t nv = L.nvars();
    PolyMatrix shifted = L.extended(nv + 1);
    for (std::size_t i = 0; i < D; ++i) shifted.at(i, i) -= Poly::variable(nv + 1, nv);
    std::vector<std::size_t> rows, cols;
    for (std::size_t i = k; i < D; ++i) rows.push_back(i);
    for (std::size_t j = 0; j + k < D; ++j) cols.push_back(j);
    std::vector<Poly> by_power = det(shifted.submatrix(rows, cols)).coefficients_in(nv);
    const std::size_t deg = D - 2 * k;
    by_power.resize(deg + 1, Poly(nv + 1));

    ChoppedDet out;
    out.k = k;
    for (auto it = by_power.rbegin(); it != by_power.rend(); ++it) out.coeffs.push_back(it->truncated(nv));
    while (out.leading < out.coeffs.size() && out.coeffs[out.leading].is_zero()) ++out.leading;
    for (std::size_t r = out.leading + 1; r < out.coeffs.size(); ++r)
        out.ratios.emplace_back(out.coeffs[r], out.coeffs[out.leading]);
    return out;
}

std::optional<RationalFn> chopped_casimir(const PolyMatrix& L, std::size_t k) {
    ChoppedDet c = chop(L, k);
    if (c.ratios.empty() || c.ratios.back().is_zero()) return std::nullopt;
    Poly num = c.ratios.back().num();
    Poly den = c.ratios.back().den();
    if (num.leading().coeff < 0) num = -num;
    return RationalFn(std::move(num), std::move(den));
}

MoserParity parse_parity(const std::string& text) {
    if (text == "odd") return MoserParity::Odd;
    if (text == "even") return MoserParity::Even;
    throw Error(ErrorKind::Parse, "parity must be 'odd' or 'even', got '" + text + "'");
}

std::string parity_name(MoserParity p) { return p == MoserParity::Odd ? "odd" : "even"; }

MoserReduction moser_reduce(const PolyMatrix& L, MoserParity parity) {
    const PolyMatrix sq = L * L;
    MoserReduction out;
    out.parity = parity;
    std::vector<std::size_t> idx;
    for (std::size_t i = (parity == MoserParity::Odd ? 0 : 1); i < L.dim(); i += 2) {
        idx.push_back(i);
        out.kept.push_back(i + 1);
    }
    out.reduced = sq.submatrix(idx, idx);
    const std::size_t d = idx.size();
    for (std::size_t i = 0; i < d; ++i) out.var_map.emplace_back("B" + std::to_string(i + 1), out.reduced.at(i, i));
    std::size_t a = 0;
    for (std::size_t off = 1; off < d; ++off) {
        for (std::size_t r = 0; r + off < d; ++r) {
            const Poly& e = out.reduced.at(r, r + off);
            if (e.is_zero()) continue;
            out.var_map.emplace_back("A" + std::to_string(++a), e);
            out.a_positions.emplace_back(r, r + off);
        }
    }
    return out;
}

bool moser_partition_recovers(const PolyMatrix& L) {
    const PolyMatrix sq = L * L;
    for (std::size_t r = 0; r < sq.dim(); ++r)
        for (std::size_t c = 0; c < sq.dim(); ++c)
            if ((r + c) % 2 == 1 && !sq.at(r, c).is_zero()) return false;
    return true;
}

namespace {

// Product of a_lo * ... * a_hi (1-based, inclusive, step); empty range gives 1.
Poly run(std::size_t nv, std::size_t lo, std::size_t hi, std::size_t step = 1) {
    std::vector<std::size_t> vars;
    for (std::size_t i = lo; i <= hi && i >= 1; i += step) vars.push_back(i - 1);
    return Poly::product(nv, vars);
}

Poly prod(std::size_t nv, std::initializer_list<std::size_t> one_based) {
    std::vector<std::size_t> vars;
    for (auto i : one_based) vars.push_back(i - 1);
    return Poly::product(nv, vars);
}

void check_twodiag(std::size_t m, std::size_t n) {
    if (m == 0 || n < m + 2 || (m >= 2 && n < 2 * m))
        throw Error(ErrorKind::Constraint, "two-diagonal family needs m>=1, n-m>=2 and n>=2m for m>=2");
}

// m=3 Casimir factor a1 a_{n-2} a_{n+2} + a2 a_{n-1} a_n - a_n a_{n+1} a_{n+2}.
Poly m3_factor(std::size_t nv, std::size_t n) {
    return prod(nv, {1, n - 2, n + 2}) + prod(nv, {2, n - 1, n}) - prod(nv, {n, n + 1, n + 2});
}

} // namespace

Poly moser_extra_integral(std::size_t m, std::size_t n) {
    check_twodiag(m, n);
    const std::size_t nv = n + m - 1;
    if (m == 2)
        return run(nv, 2, n - 2) * (prod(nv, {1, n}) + prod(nv, {n - 1, n + 1}));
    if (m == 3 && n % 2 == 0)
        return run(nv, 2, n - 3) * (prod(nv, {1, n}) + prod(nv, {n - 2, n + 1})) +
               run(nv, 3, n - 1) * Poly::variable(nv, n + 1);
    throw Error(ErrorKind::Unimplemented,
                "no closed-form extra integral for m=" + std::to_string(m) + ", n=" + std::to_string(n));
}

std::vector<LabeledPoly> twodiag_casimirs(std::size_t m, std::size_t n) {
    check_twodiag(m, n);
    const std::size_t nv = n + m - 1;
    std::vector<LabeledPoly> out;
    if (m == 2) {
        if (n % 2 == 1) return out;
        Poly c = run(nv, 3, n - 3, 2) * prod(nv, {n, n + 1}) - run(nv, 1, n - 1, 2);
        out.push_back({"C", c.pow(2), "(-1)^(n/2) det L"});
        return out;
    }
    if (m == 3) {
        if (n % 2 == 1) {
            Poly c = prod(nv, {1}) * run(nv, 3, n - 3) * prod(nv, {n - 1}) * m3_factor(nv, n);
            out.push_back({"C", c, "-det(L)/2"});
        } else {
            Poly c2 = run(nv, 4, n - 4, 2) * m3_factor(nv, n);
            if ((n / 2) % 2 == 1) c2 = -c2;
            out.push_back({"C1", run(nv, 1, n - 1, 2), "(C1+C2)^2 = (-1)^(n/2) det L"});
            out.push_back({"C2", c2, "(C1+C2)^2 = (-1)^(n/2) det L"});
        }
        return out;
    }
    throw Error(ErrorKind::Unimplemented, "no closed-form Casimirs for m=" + std::to_string(m));
}

HenonMap henon_map(std::size_t rank) {
    if (rank < 1) throw Error(ErrorKind::InvalidRank, "rank must be at least 1");
    HenonMap h;
    auto a = [&](std::size_t i) { return i >= 1 && i <= rank ? Poly::variable(rank, i - 1) : Poly(rank); };
    for (std::size_t i = 1; 2 * i - 1 <= rank + 1; ++i) h.B.push_back(a(2 * i - 1).pow(2) + a(2 * i - 2).pow(2));
    for (std::size_t i = 1; 2 * i <= rank; ++i) h.A.push_back(-(a(2 * i - 1) * a(2 * i)));
    return h;
}

namespace {
Poly along(const Poly& p, const std::vector<Poly>& xdot) {
    Poly s(p.nvars());
    for (std::size_t i = 0; i < xdot.size(); ++i) {
        Poly d = p.partial(i);
        if (!d.is_zero()) s += d * xdot[i];
    }
    return s;
}
} // namespace

bool henon_toda_holds(const HenonMap& h, const std::vector<Poly>& xdot) {
    const std::size_t nv = xdot.empty() ? 0 : xdot.front().nvars();
    const Poly zero(nv);
    auto A = [&](std::size_t i) -> const Poly& { return i >= 1 && i <= h.A.size() ? h.A[i - 1] : zero; };
    auto B = [&](std::size_t i) -> const Poly& { return i >= 1 && i <= h.B.size() ? h.B[i - 1] : zero; };
    for (std::size_t i = 1; i <= h.A.size(); ++i)
        if (!(along(A(i), xdot) == A(i) * (B(i + 1) - B(i)))) return false;
    for (std::size_t i = 1; i <= h.B.size(); ++i)
        if (!(along(B(i), xdot) == Rational(2) * (A(i).pow(2) - A(i - 1).pow(2)))) return false;
    return true;
}

} // namespace voltkit
