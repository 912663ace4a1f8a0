#include "voltkit/matrix.hpp"

#include <cstdint>
#include <unordered_map>

#include "voltkit/error.hpp"

namespace voltkit {

PolyMatrix::PolyMatrix(std::size_t dim, std::size_t nvars)
    : dim_(dim), nvars_(nvars), entries_(dim * dim, Poly(nvars)) {}

bool PolyMatrix::is_symmetric() const {
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = r + 1; c < dim_; ++c)
            if (!(at(r, c) == at(c, r))) return false;
    return true;
}

bool PolyMatrix::is_skew() const {
    for (std::size_t r = 0; r < dim_; ++r) {
        if (!at(r, r).is_zero()) return false;
        for (std::size_t c = r + 1; c < dim_; ++c)
            if (!(at(r, c) == -at(c, r))) return false;
    }
    return true;
}

PolyMatrix PolyMatrix::transpose() const {
    PolyMatrix t(dim_, nvars_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) t.at(c, r) = at(r, c);
    return t;
}

Poly PolyMatrix::trace() const {
    Poly s(nvars_);
    for (std::size_t i = 0; i < dim_; ++i) s += at(i, i);
    return s;
}

std::size_t PolyMatrix::nonzero_count() const {
    std::size_t n = 0;
    for (const auto& e : entries_) n += !e.is_zero();
    return n;
}

PolyMatrix PolyMatrix::extended(std::size_t nvars) const {
    PolyMatrix m(dim_, nvars);
    for (std::size_t i = 0; i < entries_.size(); ++i) m.entries_[i] = entries_[i].extended(nvars);
    return m;
}

PolyMatrix PolyMatrix::submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
    if (rows.size() != cols.size()) throw Error(ErrorKind::Constraint, "submatrix must be square");
    PolyMatrix m(rows.size(), nvars_);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) m.at(i, j) = at(rows[i], cols[j]);
    return m;
}

namespace {
void check_dims(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.dim() != b.dim() || a.nvars() != b.nvars())
        throw Error(ErrorKind::VariableMismatch, "matrix shape or ring mismatch");
}
} // namespace

PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
    check_dims(a, b);
    PolyMatrix r = a;
    for (std::size_t i = 0; i < r.entries_.size(); ++i) r.entries_[i] += b.entries_[i];
    return r;
}

PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b) {
    check_dims(a, b);
    PolyMatrix r = a;
    for (std::size_t i = 0; i < r.entries_.size(); ++i) r.entries_[i] -= b.entries_[i];
    return r;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    check_dims(a, b);
    const std::size_t n = a.dim_;
    PolyMatrix r(n, a.nvars_);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Poly& aik = a.at(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j) {
                const Poly& bkj = b.at(k, j);
                if (!bkj.is_zero()) r.at(i, j) += aik * bkj;
            }
        }
    }
    return r;
}

bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
    return a.dim_ == b.dim_ && a.nvars_ == b.nvars_ && a.entries_ == b.entries_;
}

std::vector<std::vector<Rational>> PolyMatrix::eval(std::span<const Rational> point) const {
    std::vector<std::vector<Rational>> out(dim_, std::vector<Rational>(dim_));
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c)
            if (!at(r, c).is_zero()) out[r][c] = at(r, c).eval(point);
    return out;
}

PolyMatrix commutator(const PolyMatrix& a, const PolyMatrix& b) { return a * b - b * a; }

namespace {

class CofactorExpander {
public:
    explicit CofactorExpander(const PolyMatrix& m) : m_(m) {}

    Poly run() { return expand(0, 0); }

private:
    Poly expand(std::size_t row, std::uint32_t used) {
        const std::size_t n = m_.dim();
        if (row == n) return Poly::constant(m_.nvars(), 1);
        if (auto it = memo_.find(used); it != memo_.end()) return it->second;
        Poly sum(m_.nvars());
        std::size_t free_before = 0;
        for (std::size_t c = 0; c < n; ++c) {
            if (used & (1u << c)) continue;
            const Poly& e = m_.at(row, c);
            if (!e.is_zero()) {
                Poly minor = expand(row + 1, used | (1u << c));
                if (!minor.is_zero()) {
                    Poly term = e * minor;
                    if (free_before % 2) sum -= term;
                    else sum += term;
                }
            }
            ++free_before;
        }
        memo_.emplace(used, sum);
        return sum;
    }

    const PolyMatrix& m_;
    std::unordered_map<std::uint32_t, Poly> memo_;
};

} // namespace

Poly det(const PolyMatrix& m) {
    if (m.dim() > 31) throw Error(ErrorKind::Constraint, "determinant limited to dimension 31");
    if (m.dim() == 0) return Poly::constant(m.nvars(), 1);
    return CofactorExpander(m).run();
}

std::vector<Poly> char_poly(const PolyMatrix& m) {
    const std::size_t nv = m.nvars();
    const std::size_t lam = nv;
    PolyMatrix shifted(m.dim(), nv + 1);
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c) shifted.at(r, c) = -m.at(r, c).extended(nv + 1);
    for (std::size_t i = 0; i < m.dim(); ++i) shifted.at(i, i) += Poly::variable(nv + 1, lam);
    std::vector<Poly> by_power = det(shifted).coefficients_in(lam);
    by_power.resize(m.dim() + 1, Poly(nv + 1));
    std::vector<Poly> out;
    out.reserve(by_power.size());
    for (auto it = by_power.rbegin(); it != by_power.rend(); ++it) out.push_back(it->truncated(nv));
    return out;
}

// ---------------------------------------------------------------- rational linear algebra

Rref rref(RatMatrix m) {
    Rref out;
    if (m.empty()) return out;
    const std::size_t rows = m.size();
    const std::size_t cols = m.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        Rational inv = 1 / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j)
                if (m[r][j] != 0) m[i][j] -= f * m[r][j];
        }
        out.pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    out.rows = std::move(m);
    return out;
}

std::size_t rank(RatMatrix m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size();
    const std::size_t cols = m.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            Rational f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

namespace {

IntVector primitive(const std::vector<Rational>& v) {
    mpz_class lcm = 1;
    for (const auto& q : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
    std::vector<mpz_class> ints;
    mpz_class g = 0;
    for (const auto& q : v) {
        mpz_class z = q.get_num() * (lcm / q.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
        ints.push_back(z);
    }
    IntVector out;
    if (g == 0) return IntVector(v.size(), 0);
    int sign = 0;
    for (const auto& z : ints) {
        if (z != 0) {
            sign = sgn(z);
            break;
        }
    }
    for (auto& z : ints) {
        mpz_class w = z / g * sign;
        if (!w.fits_slong_p()) throw Error(ErrorKind::Constraint, "kernel entry exceeds machine integer range");
        out.push_back(w.get_si());
    }
    return out;
}

} // namespace

std::vector<IntVector> integer_kernel(const RatMatrix& m, std::size_t cols) {
    Rref red = m.empty() ? Rref{} : rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : red.pivots) is_pivot[p] = true;
    std::vector<IntVector> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> x(cols, 0);
        x[f] = 1;
        for (std::size_t i = 0; i < red.pivots.size(); ++i) x[red.pivots[i]] = -red.rows[i][f];
        basis.push_back(primitive(x));
    }
    return basis;
}

std::optional<std::vector<Rational>> solve_linear(const RatMatrix& m, const std::vector<Rational>& rhs,
                                                  std::size_t cols, std::vector<std::size_t>* free_columns,
                                                  Rref* reduced) {
    RatMatrix aug = m;
    for (std::size_t i = 0; i < aug.size(); ++i) {
        aug[i].resize(cols);
        aug[i].push_back(rhs[i]);
    }
    Rref red = aug.empty() ? Rref{} : rref(std::move(aug));
    if (!red.pivots.empty() && red.pivots.back() == cols) return std::nullopt;
    std::vector<Rational> x(cols, 0);
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t i = 0; i < red.pivots.size(); ++i) {
        is_pivot[red.pivots[i]] = true;
        x[red.pivots[i]] = red.rows[i][cols];
    }
    if (free_columns) {
        free_columns->clear();
        for (std::size_t c = 0; c < cols; ++c)
            if (!is_pivot[c]) free_columns->push_back(c);
    }
    if (reduced) *reduced = std::move(red);
    return x;
}

} // namespace voltkit
