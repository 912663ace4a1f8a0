#pragma once

// Square polynomial matrices and exact rational linear algebra.
// Indices are 0-based throughout this header.

#include <cstddef>
#include <optional>
#include <vector>

#include "voltkit/poly.hpp"

namespace voltkit {

class PolyMatrix {
public:
    PolyMatrix() = default;
    PolyMatrix(std::size_t dim, std::size_t nvars);

    std::size_t dim() const { return dim_; }
    std::size_t nvars() const { return nvars_; }

    Poly& at(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
    const Poly& at(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }

    bool is_symmetric() const;
    bool is_skew() const;
    PolyMatrix transpose() const;
    Poly trace() const;
    std::size_t nonzero_count() const;

    // Same entries in a ring with more trailing variables.
    PolyMatrix extended(std::size_t nvars) const;
    // Deletes the given rows and columns (both sorted ascending).
    PolyMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;

    friend PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b);
    friend PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b);
    friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
    friend bool operator==(const PolyMatrix& a, const PolyMatrix& b);

    std::vector<std::vector<Rational>> eval(std::span<const Rational> point) const;

private:
    std::size_t dim_ = 0;
    std::size_t nvars_ = 0;
    std::vector<Poly> entries_;
};

PolyMatrix commutator(const PolyMatrix& a, const PolyMatrix& b); // ab - ba

// Memoized cofactor expansion over column subsets; zero entries are skipped,
// so cost tracks the number of nonzero permutation terms.
Poly det(const PolyMatrix& m);

// Coefficients of det(lambda*I - m), highest power of lambda first.
std::vector<Poly> char_poly(const PolyMatrix& m);

// ---------------------------------------------------------------- rational linear algebra

using RatMatrix = std::vector<std::vector<Rational>>;
using IntVector = std::vector<long long>;

std::size_t rank(RatMatrix m);

struct Rref {
    RatMatrix rows;                  // reduced rows (only nonzero ones kept)
    std::vector<std::size_t> pivots; // pivot column of each row
};
Rref rref(RatMatrix m);

// Basis of {x : m x = 0}, one vector per free column, each scaled to a
// primitive integer vector whose first nonzero entry is positive.
std::vector<IntVector> integer_kernel(const RatMatrix& m, std::size_t cols);

// Solves m x = rhs. Returns the particular solution with free variables set
// to zero, or nullopt when inconsistent. `free_columns` receives the free
// variable indices.
std::optional<std::vector<Rational>> solve_linear(const RatMatrix& m, const std::vector<Rational>& rhs,
                                                  std::size_t cols, std::vector<std::size_t>* free_columns,
                                                  Rref* reduced = nullptr);

} // namespace voltkit
