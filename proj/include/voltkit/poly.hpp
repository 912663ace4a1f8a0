#pragma once

// Sparse multivariate polynomials with exact rational coefficients.
//
// Terms are kept sorted in graded-lexicographic order (highest first) with no
// zero coefficients, so structural equality is mathematical equality.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace voltkit {

using Rational = mpq_class;

inline constexpr std::size_t kMaxVars = 32;

struct Monomial {
    std::array<std::uint8_t, kMaxVars> exp{};
    std::uint16_t degree = 0;

    static Monomial one() { return {}; }
    static Monomial var(std::size_t index, unsigned power = 1);

    unsigned operator[](std::size_t i) const { return exp[i]; }
    bool divisible_by(const Monomial& other) const;

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.degree == b.degree && a.exp == b.exp;
    }
};

Monomial operator*(const Monomial& a, const Monomial& b);
Monomial operator/(const Monomial& a, const Monomial& b); // requires divisibility

// Graded-lex: higher total degree first, ties broken by exponent of a1, a2, ...
bool graded_lex_greater(const Monomial& a, const Monomial& b);

struct Term {
    Monomial mono;
    Rational coeff;
};

// Names used when printing and parsing. Index i prints as names[i].
class VarNames {
public:
    VarNames() = default;
    explicit VarNames(std::vector<std::string> names);

    // "a1".."a<count>" or "x1".."x<count>".
    static VarNames indexed(std::string_view prefix, std::size_t count);

    std::size_t size() const { return names_.size(); }
    const std::string& operator[](std::size_t i) const { return names_[i]; }
    const std::vector<std::string>& names() const { return names_; }
    // Returns size() when absent.
    std::size_t find(std::string_view name) const;

private:
    std::vector<std::string> names_;
};

class Poly {
public:
    Poly() = default;
    explicit Poly(std::size_t nvars) : nvars_(nvars) {}

    static Poly zero(std::size_t nvars) { return Poly(nvars); }
    static Poly constant(std::size_t nvars, const Rational& c);
    static Poly variable(std::size_t nvars, std::size_t index);
    static Poly monomial(std::size_t nvars, const Monomial& m, const Rational& c = 1);
    // Product of the given (0-based) variables.
    static Poly product(std::size_t nvars, std::span<const std::size_t> vars, const Rational& c = 1);

    std::size_t nvars() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    int total_degree() const; // -1 for zero
    unsigned degree_in(std::size_t var) const;
    Rational coefficient(const Monomial& m) const;
    const Term& leading() const { return terms_.front(); }

    Poly operator-() const;
    Poly& operator+=(const Poly& other);
    Poly& operator-=(const Poly& other);
    Poly& operator*=(const Poly& other);
    Poly& operator*=(const Rational& c);

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
    friend bool operator==(const Poly& a, const Poly& b);

    Poly pow(unsigned k) const;
    Poly partial(std::size_t var) const;
    Rational eval(std::span<const Rational> point) const;

    // Same polynomial viewed in a ring with more (trailing) variables.
    Poly extended(std::size_t nvars) const;
    // Drops trailing variables; they must not occur.
    Poly truncated(std::size_t nvars) const;
    // Coefficients of var^d for d = 0..degree_in(var), in the remaining variables
    // (var itself set to exponent 0, ring size unchanged).
    std::vector<Poly> coefficients_in(std::size_t var) const;
    // Substitutes images[i] (all in a common ring) for variable i.
    Poly compose(std::span<const Poly> images) const;

    std::string to_string(const VarNames& names) const;
    static Poly parse(std::string_view text, const VarNames& names);

private:
    void normalize(); // sort + merge + drop zeros
    void check_same_ring(const Poly& other) const;

    std::size_t nvars_ = 0;
    std::vector<Term> terms_;
};

// Exact quotient of two polynomials. Never reduced: zero tests go through
// cross-multiplication, which avoids multivariate gcd entirely.
class RationalFn {
public:
    RationalFn() = default;
    RationalFn(Poly num, Poly den);
    explicit RationalFn(Poly num);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    std::size_t nvars() const { return num_.nvars(); }

    bool is_zero() const { return num_.is_zero(); }
    bool equivalent(const RationalFn& other) const;

    RationalFn operator-() const { return {-num_, den_}; }
    friend RationalFn operator+(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator*(const RationalFn& a, const RationalFn& b);

    Rational eval(std::span<const Rational> point) const;
    std::string to_string(const VarNames& names) const;

private:
    Poly num_;
    Poly den_;
};

std::string rational_to_string(const Rational& q);

} // namespace voltkit
