#include "voltkit/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <sstream>

#include "voltkit/error.hpp"

namespace voltkit {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidRank: return "invalid-rank";
    case ErrorKind::InvalidRoot: return "invalid-root";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::VariableMismatch: return "variable-mismatch";
    case ErrorKind::IndexOutOfRange: return "index-out-of-range";
    case ErrorKind::Constraint: return "constraint";
    case ErrorKind::SearchTooLarge: return "search-space-too-large";
    case ErrorKind::Unimplemented: return "unimplemented";
    case ErrorKind::Divergence: return "divergence";
    }
    return "unknown";
}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::var(std::size_t index, unsigned power) {
    if (index >= kMaxVars) {
        throw Error(ErrorKind::IndexOutOfRange, "variable index exceeds kMaxVars");
    }
    Monomial m;
    m.exp[index] = static_cast<std::uint8_t>(power);
    m.degree = static_cast<std::uint16_t>(power);
    return m;
}

bool Monomial::divisible_by(const Monomial& other) const {
    for (std::size_t i = 0; i < kMaxVars; ++i) {
        if (exp[i] < other.exp[i]) return false;
    }
    return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
        unsigned e = unsigned(a.exp[i]) + unsigned(b.exp[i]);
        if (e > 255) throw Error(ErrorKind::Constraint, "monomial exponent overflow");
        r.exp[i] = static_cast<std::uint8_t>(e);
    }
    r.degree = static_cast<std::uint16_t>(a.degree + b.degree);
    return r;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.exp[i] = static_cast<std::uint8_t>(a.exp[i] - b.exp[i]);
    r.degree = static_cast<std::uint16_t>(a.degree - b.degree);
    return r;
}

bool graded_lex_greater(const Monomial& a, const Monomial& b) {
    if (a.degree != b.degree) return a.degree > b.degree;
    return std::memcmp(a.exp.data(), b.exp.data(), kMaxVars) > 0;
}

// ---------------------------------------------------------------- VarNames

VarNames::VarNames(std::vector<std::string> names) : names_(std::move(names)) {}

VarNames VarNames::indexed(std::string_view prefix, std::size_t count) {
    std::vector<std::string> v;
    v.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) v.push_back(std::string(prefix) + std::to_string(i));
    return VarNames(std::move(v));
}

std::size_t VarNames::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return i;
    }
    return names_.size();
}

// ---------------------------------------------------------------- Poly

namespace {

void check_nvars(std::size_t nvars) {
    if (nvars > kMaxVars) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "at most " + std::to_string(kMaxVars) + " variables are supported");
    }
}

struct TermOrder {
    bool operator()(const Term& a, const Term& b) const { return graded_lex_greater(a.mono, b.mono); }
};

} // namespace

Poly Poly::constant(std::size_t nvars, const Rational& c) {
    return monomial(nvars, Monomial::one(), c);
}

Poly Poly::variable(std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw Error(ErrorKind::IndexOutOfRange, "variable index out of range");
    return monomial(nvars, Monomial::var(index));
}

Poly Poly::monomial(std::size_t nvars, const Monomial& m, const Rational& c) {
    check_nvars(nvars);
    Poly p(nvars);
    if (c != 0) p.terms_.push_back({m, c});
    return p;
}

Poly Poly::product(std::size_t nvars, std::span<const std::size_t> vars, const Rational& c) {
    Monomial m;
    for (std::size_t v : vars) {
        if (v >= nvars) throw Error(ErrorKind::IndexOutOfRange, "variable index out of range");
        m = m * Monomial::var(v);
    }
    return monomial(nvars, m, c);
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree == 0);
}

int Poly::total_degree() const {
    return terms_.empty() ? -1 : int(terms_.front().mono.degree);
}

unsigned Poly::degree_in(std::size_t var) const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max<unsigned>(d, t.mono.exp[var]);
    return d;
}

Rational Poly::coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{m, 0}, TermOrder{});
    if (it != terms_.end() && it->mono == m) return it->coeff;
    return 0;
}

void Poly::check_same_ring(const Poly& other) const {
    if (nvars_ != other.nvars_) {
        throw Error(ErrorKind::VariableMismatch,
                    "polynomials live in rings with " + std::to_string(nvars_) + " and " +
                        std::to_string(other.nvars_) + " variables");
    }
}

void Poly::normalize() {
    std::sort(terms_.begin(), terms_.end(), TermOrder{});
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms_.size();) {
        std::size_t j = i + 1;
        Rational c = terms_[i].coeff;
        while (j < terms_.size() && terms_[j].mono == terms_[i].mono) c += terms_[j++].coeff;
        if (c != 0) {
            terms_[out].mono = terms_[i].mono;
            terms_[out].coeff = c;
            ++out;
        }
        i = j;
    }
    terms_.resize(out);
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

Poly& Poly::operator+=(const Poly& other) {
    check_same_ring(other);
    if (other.terms_.empty()) return *this;
    std::vector<Term> merged;
    merged.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() && b != other.terms_.end()) {
        if (a->mono == b->mono) {
            Rational c = a->coeff + b->coeff;
            if (c != 0) merged.push_back({a->mono, std::move(c)});
            ++a;
            ++b;
        } else if (graded_lex_greater(a->mono, b->mono)) {
            merged.push_back(std::move(*a++));
        } else {
            merged.push_back(*b++);
        }
    }
    for (; a != terms_.end(); ++a) merged.push_back(std::move(*a));
    for (; b != other.terms_.end(); ++b) merged.push_back(*b);
    terms_ = std::move(merged);
    return *this;
}

Poly& Poly::operator-=(const Poly& other) { return *this += -other; }

Poly operator*(const Poly& a, const Poly& b) {
    a.check_same_ring(b);
    Poly r(a.nvars_);
    if (a.terms_.empty() || b.terms_.empty()) return r;
    r.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_) {
        for (const auto& t : b.terms_) r.terms_.push_back({s.mono * t.mono, s.coeff * t.coeff});
    }
    r.normalize();
    return r;
}

Poly& Poly::operator*=(const Poly& other) { return *this = *this * other; }

Poly& Poly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coeff *= c;
    return *this;
}

bool operator==(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    }
    return true;
}

Poly Poly::pow(unsigned k) const {
    Poly result = constant(nvars_, 1);
    Poly base = *this;
    while (k) {
        if (k & 1u) result *= base;
        k >>= 1u;
        if (k) base *= base;
    }
    return result;
}

Poly Poly::partial(std::size_t var) const {
    if (var >= nvars_) throw Error(ErrorKind::IndexOutOfRange, "partial: variable index out of range");
    Poly r(nvars_);
    for (const auto& t : terms_) {
        unsigned e = t.mono.exp[var];
        if (e == 0) continue;
        Term d{t.mono, t.coeff * e};
        d.mono.exp[var] = static_cast<std::uint8_t>(e - 1);
        d.mono.degree = static_cast<std::uint16_t>(d.mono.degree - 1);
        r.terms_.push_back(std::move(d));
    }
    // Differentiation can reorder terms of different degree profiles.
    r.normalize();
    return r;
}

Rational Poly::eval(std::span<const Rational> point) const {
    if (point.size() != nvars_) {
        throw Error(ErrorKind::VariableMismatch, "eval: point has wrong length");
    }
    Rational sum = 0;
    for (const auto& t : terms_) {
        Rational v = t.coeff;
        for (std::size_t i = 0; i < nvars_; ++i) {
            for (unsigned e = 0; e < t.mono.exp[i]; ++e) v *= point[i];
        }
        sum += v;
    }
    return sum;
}

Poly Poly::extended(std::size_t nvars) const {
    check_nvars(nvars);
    if (nvars < nvars_) throw Error(ErrorKind::VariableMismatch, "extended: cannot shrink ring");
    Poly r = *this;
    r.nvars_ = nvars;
    return r;
}

Poly Poly::truncated(std::size_t nvars) const {
    for (const auto& t : terms_) {
        for (std::size_t i = nvars; i < nvars_; ++i) {
            if (t.mono.exp[i] != 0) {
                throw Error(ErrorKind::VariableMismatch, "truncated: dropped variable occurs");
            }
        }
    }
    Poly r = *this;
    r.nvars_ = nvars;
    return r;
}

std::vector<Poly> Poly::coefficients_in(std::size_t var) const {
    std::vector<Poly> out(degree_in(var) + 1, Poly(nvars_));
    for (const auto& t : terms_) {
        unsigned e = t.mono.exp[var];
        Term s{t.mono, t.coeff};
        s.mono.exp[var] = 0;
        s.mono.degree = static_cast<std::uint16_t>(s.mono.degree - e);
        out[e].terms_.push_back(std::move(s));
    }
    for (auto& p : out) p.normalize();
    return out;
}

Poly Poly::compose(std::span<const Poly> images) const {
    if (images.size() != nvars_) throw Error(ErrorKind::VariableMismatch, "compose: wrong image count");
    if (images.empty()) return *this;
    const std::size_t target = images.front().nvars();
    Poly result(target);
    for (const auto& t : terms_) {
        Poly term = constant(target, t.coeff);
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (t.mono.exp[i]) term *= images[i].pow(t.mono.exp[i]);
        }
        result += term;
    }
    return result;
}

std::string rational_to_string(const Rational& q) {
    return q.get_str();
}

std::string Poly::to_string(const VarNames& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Rational mag = abs(t.coeff);
        const bool negative = t.coeff < 0;
        if (first) {
            if (negative) os << '-';
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        std::string body;
        for (std::size_t i = 0; i < nvars_; ++i) {
            unsigned e = t.mono.exp[i];
            if (!e) continue;
            if (!body.empty()) body += '*';
            body += names[i];
            if (e > 1) body += '^' + std::to_string(e);
        }
        if (body.empty()) {
            os << rational_to_string(mag);
        } else if (mag == 1) {
            os << body;
        } else {
            os << rational_to_string(mag) << '*' << body;
        }
    }
    return os.str();
}

namespace {

class PolyParser {
public:
    PolyParser(std::string_view text, const VarNames& names) : text_(text), names_(names) {}

    Poly parse() {
        Poly result(names_.size());
        skip_ws();
        if (at_end()) fail("empty polynomial");
        bool first = true;
        while (!at_end()) {
            int sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = peek() == '-' ? -1 : 1;
                ++pos_;
                skip_ws();
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            first = false;
            result += parse_term() * Rational(sign);
            skip_ws();
        }
        return result;
    }

private:
    Poly parse_term() {
        Rational coeff = 1;
        Monomial mono;
        bool expect_factor = true;
        while (expect_factor) {
            skip_ws();
            if (at_end()) fail("unexpected end of input");
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                coeff *= parse_number();
            } else if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') {
                std::size_t start = pos_;
                while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
                std::string_view name = text_.substr(start, pos_ - start);
                std::size_t idx = names_.find(name);
                if (idx == names_.size()) fail("unknown variable '" + std::string(name) + "'");
                unsigned power = 1;
                skip_ws();
                if (!at_end() && peek() == '^') {
                    ++pos_;
                    skip_ws();
                    power = parse_uint();
                }
                mono = mono * Monomial::var(idx, power);
            } else {
                fail(std::string("unexpected character '") + peek() + "'");
            }
            skip_ws();
            expect_factor = !at_end() && peek() == '*';
            if (expect_factor) ++pos_;
        }
        return Poly::monomial(names_.size(), mono, coeff);
    }

    Rational parse_number() {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        std::string num(text_.substr(start, pos_ - start));
        if (!at_end() && peek() == '/') {
            ++pos_;
            std::size_t dstart = pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
            if (dstart == pos_) fail("missing denominator");
            num += '/' + std::string(text_.substr(dstart, pos_ - dstart));
        }
        Rational q;
        if (q.set_str(num, 10) != 0) fail("bad number '" + num + "'");
        if (q.get_den() == 0) fail("zero denominator");
        q.canonicalize();
        return q;
    }

    unsigned parse_uint() {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) fail("expected exponent");
        unsigned long v = std::stoul(std::string(text_.substr(start, pos_ - start)));
        if (v > 255) fail("exponent too large");
        return static_cast<unsigned>(v);
    }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::Parse, "polynomial parse error at offset " + std::to_string(pos_) + ": " + msg);
    }

    std::string_view text_;
    const VarNames& names_;
    std::size_t pos_ = 0;
};

} // namespace

Poly Poly::parse(std::string_view text, const VarNames& names) {
    check_nvars(names.size());
    return PolyParser(text, names).parse();
}

// ---------------------------------------------------------------- RationalFn

RationalFn::RationalFn(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error(ErrorKind::Constraint, "rational function with zero denominator");
    if (num_.nvars() != den_.nvars()) throw Error(ErrorKind::VariableMismatch, "numerator/denominator ring mismatch");
}

RationalFn::RationalFn(Poly num) : num_(std::move(num)), den_(Poly::constant(num_.nvars(), 1)) {}

bool RationalFn::equivalent(const RationalFn& other) const {
    return num_ * other.den_ == other.num_ * den_;
}

RationalFn operator+(const RationalFn& a, const RationalFn& b) {
    if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + (-b); }

RationalFn operator*(const RationalFn& a, const RationalFn& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
}

Rational RationalFn::eval(std::span<const Rational> point) const {
    Rational d = den_.eval(point);
    if (d == 0) throw Error(ErrorKind::Constraint, "rational function evaluated on its polar set");
    return num_.eval(point) / d;
}

std::string RationalFn::to_string(const VarNames& names) const {
    if (den_ == Poly::constant(den_.nvars(), 1)) return num_.to_string(names);
    return "(" + num_.to_string(names) + ")/(" + den_.to_string(names) + ")";
}

} // namespace voltkit
