#include "voltkit/rootsys.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "voltkit/error.hpp"

namespace voltkit {

namespace {

void check_rank(std::size_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidRank, "rank must be at least 1");
    if (n > 30) throw Error(ErrorKind::InvalidRank, "rank above 30 is not supported");
}

} // namespace

bool is_root_vector(const std::vector<int>& c) {
    int sign = 0;
    std::size_t first = c.size(), last = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        if (c[i] != 1 && c[i] != -1) return false;
        if (sign == 0) sign = c[i];
        if (c[i] != sign) return false;
        first = std::min(first, i);
        last = i;
    }
    if (sign == 0) return false;
    for (std::size_t i = first; i <= last; ++i)
        if (c[i] == 0) return false;
    return true;
}

Root::Root(std::vector<int> coeffs) : coeffs_(std::move(coeffs)) {
    if (!is_root_vector(coeffs_)) throw Error(ErrorKind::InvalidRoot, "not a root of A_n");
    auto nz = [](int v) { return v != 0; };
    first_ = std::size_t(std::find_if(coeffs_.begin(), coeffs_.end(), nz) - coeffs_.begin()) + 1;
    last_ = coeffs_.size() - std::size_t(std::find_if(coeffs_.rbegin(), coeffs_.rend(), nz) - coeffs_.rbegin());
}

Root Root::block(std::size_t rank, std::size_t first, std::size_t last) {
    if (first < 1 || last < first || last > rank) throw Error(ErrorKind::InvalidRoot, "bad root block");
    std::vector<int> c(rank, 0);
    for (std::size_t i = first; i <= last; ++i) c[i - 1] = 1;
    return Root(std::move(c));
}

bool Root::is_positive() const { return coeffs_[first_ - 1] > 0; }

Root Root::operator-() const {
    std::vector<int> c = coeffs_;
    for (auto& v : c) v = -v;
    return Root(std::move(c));
}

std::string Root::to_string() const {
    std::string body;
    for (std::size_t i = first_; i <= last_; ++i) {
        if (!body.empty()) body += '+';
        body += std::to_string(i);
    }
    return is_positive() ? body : "-(" + body + ")";
}

std::string Root::epsilon_string() const {
    std::size_t i = first_, j = last_ + 1;
    if (!is_positive()) std::swap(i, j);
    return "e" + std::to_string(i) + "-e" + std::to_string(j);
}

std::vector<Root> simple_roots(std::size_t n) {
    check_rank(n);
    std::vector<Root> out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back(Root::block(n, i, i));
    return out;
}

std::vector<Root> positive_roots(std::size_t n) {
    check_rank(n);
    std::vector<Root> out;
    for (std::size_t p = 1; p <= n; ++p)
        for (std::size_t q = p; q <= n; ++q) out.push_back(Root::block(n, p, q));
    return out;
}

std::optional<Root> root_sum(const Root& a, const Root& b) {
    if (a.rank() != b.rank()) throw Error(ErrorKind::InvalidRoot, "roots of different rank");
    std::vector<int> c(a.rank());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs()[i] + b.coeffs()[i];
    if (!is_root_vector(c)) return std::nullopt;
    return Root(std::move(c));
}

RootPosition position_of(const Root& r) {
    if (!r.is_positive()) throw Error(ErrorKind::InvalidRoot, "position_of requires a positive root");
    return {r.first(), r.last() + 1};
}

Root root_at(std::size_t rank, RootPosition pos) {
    if (pos.row >= pos.col || pos.col > rank + 1 || pos.row < 1)
        throw Error(ErrorKind::InvalidRoot, "position is not strictly upper triangular");
    return Root::block(rank, pos.row, pos.col - 1);
}

// ---------------------------------------------------------------- PhiSystem

PhiSystem::PhiSystem(std::size_t rank, const std::vector<Root>& extra) : rank_(rank), roots_(simple_roots(rank)) {
    for (const auto& r : extra) {
        if (r.rank() != rank) throw Error(ErrorKind::InvalidRoot, "root has wrong rank");
        if (!r.is_positive()) throw Error(ErrorKind::InvalidRoot, "Phi must contain positive roots only");
        if (std::find(roots_.begin(), roots_.end(), r) != roots_.end())
            throw Error(ErrorKind::InvalidRoot, "duplicate root " + r.to_string());
        roots_.push_back(r);
    }
}

PhiSystem PhiSystem::parse(std::size_t rank, std::string_view text) {
    check_rank(rank);
    std::vector<Root> parsed;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string_view term = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        std::vector<int> c(rank, 0);
        std::size_t pos = 0;
        bool any = false;
        while (pos <= term.size()) {
            std::size_t plus = term.find('+', pos);
            std::string_view tok = term.substr(pos, plus == std::string_view::npos ? term.npos : plus - pos);
            while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
            while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
            std::size_t idx = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), idx);
            if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
                throw Error(ErrorKind::Parse, "bad simple-root index '" + std::string(tok) + "' in Phi");
            if (idx < 1 || idx > rank)
                throw Error(ErrorKind::Parse, "simple-root index " + std::to_string(idx) + " out of range");
            if (c[idx - 1] != 0) throw Error(ErrorKind::Parse, "repeated index inside a Phi term");
            c[idx - 1] = 1;
            any = true;
            if (plus == std::string_view::npos) break;
            pos = plus + 1;
        }
        if (!any) throw Error(ErrorKind::Parse, "empty Phi term");
        if (!is_root_vector(c)) throw Error(ErrorKind::Parse, "'" + std::string(term) + "' is not a root");
        parsed.emplace_back(std::move(c));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    std::vector<Root> extra;
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        const Root& r = parsed[i];
        if (r.height() == 1) continue;
        if (std::find(extra.begin(), extra.end(), r) != extra.end())
            throw Error(ErrorKind::Parse, "duplicate root " + r.to_string());
        extra.push_back(r);
    }
    // Every simple root must be listed explicitly.
    for (std::size_t i = 1; i <= rank; ++i) {
        Root s = Root::block(rank, i, i);
        if (std::find(parsed.begin(), parsed.end(), s) == parsed.end())
            throw Error(ErrorKind::Parse, "Phi must contain simple root " + std::to_string(i));
    }
    return PhiSystem(rank, extra);
}

std::size_t PhiSystem::var_at(RootPosition pos) const {
    if (pos.row > pos.col) std::swap(pos.row, pos.col);
    for (std::size_t k = 0; k < roots_.size(); ++k)
        if (position_of(roots_[k]) == pos) return k;
    return roots_.size();
}

std::uint64_t PhiSystem::mask() const {
    std::uint64_t m = 0;
    std::size_t bit = 0;
    for (const auto& r : positive_roots(rank_)) {
        if (r.height() == 1) continue;
        if (std::find(roots_.begin(), roots_.end(), r) != roots_.end()) m |= std::uint64_t{1} << bit;
        ++bit;
    }
    return m;
}

std::string PhiSystem::to_string() const {
    std::string s;
    for (const auto& r : roots_) {
        if (!s.empty()) s += ',';
        s += r.to_string();
    }
    return s;
}

std::size_t non_simple_count(std::size_t n) {
    check_rank(n);
    return n * (n + 1) / 2 - n;
}

PhiSystem phi_from_mask(std::size_t n, std::uint64_t mask) {
    const std::size_t bits = non_simple_count(n);
    if (bits < 64 && (mask >> bits) != 0) throw Error(ErrorKind::IndexOutOfRange, "mask exceeds root count");
    std::vector<Root> extra;
    std::size_t bit = 0;
    for (const auto& r : positive_roots(n)) {
        if (r.height() == 1) continue;
        if (mask >> bit & 1u) extra.push_back(r);
        ++bit;
    }
    return PhiSystem(n, extra);
}

std::vector<PhiSystem> enumerate_phi(std::size_t n) {
    const std::size_t bits = non_simple_count(n);
    if (bits > 24) throw Error(ErrorKind::SearchTooLarge, "too many subsets to enumerate");
    std::vector<PhiSystem> out;
    out.reserve(std::size_t{1} << bits);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << bits); ++m) out.push_back(phi_from_mask(n, m));
    return out;
}

} // namespace voltkit
