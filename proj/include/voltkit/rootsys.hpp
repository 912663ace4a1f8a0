#pragma once

// Positive roots of A_n as simple-root coefficient vectors, their matrix
// positions, and the subsets Phi used to place variables in L.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace voltkit {

class Root {
public:
    // Throws InvalidRoot unless coeffs is +-(contiguous block of 1s).
    explicit Root(std::vector<int> coeffs);
    static Root block(std::size_t rank, std::size_t first, std::size_t last); // 1-based, inclusive

    std::size_t rank() const { return coeffs_.size(); }
    const std::vector<int>& coeffs() const { return coeffs_; }
    bool is_positive() const;
    // 1-based inclusive block [first, last] of nonzero coefficients.
    std::size_t first() const { return first_; }
    std::size_t last() const { return last_; }
    std::size_t height() const { return last_ - first_ + 1; }

    Root operator-() const;
    friend bool operator==(const Root&, const Root&) = default;

    std::string to_string() const;         // "1+2" style, negatives as "-(1+2)"
    std::string epsilon_string() const;    // "e1-e3"

private:
    std::vector<int> coeffs_;
    std::size_t first_ = 0;
    std::size_t last_ = 0;
};

bool is_root_vector(const std::vector<int>& coeffs);

struct RootPosition {
    std::size_t row = 0; // 1-based
    std::size_t col = 0;
    friend bool operator==(const RootPosition&, const RootPosition&) = default;
};

std::vector<Root> simple_roots(std::size_t n);
// Sorted by (block start, block length).
std::vector<Root> positive_roots(std::size_t n);
std::optional<Root> root_sum(const Root& a, const Root& b);
RootPosition position_of(const Root& r);
Root root_at(std::size_t rank, RootPosition pos);

class PhiSystem {
public:
    // Simple roots followed by `extra` (which must be positive, non-simple, distinct).
    PhiSystem(std::size_t rank, const std::vector<Root>& extra);
    // "1,2,3,1+2": comma-separated roots, each a '+'-joined list of simple-root indices.
    static PhiSystem parse(std::size_t rank, std::string_view text);

    std::size_t rank() const { return rank_; }
    std::size_t dim() const { return rank_ + 1; }
    const std::vector<Root>& roots() const { return roots_; }
    std::size_t var_count() const { return roots_.size(); }
    // Index of the variable sitting at `pos` (either triangle), or var_count().
    std::size_t var_at(RootPosition pos) const;
    // Bitmask over the non-simple positive roots in positive_roots order.
    std::uint64_t mask() const;
    std::string to_string() const;

private:
    std::size_t rank_;
    std::vector<Root> roots_;
};

std::size_t non_simple_count(std::size_t n);
PhiSystem phi_from_mask(std::size_t n, std::uint64_t mask);
// All subsets Pi ⊆ Phi ⊆ Delta+, ordered by mask.
std::vector<PhiSystem> enumerate_phi(std::size_t n);

} // namespace voltkit
