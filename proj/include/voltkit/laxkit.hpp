#pragma once

// Lax pairs (L, B) over a root subset Phi, with the convention dL/dt = [B, L].
//
// L = sum_k a_k (E_pos(k) + E_pos(k)^T). Every unordered pair of elements of
// Phi ∪ -Phi whose elementary matrices compose to an upper-triangular position
// contributes c_p a_i a_j (E - E^T) to B, with c_p = ±1 chosen by search.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "voltkit/matrix.hpp"
#include "voltkit/poly.hpp"
#include "voltkit/rootsys.hpp"

namespace voltkit {

inline constexpr const char* kLaxConvention = "dL/dt = [B, L] = BL - LB";

struct ContributorPair {
    std::size_t i = 0; // variable index of the first factor
    int sign_i = 1;    // +1: root, -1: negative root
    std::size_t j = 0;
    int sign_j = 1;
    RootPosition pos;  // upper-triangular target entry of B
};

struct PsiPair {
    Root sum_root;
    std::vector<std::size_t> contributors; // indices into contributor_pairs()
};

// Deterministic pair order: elements listed as (a1,+),(a1,-),(a2,+),... and
// paired lexicographically.
std::vector<ContributorPair> contributor_pairs(const PhiSystem& phi);
// Grouped by sum root, in positive_roots order.
std::vector<PsiPair> build_psi(const PhiSystem& phi);

PolyMatrix build_L(const PhiSystem& phi);
PolyMatrix build_B(const PhiSystem& phi, const std::vector<ContributorPair>& pairs, const std::vector<int>& signs);

struct LaxPair {
    PhiSystem phi;
    PolyMatrix L;
    PolyMatrix B;
    std::vector<ContributorPair> pairs; // empty for closed-form families
    std::vector<int> signs;
    std::vector<Poly> xdot;             // da_k/dt, k = 0..var_count-1
    std::vector<RootPosition> positions; // entry of L holding a_k (1-based, upper)
    std::string origin;                 // "search", "family:<case>", "twodiag"
};

// Builds L and B, computes [B,L] symbolically and reads off xdot. Throws
// Constraint if [B,L] has an entry outside the support of L.
LaxPair assemble_lax_pair(const PhiSystem& phi, const std::vector<ContributorPair>& pairs,
                          const std::vector<int>& signs);
// Same check for arbitrary (L,B); positions lists the entry of each variable.
std::vector<Poly> extract_xdot(const PolyMatrix& L, const PolyMatrix& B, const std::vector<RootPosition>& positions);

struct SearchOptions {
    bool require_lv = false;               // also force every non-LV monomial of xdot to vanish
    std::uint64_t max_candidates = 1u << 20; // branch decisions before SearchTooLarge
};

struct SearchStats {
    std::size_t pairs = 0;
    std::size_t equations = 0;
    std::uint64_t decisions = 0;
};

std::optional<LaxPair> search_signs(const PhiSystem& phi, const SearchOptions& opts = {},
                                    SearchStats* stats = nullptr);
// Accepted sign vectors in deterministic (+1 before -1) order, at most `limit`.
std::vector<LaxPair> all_sign_solutions(const PhiSystem& phi, std::size_t limit, const SearchOptions& opts = {});

// ---------------------------------------------------------------- Lotka-Volterra

struct LVReduction {
    std::vector<std::vector<long long>> A; // skew, x_k' = x_k sum_j A_kj x_j
    long long scale = 2;                   // x_i = scale * a_i^2
    std::vector<Poly> x_equations;         // in x-variables
};

std::optional<LVReduction> detect_lv(const LaxPair& pair);
std::vector<Poly> lv_equations(const std::vector<std::vector<long long>>& A);

// ---------------------------------------------------------------- families

enum class FamilyCase { KM, PeriodicKM, Family2, Family3, Family4 };

FamilyCase parse_family_case(const std::string& text);
std::string family_case_name(FamilyCase c);
PhiSystem family_phi(FamilyCase c, std::size_t n);
LaxPair named_family(FamilyCase c, std::size_t n);

// Matrix size n, L nonzero on the superdiagonal (a_1..a_{n-1}) and on the
// diagonal with m entries starting at column n-m+1 (a_n..a_{n+m-1}).
LaxPair two_diagonal_family(std::size_t m, std::size_t n);

// ---------------------------------------------------------------- enumeration

struct EnumerationEntry {
    std::uint64_t mask = 0;
    std::string phi;
    bool lax = false;
    bool lv = false;
    std::size_t solution_pairs = 0;
};

struct EnumerationSummary {
    std::size_t rank = 0;
    std::vector<EnumerationEntry> entries; // in mask order
    std::size_t lax_count() const;
    std::size_t lv_count() const;
    std::vector<std::uint64_t> failing_masks() const;
    std::vector<std::uint64_t> lv_masks() const;
};

EnumerationEntry classify_phi(const PhiSystem& phi, const SearchOptions& opts = {});
EnumerationSummary enumerate_serial(std::size_t n, const SearchOptions& opts = {});
EnumerationSummary enumerate_parallel(std::size_t n, int jobs, const SearchOptions& opts = {});

} // namespace voltkit
