#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "voltkit/laxkit.hpp"
#include "voltkit/matrix.hpp"
#include "voltkit/poly.hpp"

namespace voltkit {

struct LabeledPoly {
    std::string label;
    Poly poly;
    std::string note; // normalization or provenance of the closed form
};

struct LabeledRational {
    std::string label;
    RationalFn fn;
    std::string note;
};

struct IntegralSet {
    std::vector<LabeledPoly> polys;
    std::vector<LabeledRational> rationals;

    std::size_t size() const { return polys.size() + rationals.size(); }
    bool empty() const { return size() == 0; }
    // Polys first, then rationals, each as a RationalFn.
    std::vector<RationalFn> as_functions() const;
    std::vector<std::string> labels() const;
};

// tr(L^k)/k for even k and tr(L^k)/(2k) for odd k.
Poly trace_power(const PolyMatrix& L, unsigned k);
std::string trace_normalization(unsigned k);

struct ChoppedDet {
    std::size_t k = 0;
    std::vector<Poly> coeffs;       // coefficients of lambda^(n-2k) .. lambda^0
    std::size_t leading = 0;        // index of the first nonzero coefficient
    std::vector<RationalFn> ratios; // coeffs[leading+r] / coeffs[leading], r >= 1
};

// Determinant of L - lambda*I with the first k rows and last k columns removed.
ChoppedDet chop(const PolyMatrix& L, std::size_t k);
// Last chopped ratio with its numerator's leading term made positive.
std::optional<RationalFn> chopped_casimir(const PolyMatrix& L, std::size_t k);

enum class MoserParity { Odd, Even };

struct MoserReduction {
    MoserParity parity = MoserParity::Odd;
    std::vector<std::size_t> kept;                     // 1-based indices kept from L^2
    PolyMatrix reduced;
    std::vector<std::pair<std::string, Poly>> var_map; // B_i (diagonal) then A_i (upper, by offset then row)
    std::vector<std::pair<std::size_t, std::size_t>> a_positions; // 0-based (row, col) in `reduced` for each A_i
};

MoserParity parse_parity(const std::string& text);
std::string parity_name(MoserParity p);
// Keeps the odd (E_o) or even (E_e) indexed rows and columns of L^2.
MoserReduction moser_reduce(const PolyMatrix& L, MoserParity parity);
// True when L^2 has no entries linking odd and even indices, so the two
// reductions together recover L^2.
bool moser_partition_recovers(const PolyMatrix& L);

// Closed-form extra integral of the two-diagonal family (m=2 any n; m=3 even n).
Poly moser_extra_integral(std::size_t m, std::size_t n);
// Closed-form Casimirs (m=2 even n; m=3). Empty for m=2 odd n (nondegenerate).
std::vector<LabeledPoly> twodiag_casimirs(std::size_t m, std::size_t n);

// Toda variables of the symmetric KM system of rank n (a_1..a_n):
// A_i = -a_{2i-1} a_{2i}, B_i = a_{2i-1}^2 + a_{2i-2}^2.
struct HenonMap {
    std::vector<Poly> A;
    std::vector<Poly> B;
};
HenonMap henon_map(std::size_t rank);
// Checks dA_i/dt = A_i(B_{i+1}-B_i) and dB_i/dt = 2(A_i^2 - A_{i-1}^2) along xdot.
bool henon_toda_holds(const HenonMap& h, const std::vector<Poly>& xdot);

} // namespace voltkit
