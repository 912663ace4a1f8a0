#pragma once

#include <string>
#include <vector>

namespace fixtures {

using Lines = std::vector<std::string>;

// A3, Phi = {1,2,3,1+2}
inline const Lines ex41_a = {
    "a1*a2^2 - a1*a4^2",
    "-a1^2*a2 + a2*a3^2 + a2*a4^2",
    "-a2^2*a3 + a3*a4^2",
    "a1^2*a4 - a2^2*a4 - a3^2*a4",
};
inline const Lines ex41_x = {
    "x1*x2 - x1*x4",
    "-x1*x2 + x2*x3 + x2*x4",
    "-x2*x3 + x3*x4",
    "x1*x4 - x2*x4 - x3*x4",
};
inline const std::vector<std::vector<long long>> ex41_A = {
    {0, 1, 0, -1}, {-1, 0, 1, 1}, {0, -1, 0, 1}, {1, -1, -1, 0}};

// A3, Phi = {1,2,3,1+2+3}
inline const Lines pkm3_x = {
    "x1*x2 - x1*x4",
    "-x1*x2 + x2*x3",
    "-x2*x3 + x3*x4",
    "x1*x4 - x3*x4",
};

// A3, Phi = {1,2,3,1+2,2+3}
inline const Lines ex42_a = {
    "a1*a2^2 - a1*a5^2 - a1*a4^2 - 2*a3*a4*a5",
    "a2*a4^2 + a2*a3^2 - a1^2*a2 - a2*a5^2",
    "a3*a5^2 + a3*a4^2 - a2^2*a3 + 2*a1*a4*a5",
    "a1^2*a4 - a2^2*a4 - a3^2*a4",
    "a1^2*a5 - a3^2*a5 + a2^2*a5",
};
// upper triangle, row by row
inline const Lines ex42_pi = {
    "a1*a2", "-2*a4*a5", "-a1*a4", "-a1*a5",
    "a2*a3", "a2*a4", "-a2*a5",
    "a3*a4", "a3*a5",
    "0",
};

// A3, Phi = {1,2,3,2+3,1+2+3}
inline const Lines ex43_a = {
    "a1*a5^2 + a1*a2^2 - a1*a4^2 + 2*a2*a3*a5",
    "a2*a3^2 - a1^2*a2 - a2*a4^2",
    "-a3*a5^2 + a3*a4^2 - a2^2*a3 - 2*a1*a2*a5",
    "-a4*a5^2 - a3^2*a4 + a1^2*a4 + a2^2*a4",
    "-a1^2*a5 + a4^2*a5 + a3^2*a5",
};
inline const Lines ex43_pi = {
    "a1*a2", "2*a2*a5", "-a1*a4", "a1*a5",
    "a2*a3", "-a2*a4", "0",
    "a3*a4", "-a3*a5",
    "-a4*a5",
};

// A4, Phi = {1,2,3,4,2+3}
inline const Lines ex44_x = {
    "x1*x2 - x1*x5",
    "-x2*x5 + x2*x3 - x1*x2",
    "x3*x5 + x3*x4 - x2*x3",
    "x4*x5 - x3*x4",
    "-x4*x5 - x3*x5 + x1*x5 + x2*x5",
};
// det(lambda I - L), highest power first, in the a-variables
inline const Lines ex44_charpoly = {
    "1", "0", "-a1^2 - a2^2 - a3^2 - a4^2 - a5^2", "-2*a2*a3*a5",
    "a1^2*a3^2 + a1^2*a4^2 + a2^2*a4^2", "0",
};

// A4, Phi = {1,2,3,4,1+2+3}, second sign choice
inline const Lines chop5_a = {
    "a1*a2^2 + a1*a5^2 + 2*a2*a3*a5",
    "a2*a3^2 - a1^2*a2",
    "a3*a4^2 - a2^2*a3 - a3*a5^2 - 2*a1*a2*a5",
    "-a4*a5^2 - a3^2*a4",
    "-a1^2*a5 + a3^2*a5 + a4^2*a5",
};

// two-diagonal m=4, n=10
inline const Lines twodiag_4_10 = {
    "a1*a2^2 + a1*a11^2 - a1*a10^2",
    "a2*a3^2 - a1^2*a2 + a2*a12^2 - a2*a11^2",
    "a3*a4^2 - a2^2*a3 + a3*a13^2 - a3*a12^2",
    "a4*a5^2 - a3^2*a4 - a4*a13^2",
    "a5*a6^2 - a4^2*a5",
    "a6*a7^2 - a5^2*a6 + a6*a10^2",
    "a7*a8^2 - a6^2*a7 + a7*a11^2 - a7*a10^2",
    "a8*a9^2 - a7^2*a8 + a8*a12^2 - a8*a11^2",
    "-a8^2*a9 + a9*a13^2 - a9*a12^2",
    "a7^2*a10 - a6^2*a10 + a1^2*a10 + 2*a1*a7*a11",
    "a8^2*a11 - a7^2*a11 + a2^2*a11 - a1^2*a11 + 2*a2*a8*a12 - 2*a1*a7*a10",
    "a9^2*a12 - a8^2*a12 + a3^2*a12 - a2^2*a12 + 2*a3*a9*a13 - 2*a2*a8*a11",
    "-a9^2*a13 + a4^2*a13 - a3^2*a13 - 2*a3*a9*a12",
};

// two-diagonal m=2, n=9
inline const Lines twodiag_2_9 = {
    "a1*a2^2 + a1*a10^2 - a1*a9^2",
    "a2*a3^2 - a1^2*a2 - a2*a10^2",
    "a3*a4^2 - a2^2*a3",
    "a4*a5^2 - a3^2*a4",
    "a5*a6^2 - a4^2*a5",
    "a6*a7^2 - a5^2*a6",
    "a7*a8^2 - a6^2*a7 + a7*a9^2",
    "-a7^2*a8 + a8*a10^2 - a8*a9^2",
    "a1^2*a9 + a8^2*a9 - a7^2*a9 + 2*a1*a8*a10",
    "a2^2*a10 - a1^2*a10 - a8^2*a10 - 2*a1*a8*a9",
};

// two-diagonal m=3, n=7
inline const Lines twodiag_3_7 = {
    "a1*a2^2 + a1*a8^2 - a1*a7^2",
    "a2*a3^2 - a1^2*a2 + a2*a9^2 - a2*a8^2",
    "a3*a4^2 - a2^2*a3 - a3*a9^2",
    "a4*a5^2 - a3^2*a4 + a4*a7^2",
    "a5*a6^2 - a4^2*a5 + a5*a8^2 - a5*a7^2",
    "-a5^2*a6 + a6*a9^2 - a6*a8^2",
    "a1^2*a7 + a5^2*a7 - a4^2*a7 + 2*a1*a5*a8",
    "a2^2*a8 - a1^2*a8 + a6^2*a8 - a5^2*a8 + 2*a2*a6*a9 - 2*a1*a5*a7",
    "a3^2*a9 - a2^2*a9 - a6^2*a9 - 2*a2*a6*a8",
};
// full matrix, upper triangle row by row (9 variables)
inline const Lines twodiag_3_7_pi = {
    "a1*a2", "0", "0", "0", "0", "-a1*a7", "a1*a8", "0",
    "a2*a3", "0", "0", "0", "0", "-a2*a8", "a2*a9",
    "a3*a4", "0", "0", "0", "0", "-a3*a9",
    "a4*a5", "0", "a4*a7", "0", "0",
    "a5*a6", "-a5*a7", "a5*a8", "0",
    "0", "-a6*a8", "a6*a9",
    "2*a1*a5", "0",
    "2*a2*a6",
};

// two-diagonal m=3, n=8
inline const Lines twodiag_3_8 = {
    "a1*a2^2 + a1*a9^2 - a1*a8^2",
    "a2*a3^2 - a1^2*a2 + a2*a10^2 - a2*a9^2",
    "a3*a4^2 - a2^2*a3 - a3*a10^2",
    "a4*a5^2 - a3^2*a4",
    "a5*a6^2 - a4^2*a5 + a5*a8^2",
    "a6*a7^2 - a5^2*a6 + a6*a9^2 - a6*a8^2",
    "-a6^2*a7 + a7*a10^2 - a7*a9^2",
    "a1^2*a8 + a6^2*a8 - a5^2*a8 + 2*a1*a6*a9",
    "a2^2*a9 - a1^2*a9 + a7^2*a9 - a6^2*a9 + 2*a2*a7*a10 - 2*a1*a6*a8",
    "a3^2*a10 - a2^2*a10 - a7^2*a10 - 2*a2*a7*a9",
};
inline const Lines twodiag_3_8_pi = {
    "a1*a2", "0", "0", "0", "0", "0", "-a1*a8", "a1*a9", "0",
    "a2*a3", "0", "0", "0", "0", "0", "-a2*a9", "a2*a10",
    "a3*a4", "0", "0", "0", "0", "0", "-a3*a10",
    "a4*a5", "0", "0", "0", "0", "0",
    "a5*a6", "0", "a5*a8", "0", "0",
    "a6*a7", "-a6*a8", "a6*a9", "0",
    "0", "-a7*a9", "a7*a10",
    "2*a1*a6", "0",
    "2*a2*a7",
};

// Reduced equations for the even-index Moser block of m=3, n=8 (B1..B4, A1..A6)
inline const Lines moser_3_8_reduced = {
    "2*A1^2 + 2*A6^2 - 2*A4^2",
    "2*A2^2 - 2*A1^2 - 2*A5^2",
    "2*A3^2 + 2*A4^2 - 2*A2^2",
    "2*A5^2 - 2*A3^2 - 2*A6^2",
    "A1*B2 - A1*B1",
    "A2*B3 - A2*B2",
    "A3*B4 - A3*B3",
    "A4*B1 - A4*B3 + 2*A3*A6",
    "A5*B2 - A5*B4 - 2*A1*A6",
    "A6*B4 - A6*B1 - 2*A3*A4 + 2*A1*A5",
};

} // namespace fixtures
