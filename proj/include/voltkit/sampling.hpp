#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "voltkit/poly.hpp"

namespace voltkit {

// Random evaluation point with coordinates drawn from the odd integers 1..97.
inline std::vector<Rational> odd_point(std::mt19937_64& rng, std::size_t nvars) {
    std::uniform_int_distribution<int> pick(0, 48);
    std::vector<Rational> p(nvars);
    for (auto& v : p) v = 2 * pick(rng) + 1;
    return p;
}

} // namespace voltkit
