#pragma once

#include <string>
#include <vector>

#include "voltkit/poly.hpp"

namespace testing {

inline voltkit::Poly P(const std::string& text, std::size_t nvars, const std::string& prefix = "a") {
    return voltkit::Poly::parse(text, voltkit::VarNames::indexed(prefix, nvars));
}

inline std::vector<voltkit::Poly> Ps(const std::vector<std::string>& texts, std::size_t nvars,
                                     const std::string& prefix = "a") {
    std::vector<voltkit::Poly> out;
    for (const auto& t : texts) out.push_back(P(t, nvars, prefix));
    return out;
}

inline std::string S(const voltkit::Poly& p, const std::string& prefix = "a") {
    return p.to_string(voltkit::VarNames::indexed(prefix, p.nvars()));
}

inline voltkit::Poly lie(const voltkit::Poly& F, const std::vector<voltkit::Poly>& xdot) {
    voltkit::Poly s(F.nvars());
    for (std::size_t i = 0; i < xdot.size(); ++i) s += F.partial(i) * xdot[i];
    return s;
}

} // namespace testing
