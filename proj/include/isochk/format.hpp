#pragma once

#include <string>
#include <vector>

#include "isochk/gaussian.hpp"

namespace isochk {

struct FormatTerm {
    GaussianRational coeff;
    std::string monomial;  // empty for the constant term
};

/// Join terms as "a*m1 + b*m2 - ...": unit coefficients dropped, imaginary ones as "3/2*i*m",
/// mixed ones parenthesized. Empty input gives "0".
std::string format_sum(const std::vector<FormatTerm>& terms);

}  // namespace isochk
