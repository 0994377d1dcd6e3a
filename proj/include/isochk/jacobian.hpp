#pragma once

#include <vector>

#include "isochk/bipoly.hpp"
#include "isochk/system.hpp"

namespace isochk {

struct JacobianDet {
    BiPoly det;  // f_x g_y - f_y g_x
    bool constant = false;
    GaussianRational value{0};  // det when constant
};

JacobianDet jacobian_det(const BiPoly& f, const BiPoly& g);

/// A pair with constant nonzero Jacobian determinant. A determinant c != 1 is kept as recorded.
struct PolyPair {
    BiPoly f, g;
    GaussianRational jac{1};
};

/// Throws std::invalid_argument when the determinant is nonconstant or zero.
PolyPair accept_pair(const BiPoly& f, const BiPoly& g);

/// (f^2 + g^2)/2
BiPoly induced_hamiltonian(const PolyPair& pair);

/// Common zeros of f and g with resultant multiplicities. Throws std::runtime_error("common component").
SystemSolution common_zeros(const BiPoly& f, const BiPoly& g, double cluster_tol = 1e-8);

enum class CorollaryStatus { CriterionMet, CriterionViolated, Undetermined };
const char* to_string(CorollaryStatus s);

struct CorollaryVerdict {
    CorollaryStatus status = CorollaryStatus::Undetermined;
    SystemSolution zeros;
};

/// Met iff f = g = 0 has exactly one point in C^2. Undetermined when the numeric roots are ambiguous.
CorollaryVerdict corollary_verdict(const PolyPair& pair, double cluster_tol = 1e-8);

}  // namespace isochk
