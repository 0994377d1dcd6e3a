#pragma once

#include <optional>
#include <vector>

#include "isochk/bipoly.hpp"

namespace isochk {

struct SystemRoot {
    Complex x, y;
    std::optional<GaussianRational> exact_x, exact_y;  // both set when the root lies in Q(i)^2
    int multiplicity = 1;                              // from the resultant root multiplicities
};

struct SystemSolution {
    std::vector<SystemRoot> roots;  // sorted by (Re x, Im x, Re y, Im y)
    bool ambiguous = false;         // two numeric roots closer than the clustering tolerance allows to separate
};

/// Common zeros of p and q in C^2: Res_y and Res_x, exact Q(i) roots checked exactly, the remaining
/// pairs Newton-polished and kept when both polynomials vanish there.
/// Throws std::runtime_error("common component") when the zero set is not finite.
SystemSolution solve_system(const BiPoly& p, const BiPoly& q, double cluster_tol = 1e-8);

}  // namespace isochk
