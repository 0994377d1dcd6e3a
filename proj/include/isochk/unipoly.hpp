#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "isochk/dense_poly.hpp"
#include "isochk/gaussian.hpp"

namespace isochk {

using UniPoly = DensePoly<GaussianRational>;
using ComplexLD = std::complex<long double>;

struct RootCluster {
    Complex value;
    int multiplicity = 1;
    double radius = 0.0;
};

/// All roots of a complex polynomial given by coefficients (index = degree), leading one nonzero.
/// Aberth simultaneous iteration followed by Newton polishing. Throws std::runtime_error on
/// non-convergence.
std::vector<ComplexLD> numeric_roots(const std::vector<ComplexLD>& coeffs);

/// Roots with exact multiplicities: Yun decomposition first, numeric roots of each squarefree
/// factor afterwards. Sorted by (re, im).
std::vector<RootCluster> roots_clustered(const UniPoly& u, double tol = 1e-8);

/// Roots of u lying in Q(i), each with its multiplicity, sorted.
std::vector<std::pair<GaussianRational, int>> exact_roots(const UniPoly& u);

/// Roots in Q(i) of a squarefree polynomial (multiplicity not inspected).
std::vector<GaussianRational> exact_roots_squarefree(const UniPoly& u);

/// Scale u by a rational so all coefficients become Gaussian integers (re, im integral).
UniPoly clear_denominators(const UniPoly& u);

std::vector<ComplexLD> to_complex_coeffs(const UniPoly& u);
double norm1(const UniPoly& u);
Complex eval_complex(const UniPoly& u, Complex z);
ComplexLD eval_complex(const std::vector<ComplexLD>& c, ComplexLD z);

/// Human readable form in the given variable name, e.g. "t^2 - 2".
std::string format_unipoly(const UniPoly& u, const std::string& var);

}  // namespace isochk
