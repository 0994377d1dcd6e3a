#include "isochk/jacobian.hpp"

#include <stdexcept>

#include "isochk/parser.hpp"

namespace isochk {

JacobianDet jacobian_det(const BiPoly& f, const BiPoly& g) {
    JacobianDet r;
    r.det = partial_derivative(f, Var::X) * partial_derivative(g, Var::Y) -
            partial_derivative(f, Var::Y) * partial_derivative(g, Var::X);
    r.constant = r.det.is_constant();
    if (r.constant) r.value = r.det.coeff(0, 0);
    return r;
}

PolyPair accept_pair(const BiPoly& f, const BiPoly& g) {
    const JacobianDet j = jacobian_det(f, g);
    if (!j.constant) throw std::invalid_argument("Jacobian determinant is not constant: " + format_poly(j.det));
    if (j.value.is_zero()) throw std::invalid_argument("Jacobian determinant is zero");
    return {f, g, j.value};
}

BiPoly induced_hamiltonian(const PolyPair& pair) {
    return (pair.f * pair.f + pair.g * pair.g).scaled(GaussianRational::from_fraction(1, 2));
}

SystemSolution common_zeros(const BiPoly& f, const BiPoly& g, double cluster_tol) {
    return solve_system(f, g, cluster_tol);
}

const char* to_string(CorollaryStatus s) {
    switch (s) {
        case CorollaryStatus::CriterionMet: return "criterion_met";
        case CorollaryStatus::CriterionViolated: return "criterion_violated";
        case CorollaryStatus::Undetermined: return "undetermined";
    }
    return "undetermined";
}

CorollaryVerdict corollary_verdict(const PolyPair& pair, double cluster_tol) {
    CorollaryVerdict v;
    v.zeros = common_zeros(pair.f, pair.g, cluster_tol);
    if (v.zeros.ambiguous)
        v.status = CorollaryStatus::Undetermined;
    else
        v.status = v.zeros.roots.size() == 1 ? CorollaryStatus::CriterionMet : CorollaryStatus::CriterionViolated;
    return v;
}

}  // namespace isochk
