#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "isochk/gaussian.hpp"
#include "isochk/unipoly.hpp"

namespace isochk {

enum class Var { X, Y };

/// Exponent pair (deg_x, deg_y).
using Exponent = std::pair<int, int>;

/// Sparse bivariate polynomial over Q(i). No zero coefficient is ever stored.
class BiPoly {
public:
    using Terms = std::map<Exponent, GaussianRational>;

    BiPoly() = default;
    BiPoly(GaussianRational c);
    BiPoly(long c) : BiPoly(GaussianRational(c)) {}

    static BiPoly x();
    static BiPoly y();
    static BiPoly monomial(GaussianRational c, int dx, int dy);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponent{0, 0}); }
    /// -1 for the zero polynomial.
    int total_degree() const;
    int degree_in(Var v) const;
    GaussianRational coeff(int dx, int dy) const;
    void add_term(int dx, int dy, const GaussianRational& c);

    BiPoly& operator+=(const BiPoly& o);
    BiPoly& operator-=(const BiPoly& o);
    friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
    friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
    BiPoly& operator*=(const BiPoly& o) { return *this = *this * o; }
    BiPoly operator-() const;
    BiPoly scaled(const GaussianRational& c) const;
    BiPoly pow(unsigned e) const;

    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

    Complex eval(Complex x, Complex y) const;
    GaussianRational eval(const GaussianRational& x, const GaussianRational& y) const;
    bool has_real_coefficients() const;

private:
    Terms terms_;
};

BiPoly partial_derivative(const BiPoly& p, Var v);
BiPoly homogeneous_part(const BiPoly& p, int k);
bool is_homogeneous(const BiPoly& p);

/// p(m[0][0] x + m[0][1] y, m[1][0] x + m[1][1] y).
using Matrix2 = std::array<std::array<GaussianRational, 2>, 2>;
BiPoly compose_linear(const BiPoly& p, const Matrix2& m);

/// View p as a polynomial in `main` with coefficients univariate in the other variable.
DensePoly<UniPoly> as_poly_in(const BiPoly& p, Var main);

/// Resultant eliminating `eliminate`; the result is univariate in the remaining variable.
/// Convention: Res(A,B) = lc(A)^deg B * prod B(roots of A). Throws std::invalid_argument
/// ("no variable to eliminate") when neither input involves `eliminate`.
UniPoly resultant(const BiPoly& p, const BiPoly& q, Var eliminate);

/// Subresultant resultant of two polynomials over Q(i)[t].
UniPoly resultant_univariate_coeffs(const DensePoly<UniPoly>& a, const DensePoly<UniPoly>& b);

/// One projective direction [beta:alpha] of a linear factor (alpha*x - beta*y).
struct ExactDirection {
    GaussianRational beta;
    GaussianRational alpha;
    int multiplicity = 1;
};

/// Linear factors (t*x - y) for the roots t of a squarefree polynomial with no root in Q(i);
/// each factor appears with the same multiplicity. Directions are [1:t].
struct AlgebraicDirectionGroup {
    UniPoly minimal;  // monic, squarefree
    int multiplicity = 1;
    std::vector<Complex> roots;  // numeric roots t, sorted
};

struct HomogeneousFactorization {
    GaussianRational scalar;
    std::vector<ExactDirection> exact;
    std::vector<AlgebraicDirectionGroup> algebraic;
    int degree = 0;
};

/// p = scalar * prod (alpha x - beta y)^n * prod_groups prod_t (t x - y)^n.
HomogeneousFactorization factor_homogeneous(const BiPoly& p);

/// Numeric evaluation of the factorization at (x, y).
Complex eval_factorization(const HomogeneousFactorization& f, Complex x, Complex y);

}  // namespace isochk
