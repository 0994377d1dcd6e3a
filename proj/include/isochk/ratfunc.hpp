#pragma once

#include <string>

#include "isochk/unipoly.hpp"

namespace isochk {

/// Element of Q(i)(h): num/den with den monic and gcd(num, den) = 1.
class RatFunc {
public:
    RatFunc() : den_(GaussianRational(1)) {}
    RatFunc(long v) : num_(GaussianRational(v)), den_(GaussianRational(1)) {}
    RatFunc(GaussianRational v) : num_(std::move(v)), den_(GaussianRational(1)) {}
    explicit RatFunc(UniPoly num) : num_(std::move(num)), den_(GaussianRational(1)) {}
    RatFunc(UniPoly num, UniPoly den);

    /// The indeterminate h.
    static RatFunc h();

    const UniPoly& num() const { return num_; }
    const UniPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }
    /// True when the value does not depend on h.
    bool is_constant() const { return is_polynomial() && num_.degree() <= 0; }
    GaussianRational constant_value() const { return num_.coeff(0); }
    /// Degree in h of a polynomial value (-1 for zero); only meaningful when is_polynomial().
    int poly_degree() const { return num_.degree(); }

    RatFunc& operator+=(const RatFunc& o);
    RatFunc& operator-=(const RatFunc& o);
    RatFunc& operator*=(const RatFunc& o);
    friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
    friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
    friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
    RatFunc operator-() const;
    RatFunc inverse() const;
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }
    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    /// d/dh.
    RatFunc derivative() const;
    Complex eval(Complex h) const;
    std::string to_string() const;

private:
    void normalize();

    UniPoly num_;
    UniPoly den_;
};

}  // namespace isochk
