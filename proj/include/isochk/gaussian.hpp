#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace isochk {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// Element of Q(i): re + im*i with both parts kept in lowest terms by GMP.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long v) : re_(v) {}
    GaussianRational(Rational re) : re_(std::move(re)) {}
    GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussianRational i() { return {Rational(0), Rational(1)}; }
    static GaussianRational from_fraction(long num, long den);

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    GaussianRational conj() const { return {re_, -im_}; }
    Rational norm() const { return re_ * re_ + im_ * im_; }
    GaussianRational inverse() const;

    GaussianRational& operator+=(const GaussianRational& o);
    GaussianRational& operator-=(const GaussianRational& o);
    GaussianRational& operator*=(const GaussianRational& o);
    GaussianRational& operator/=(const GaussianRational& o);

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    GaussianRational operator-() const { return {-re_, -im_}; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    GaussianRational pow(unsigned e) const;
    Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }
    std::complex<long double> to_complex_ld() const;

    /// "p/q", "i", "-3/2*i", "1/2-i", ... ; round-trips through the polynomial parser
    /// when wrapped in parentheses.
    std::string to_string() const;

private:
    Rational re_{0};
    Rational im_{0};
};

/// Canonical "p/q" (or "p") text of a rational.
std::string rational_string(const Rational& q);

/// Total order on Q(i) (lexicographic on (re, im)); used for deterministic sorting only.
bool gaussian_less(const GaussianRational& a, const GaussianRational& b);

/// Best rational approximation of x with denominator at most max_den (continued fractions).
Rational rationalize(long double x, const mpz_class& max_den);

}  // namespace isochk
