#include "isochk/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace isochk {

GaussianRational GaussianRational::from_fraction(long num, long den) {
    if (den == 0) throw std::domain_error("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return GaussianRational(q);
}

GaussianRational GaussianRational::inverse() const {
    Rational n = norm();
    if (sgn(n) == 0) throw std::domain_error("division by zero in Q(i)");
    return {Rational(re_ / n), Rational(-im_ / n)};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational m = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
    if (sgn(o.im_) == 0) {
        if (sgn(o.re_) == 0) throw std::domain_error("division by zero in Q(i)");
        re_ /= o.re_;
        im_ /= o.re_;
        return *this;
    }
    return *this *= o.inverse();
}

GaussianRational GaussianRational::pow(unsigned e) const {
    GaussianRational result(1);
    GaussianRational base = *this;
    while (e) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e) base *= base;
    }
    return result;
}

std::complex<long double> GaussianRational::to_complex_ld() const {
    // mpq -> long double via numerator/denominator keeps a few more bits than get_d
    auto conv = [](const Rational& q) -> long double {
        if (sgn(q) == 0) return 0.0L;
        long exp_n = 0, exp_d = 0;
        double mn = mpz_get_d_2exp(&exp_n, q.get_num_mpz_t());
        double md = mpz_get_d_2exp(&exp_d, q.get_den_mpz_t());
        return std::ldexp(static_cast<long double>(mn) / md, static_cast<int>(exp_n - exp_d));
    };
    return {conv(re_), conv(im_)};
}

std::string rational_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string GaussianRational::to_string() const {
    if (sgn(im_) == 0) return rational_string(re_);
    std::string imag;
    if (abs(im_) == 1) {
        imag = "i";
    } else {
        imag = rational_string(abs(im_)) + "*i";
    }
    if (sgn(re_) == 0) return (sgn(im_) < 0 ? "-" : "") + imag;
    return rational_string(re_) + (sgn(im_) < 0 ? "-" : "+") + imag;
}

bool gaussian_less(const GaussianRational& a, const GaussianRational& b) {
    int c = cmp(a.re(), b.re());
    if (c != 0) return c < 0;
    return cmp(a.im(), b.im()) < 0;
}

Rational rationalize(long double x, const mpz_class& max_den) {
    // continued fraction convergents h/k
    bool neg = x < 0;
    long double y = neg ? -x : x;
    mpz_class h_prev = 1, h = static_cast<unsigned long>(std::floor(y));
    mpz_class k_prev = 0, k = 1;
    long double frac = y - std::floor(y);
    for (int iter = 0; iter < 64 && frac > 1e-30L; ++iter) {
        long double inv = 1.0L / frac;
        long double a_ld = std::floor(inv);
        if (a_ld > 1e18L) break;
        mpz_class a = static_cast<unsigned long>(a_ld);
        mpz_class h_next = a * h + h_prev;
        mpz_class k_next = a * k + k_prev;
        if (k_next > max_den) break;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        frac = inv - a_ld;
    }
    Rational r(h, k);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

}  // namespace isochk
