#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace isochk {

/// Dense univariate polynomial over a coefficient type T, coefficients indexed by degree.
///
/// T needs value semantics, a zero default value, ring operators and `is_zero()`.
/// Field algorithms (divmod, gcd, ...) additionally need `T::inverse()`.
/// Trailing zeros are trimmed structurally, so the zero polynomial has no coefficients.
template <class T>
class DensePoly {
public:
    DensePoly() = default;
    explicit DensePoly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
    DensePoly(T constant) {
        if (!constant.is_zero()) c_.push_back(std::move(constant));
    }

    static DensePoly monomial(T coeff, int degree) {
        std::vector<T> v(static_cast<std::size_t>(degree) + 1);
        v.back() = std::move(coeff);
        return DensePoly(std::move(v));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<T>& coeffs() const { return c_; }
    const T& lc() const { return c_.back(); }

    T coeff(int k) const {
        if (k < 0 || k > degree()) return T{};
        return c_[static_cast<std::size_t>(k)];
    }
    void set_coeff(int k, T v) {
        if (k > degree()) c_.resize(static_cast<std::size_t>(k) + 1);
        c_[static_cast<std::size_t>(k)] = std::move(v);
        trim();
    }

    DensePoly& operator+=(const DensePoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        trim();
        return *this;
    }
    DensePoly& operator-=(const DensePoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
        trim();
        return *this;
    }
    friend DensePoly operator+(DensePoly a, const DensePoly& b) { return a += b; }
    friend DensePoly operator-(DensePoly a, const DensePoly& b) { return a -= b; }
    DensePoly operator-() const {
        DensePoly r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend DensePoly operator*(const DensePoly& a, const DensePoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return DensePoly(std::move(r));
    }
    DensePoly& operator*=(const DensePoly& o) { return *this = *this * o; }

    DensePoly scaled(const T& s) const {
        DensePoly r = *this;
        for (auto& v : r.c_) v *= s;
        r.trim();
        return r;
    }

    /// Multiply by X^k.
    DensePoly shifted(int k) const {
        if (is_zero()) return {};
        std::vector<T> r(static_cast<std::size_t>(k));
        r.insert(r.end(), c_.begin(), c_.end());
        return DensePoly(std::move(r));
    }

    T eval(const T& x) const {
        T acc{};
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
        return acc;
    }

    DensePoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<T> r(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) r[k - 1] = c_[k] * T(static_cast<long>(k));
        return DensePoly(std::move(r));
    }

    DensePoly pow(unsigned e) const {
        DensePoly result(T(1));
        DensePoly base = *this;
        while (e) {
            if (e & 1u) result *= base;
            e >>= 1u;
            if (e) base *= base;
        }
        return result;
    }

    /// Lowest exponent with a nonzero coefficient; -1 for the zero polynomial.
    int order() const {
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (!c_[k].is_zero()) return static_cast<int>(k);
        return -1;
    }

    friend bool operator==(const DensePoly& a, const DensePoly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t k = 0; k < a.c_.size(); ++k)
            if (!(a.c_[k] - b.c_[k]).is_zero()) return false;
        return true;
    }
    friend bool operator!=(const DensePoly& a, const DensePoly& b) { return !(a == b); }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<T> c_;
};

/// Quotient and remainder over a field: a = q*b + r, deg r < deg b.
template <class T>
std::pair<DensePoly<T>, DensePoly<T>> divmod(const DensePoly<T>& a, const DensePoly<T>& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (a.degree() < b.degree()) return {DensePoly<T>{}, a};
    T inv_lc = b.lc().inverse();
    std::vector<T> r = a.coeffs();
    std::vector<T> q(static_cast<std::size_t>(a.degree() - b.degree()) + 1);
    const auto& bc = b.coeffs();
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
        T f = r[static_cast<std::size_t>(k + b.degree())] * inv_lc;
        if (f.is_zero()) continue;
        for (int j = 0; j <= b.degree(); ++j) r[static_cast<std::size_t>(k + j)] -= f * bc[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(k + b.degree())] = T{};
        q[static_cast<std::size_t>(k)] = std::move(f);
    }
    r.resize(static_cast<std::size_t>(b.degree()));
    return {DensePoly<T>(std::move(q)), DensePoly<T>(std::move(r))};
}

template <class T>
DensePoly<T> make_monic(const DensePoly<T>& a) {
    if (a.is_zero()) return a;
    return a.scaled(a.lc().inverse());
}

/// Monic gcd over a field.
template <class T>
DensePoly<T> poly_gcd(DensePoly<T> a, DensePoly<T> b) {
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = make_monic(r);
    }
    return make_monic(a);
}

/// Extended gcd over a field: returns (g, s, t) with s*a + t*b = g, g monic.
template <class T>
struct ExtendedGcd {
    DensePoly<T> g, s, t;
};

template <class T>
ExtendedGcd<T> poly_xgcd(const DensePoly<T>& a, const DensePoly<T>& b) {
    DensePoly<T> r0 = a, r1 = b;
    DensePoly<T> s0(T(1)), s1;
    DensePoly<T> t0, t1(T(1));
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        DensePoly<T> s2 = s0 - q * s1;
        DensePoly<T> t2 = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    T inv = r0.lc().inverse();
    return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

/// Exact quotient over a field; throws if b does not divide a.
template <class T>
DensePoly<T> divide_exact(const DensePoly<T>& a, const DensePoly<T>& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw std::logic_error("inexact polynomial division");
    return q;
}

/// Yun's squarefree decomposition over a field of characteristic zero.
/// Returns (multiplicity, monic squarefree factor) pairs with nonconstant factors only.
template <class T>
std::vector<std::pair<int, DensePoly<T>>> squarefree_decomposition(const DensePoly<T>& f) {
    std::vector<std::pair<int, DensePoly<T>>> out;
    if (f.degree() < 1) return out;
    DensePoly<T> a = make_monic(f);
    DensePoly<T> da = a.derivative();
    DensePoly<T> b = poly_gcd(a, da);
    DensePoly<T> c = divide_exact(a, b);
    DensePoly<T> d = divide_exact(da, b) - c.derivative();
    int i = 1;
    while (c.degree() > 0) {
        DensePoly<T> g = poly_gcd(c, d);
        if (g.degree() > 0) out.emplace_back(i, g);
        c = divide_exact(c, g);
        d = divide_exact(d, g) - c.derivative();
        ++i;
    }
    return out;
}

}  // namespace isochk
