#include "isochk/unipoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "isochk/format.hpp"

namespace isochk {

namespace {

constexpr int kMaxAberthRounds = 800;

ComplexLD eval_with_derivative(const std::vector<ComplexLD>& c, ComplexLD z, ComplexLD& dp) {
    ComplexLD p = 0;
    dp = 0;
    for (std::size_t k = c.size(); k-- > 0;) {
        dp = dp * z + p;
        p = p * z + c[k];
    }
    return p;
}

// Upper bound on root moduli (Fujiwara).
long double root_bound(const std::vector<ComplexLD>& c) {
    const std::size_t n = c.size() - 1;
    const long double an = std::abs(c[n]);
    long double b = 0;
    for (std::size_t k = 0; k < n; ++k) {
        long double r = std::abs(c[k]) / an;
        if (r == 0) continue;
        long double e = 1.0L / static_cast<long double>(n - k);
        if (k == 0) r /= 2;
        b = std::max(b, std::pow(r, e));
    }
    return 2 * b;
}

}  // namespace

ComplexLD eval_complex(const std::vector<ComplexLD>& c, ComplexLD z) {
    ComplexLD p = 0;
    for (std::size_t k = c.size(); k-- > 0;) p = p * z + c[k];
    return p;
}

std::vector<ComplexLD> numeric_roots(const std::vector<ComplexLD>& coeffs_in) {
    std::vector<ComplexLD> c = coeffs_in;
    while (!c.empty() && c.back() == ComplexLD(0)) c.pop_back();
    if (c.empty()) throw std::invalid_argument("numeric_roots: zero polynomial");
    // peel exact zero roots
    std::size_t zeros = 0;
    while (zeros < c.size() && c[zeros] == ComplexLD(0)) ++zeros;
    c.erase(c.begin(), c.begin() + static_cast<long>(zeros));
    std::vector<ComplexLD> roots(zeros, ComplexLD(0));
    const std::size_t n = c.size() - 1;
    if (n == 0) return roots;
    if (n == 1) {
        roots.push_back(-c[0] / c[1]);
        return roots;
    }

    long double radius = root_bound(c);
    if (!(radius > 0) || !std::isfinite(radius)) radius = 1;
    std::vector<ComplexLD> z(n);
    const long double two_pi = 6.283185307179586476925286766559L;
    for (std::size_t k = 0; k < n; ++k) {
        long double ang = two_pi * static_cast<long double>(k) / static_cast<long double>(n) + 0.4L;
        z[k] = std::polar(radius * (0.5L + 0.5L * static_cast<long double>(k + 1) / static_cast<long double>(n)), ang);
    }

    const long double eps = 8 * std::numeric_limits<long double>::epsilon();
    std::vector<bool> done(n, false);
    int rounds = 0;
    for (; rounds < kMaxAberthRounds; ++rounds) {
        bool all = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            ComplexLD dp;
            ComplexLD p = eval_with_derivative(c, z[i], dp);
            if (p == ComplexLD(0)) {
                done[i] = true;
                continue;
            }
            ComplexLD ratio = p / dp;
            ComplexLD sum = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) sum += 1.0L / (z[i] - z[j]);
            ComplexLD w = ratio / (1.0L - ratio * sum);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = ratio;
            z[i] -= w;
            if (std::abs(w) <= eps * (1 + std::abs(z[i])))
                done[i] = true;
            else
                all = false;
        }
        if (all) break;
    }

    // Newton polish on the original polynomial
    for (auto& r : z) {
        for (int it = 0; it < 3; ++it) {
            ComplexLD dp;
            ComplexLD p = eval_with_derivative(c, r, dp);
            if (dp == ComplexLD(0)) break;
            ComplexLD step = p / dp;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            r -= step;
        }
    }

    if (rounds == kMaxAberthRounds) {
        long double worst = 0;
        long double scale = 0;
        for (const auto& a : c) scale += std::abs(a);
        for (const auto& r : z)
            worst = std::max(worst, std::abs(eval_complex(c, r)) /
                                        (scale * std::pow(std::max(1.0L, std::abs(r)), static_cast<long double>(n))));
        if (worst > 1e-12L) {
            std::ostringstream msg;
            msg << "root finder did not converge after " << kMaxAberthRounds
                << " rounds (max relative residual " << static_cast<double>(worst) << ")";
            throw std::runtime_error(msg.str());
        }
    }
    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

std::vector<ComplexLD> to_complex_coeffs(const UniPoly& u) {
    std::vector<ComplexLD> c;
    c.reserve(u.coeffs().size());
    for (const auto& a : u.coeffs()) c.push_back(a.to_complex_ld());
    return c;
}

double norm1(const UniPoly& u) {
    double s = 0;
    for (const auto& a : u.coeffs()) s += std::abs(a.to_complex());
    return s;
}

Complex eval_complex(const UniPoly& u, Complex z) {
    Complex p = 0;
    for (std::size_t k = u.coeffs().size(); k-- > 0;) p = p * z + u.coeffs()[k].to_complex();
    return p;
}

std::vector<RootCluster> roots_clustered(const UniPoly& u, double tol) {
    if (u.is_zero()) throw std::invalid_argument("roots_clustered: zero polynomial");
    std::vector<RootCluster> out;
    for (const auto& [mult, factor] : squarefree_decomposition(u)) {
        for (const auto& r : numeric_roots(to_complex_coeffs(factor)))
            out.push_back({Complex(static_cast<double>(r.real()), static_cast<double>(r.imag())), mult, tol});
    }
    std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return out;
}

UniPoly clear_denominators(const UniPoly& u) {
    mpz_class l = 1;
    for (const auto& a : u.coeffs()) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a.re().get_den_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a.im().get_den_mpz_t());
    }
    return u.scaled(GaussianRational(Rational(l)));
}

std::vector<GaussianRational> exact_roots_squarefree(const UniPoly& u) {
    std::vector<GaussianRational> out;
    if (u.degree() < 1) return out;
    UniPoly w = clear_denominators(u);
    // a rational root r makes lc*r a Gaussian integer
    const GaussianRational lc = w.lc();
    const ComplexLD lc_num = lc.to_complex_ld();
    for (const auto& r : numeric_roots(to_complex_coeffs(w))) {
        ComplexLD z = lc_num * r;
        if (std::abs(z.real()) > 1e17L || std::abs(z.imag()) > 1e17L) continue;
        mpz_class zr(static_cast<long>(std::llround(z.real())));
        mpz_class zi(static_cast<long>(std::llround(z.imag())));
        GaussianRational cand = GaussianRational(Rational(zr), Rational(zi)) / lc;
        if (!w.eval(cand).is_zero()) continue;
        bool dup = false;
        for (const auto& e : out) dup = dup || e == cand;
        if (!dup) out.push_back(cand);
    }
    std::sort(out.begin(), out.end(), gaussian_less);
    return out;
}

std::vector<std::pair<GaussianRational, int>> exact_roots(const UniPoly& u) {
    std::vector<std::pair<GaussianRational, int>> out;
    for (const auto& [mult, factor] : squarefree_decomposition(u))
        for (const auto& r : exact_roots_squarefree(factor)) out.emplace_back(r, mult);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return gaussian_less(a.first, b.first); });
    return out;
}

std::string format_unipoly(const UniPoly& u, const std::string& var) {
    std::vector<FormatTerm> terms;
    for (int k = 0; k <= u.degree(); ++k) {
        if (u.coeff(k).is_zero()) continue;
        std::string mono;
        if (k == 1) mono = var;
        else if (k > 1) mono = var + "^" + std::to_string(k);
        terms.push_back({u.coeff(k), mono});
    }
    return format_sum(terms);
}

}  // namespace isochk
