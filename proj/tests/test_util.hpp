#pragma once

#include <random>

#include "isochk/bipoly.hpp"

namespace testutil {

inline isochk::GaussianRational random_gaussian(std::mt19937_64& rng, int range = 5, bool allow_imag = true) {
    std::uniform_int_distribution<long> num(-range, range);
    std::uniform_int_distribution<long> den(1, 4);
    isochk::Rational re(num(rng), den(rng));
    re.canonicalize();
    isochk::Rational im(allow_imag ? num(rng) : 0, den(rng));
    im.canonicalize();
    return {re, im};
}

inline isochk::BiPoly random_bipoly(std::mt19937_64& rng, int max_degree, int n_terms, bool allow_imag = true) {
    std::uniform_int_distribution<int> deg(0, max_degree);
    isochk::BiPoly p;
    for (int t = 0; t < n_terms; ++t) {
        int dx = deg(rng);
        int dy = deg(rng);
        if (dx + dy > max_degree) dy = max_degree - dx;
        p.add_term(dx, dy, random_gaussian(rng, 5, allow_imag));
    }
    return p;
}

}  // namespace testutil

namespace testutil {

// (x^2+y^2)/2 plus random higher terms of total degree 3..max_degree. Some draws force a repeated
// linear factor in the top part so that high-multiplicity points at infinity are exercised.
inline isochk::BiPoly random_morse_hamiltonian(std::mt19937_64& rng, int max_degree = 5, bool allow_imag = true) {
    using isochk::BiPoly;
    using isochk::GaussianRational;
    std::uniform_int_distribution<int> top(3, max_degree);
    std::uniform_int_distribution<int> coin(0, 3);
    const int d = top(rng);
    BiPoly H = BiPoly::monomial(GaussianRational::from_fraction(1, 2), 2, 0) +
               BiPoly::monomial(GaussianRational::from_fraction(1, 2), 0, 2);
    for (int k = 3; k < d; ++k)
        for (int j = 0; j <= k; ++j)
            if (coin(rng) == 0) H.add_term(j, k - j, random_gaussian(rng, 3, allow_imag));
    const int style = coin(rng);
    if (style == 0) {
        // shear composition (x, y + p(x)) or (x + q(y), y): an exact isochrone
        BiPoly f = BiPoly::x(), g = BiPoly::y();
        GaussianRational c = random_gaussian(rng, 2, allow_imag);
        if (c.is_zero()) c = GaussianRational(1);
        if (coin(rng) % 2)
            g += BiPoly::monomial(c, 2, 0);
        else
            f += BiPoly::monomial(c, 0, 2);
        return (f * f + g * g).scaled(GaussianRational::from_fraction(1, 2));
    }
    BiPoly top_part;
    if (style == 1) {
        GaussianRational a = random_gaussian(rng, 2, allow_imag), b = random_gaussian(rng, 2, allow_imag);
        if (a.is_zero() && b.is_zero()) a = GaussianRational(1);
        const BiPoly lin = BiPoly::x().scaled(a) + BiPoly::y().scaled(b);
        std::uniform_int_distribution<int> m(2, d);
        const int mult = m(rng);
        BiPoly rest;
        for (int j = 0; j <= d - mult; ++j) rest.add_term(j, d - mult - j, random_gaussian(rng, 3, allow_imag));
        if (rest.is_zero()) rest = BiPoly(GaussianRational(1));
        top_part = lin.pow(static_cast<unsigned>(mult)) * rest;
    } else {
        for (int j = 0; j <= d; ++j) top_part.add_term(j, d - j, random_gaussian(rng, 3, allow_imag));
    }
    if (top_part.is_zero()) top_part = BiPoly::monomial(GaussianRational(1), d, 0);
    return H + top_part;
}

}  // namespace testutil

namespace testutil {

// random determinant-one rational matrix: a product of an upper and a lower shear and a diagonal
inline isochk::Matrix2 random_unimodular(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-3, 3), den(1, 3);
    auto q = [&] { return isochk::GaussianRational::from_fraction(num(rng), den(rng)); };
    const isochk::GaussianRational s = q(), t = q();
    isochk::GaussianRational d = q();
    if (d.is_zero()) d = isochk::GaussianRational(2);
    const isochk::GaussianRational di = d.inverse();
    // [[d, 0], [0, 1/d]] * [[1, s], [0, 1]] * [[1, 0], [t, 1]]
    isochk::Matrix2 m;
    m[0][0] = d * (isochk::GaussianRational(1) + s * t);
    m[0][1] = d * s;
    m[1][0] = di * t;
    m[1][1] = di;
    return m;
}

}  // namespace testutil
