#include "isochk/bipoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace isochk {

BiPoly::BiPoly(GaussianRational c) {
    if (!c.is_zero()) terms_.emplace(Exponent{0, 0}, std::move(c));
}

BiPoly BiPoly::x() { return monomial(GaussianRational(1), 1, 0); }
BiPoly BiPoly::y() { return monomial(GaussianRational(1), 0, 1); }

BiPoly BiPoly::monomial(GaussianRational c, int dx, int dy) {
    if (dx < 0 || dy < 0) throw std::invalid_argument("negative exponent");
    BiPoly p;
    if (!c.is_zero()) p.terms_.emplace(Exponent{dx, dy}, std::move(c));
    return p;
}

int BiPoly::total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
    return d;
}

int BiPoly::degree_in(Var v) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, v == Var::X ? e.first : e.second);
    return d;
}

GaussianRational BiPoly::coeff(int dx, int dy) const {
    auto it = terms_.find({dx, dy});
    return it == terms_.end() ? GaussianRational() : it->second;
}

void BiPoly::add_term(int dx, int dy, const GaussianRational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(Exponent{dx, dy}, c);
    if (inserted) return;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

BiPoly& BiPoly::operator+=(const BiPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, c);
    return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, -c);
    return *this;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly r;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) r.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
    return r;
}

BiPoly BiPoly::operator-() const {
    BiPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

BiPoly BiPoly::scaled(const GaussianRational& s) const {
    if (s.is_zero()) return {};
    BiPoly r = *this;
    for (auto& [e, c] : r.terms_) c *= s;
    return r;
}

BiPoly BiPoly::pow(unsigned e) const {
    BiPoly result(GaussianRational(1));
    BiPoly base = *this;
    while (e) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e) base *= base;
    }
    return result;
}

Complex BiPoly::eval(Complex x, Complex y) const {
    Complex s = 0;
    for (const auto& [e, c] : terms_) s += c.to_complex() * std::pow(x, e.first) * std::pow(y, e.second);
    return s;
}

GaussianRational BiPoly::eval(const GaussianRational& x, const GaussianRational& y) const {
    GaussianRational s;
    for (const auto& [e, c] : terms_)
        s += c * x.pow(static_cast<unsigned>(e.first)) * y.pow(static_cast<unsigned>(e.second));
    return s;
}

bool BiPoly::has_real_coefficients() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.is_real(); });
}

BiPoly partial_derivative(const BiPoly& p, Var v) {
    BiPoly r;
    for (const auto& [e, c] : p.terms()) {
        int k = v == Var::X ? e.first : e.second;
        if (k == 0) continue;
        if (v == Var::X)
            r.add_term(e.first - 1, e.second, c * GaussianRational(static_cast<long>(k)));
        else
            r.add_term(e.first, e.second - 1, c * GaussianRational(static_cast<long>(k)));
    }
    return r;
}

BiPoly homogeneous_part(const BiPoly& p, int k) {
    BiPoly r;
    for (const auto& [e, c] : p.terms())
        if (e.first + e.second == k) r.add_term(e.first, e.second, c);
    return r;
}

bool is_homogeneous(const BiPoly& p) {
    if (p.is_zero()) return true;
    const int d = p.total_degree();
    return std::all_of(p.terms().begin(), p.terms().end(),
                       [d](const auto& t) { return t.first.first + t.first.second == d; });
}

BiPoly compose_linear(const BiPoly& p, const Matrix2& m) {
    const BiPoly u = BiPoly::x().scaled(m[0][0]) + BiPoly::y().scaled(m[0][1]);
    const BiPoly v = BiPoly::x().scaled(m[1][0]) + BiPoly::y().scaled(m[1][1]);
    const int dx = std::max(0, p.degree_in(Var::X));
    const int dy = std::max(0, p.degree_in(Var::Y));
    std::vector<BiPoly> upow{BiPoly(1)}, vpow{BiPoly(1)};
    for (int k = 1; k <= dx; ++k) upow.push_back(upow.back() * u);
    for (int k = 1; k <= dy; ++k) vpow.push_back(vpow.back() * v);
    BiPoly r;
    for (const auto& [e, c] : p.terms()) r += (upow[static_cast<std::size_t>(e.first)] * vpow[static_cast<std::size_t>(e.second)]).scaled(c);
    return r;
}

DensePoly<UniPoly> as_poly_in(const BiPoly& p, Var main) {
    const int deg = p.degree_in(main);
    if (deg < 0) return {};
    std::vector<UniPoly> coeffs(static_cast<std::size_t>(deg) + 1);
    for (const auto& [e, c] : p.terms()) {
        const int k = main == Var::X ? e.first : e.second;
        const int other = main == Var::X ? e.second : e.first;
        auto& slot = coeffs[static_cast<std::size_t>(k)];
        slot.set_coeff(other, slot.coeff(other) + c);
    }
    return DensePoly<UniPoly>(std::move(coeffs));
}

namespace {

// Exact quotient of every coefficient by d.
DensePoly<UniPoly> divide_coeffs(const DensePoly<UniPoly>& a, const UniPoly& d) {
    if (d.degree() == 0 && d.lc().is_one()) return a;
    std::vector<UniPoly> out;
    out.reserve(a.coeffs().size());
    for (const auto& c : a.coeffs()) out.push_back(divide_exact(c, d));
    return DensePoly<UniPoly>(std::move(out));
}

// lc(b)^(deg a - deg b + 1) * a mod b, computed without division.
DensePoly<UniPoly> pseudo_remainder(DensePoly<UniPoly> a, const DensePoly<UniPoly>& b) {
    const UniPoly& lb = b.lc();
    int e = a.degree() - b.degree() + 1;
    while (!a.is_zero() && a.degree() >= b.degree()) {
        DensePoly<UniPoly> s = DensePoly<UniPoly>::monomial(a.lc(), a.degree() - b.degree());
        a = a.scaled(lb) - s * b;
        --e;
    }
    return e > 0 ? a.scaled(lb.pow(static_cast<unsigned>(e))) : a;
}

}  // namespace

UniPoly resultant_univariate_coeffs(const DensePoly<UniPoly>& a_in, const DensePoly<UniPoly>& b_in) {
    if (a_in.is_zero() || b_in.is_zero()) return {};
    DensePoly<UniPoly> a = a_in, b = b_in;
    int sign = 1;
    if (b.degree() > a.degree()) {
        std::swap(a, b);
        if ((a.degree() & 1) && (b.degree() & 1)) sign = -1;
    }
    if (b.degree() == 0) {
        UniPoly r = b.lc().pow(static_cast<unsigned>(a.degree()));
        return sign < 0 ? -r : r;
    }
    UniPoly g(GaussianRational(1)), h(GaussianRational(1));
    while (true) {
        const int delta = a.degree() - b.degree();
        if ((a.degree() & 1) && (b.degree() & 1)) sign = -sign;
        DensePoly<UniPoly> r = pseudo_remainder(a, b);
        a = std::move(b);
        b = divide_coeffs(r, g * h.pow(static_cast<unsigned>(delta)));
        g = a.lc();
        if (delta > 0) h = divide_exact(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
        if (b.is_zero()) return {};
        if (b.degree() == 0) break;
    }
    const int da = a.degree();
    UniPoly res = divide_exact(b.lc().pow(static_cast<unsigned>(da)), h.pow(static_cast<unsigned>(da - 1)));
    return sign < 0 ? -res : res;
}

UniPoly resultant(const BiPoly& p, const BiPoly& q, Var eliminate) {
    if (p.degree_in(eliminate) <= 0 && q.degree_in(eliminate) <= 0)
        throw std::invalid_argument("no variable to eliminate");
    return resultant_univariate_coeffs(as_poly_in(p, eliminate), as_poly_in(q, eliminate));
}

HomogeneousFactorization factor_homogeneous(const BiPoly& p) {
    if (p.is_zero()) throw std::invalid_argument("factor_homogeneous: zero polynomial");
    if (!is_homogeneous(p)) throw std::invalid_argument("factor_homogeneous: polynomial is not homogeneous");
    HomogeneousFactorization out;
    out.degree = p.total_degree();
    UniPoly u;
    for (const auto& [e, c] : p.terms()) u.set_coeff(e.second, u.coeff(e.second) + c);
    const int e = u.degree();
    out.scalar = (e % 2 == 0) ? u.lc() : -u.lc();
    if (out.degree > e) out.exact.push_back({GaussianRational(0), GaussianRational(1), out.degree - e});
    std::vector<ExactDirection> finite;
    for (const auto& [mult, factor] : squarefree_decomposition(u)) {
        UniPoly rest = factor;
        for (const auto& r : exact_roots_squarefree(factor)) {
            finite.push_back({GaussianRational(1), r, mult});
            rest = divide_exact(rest, UniPoly(std::vector<GaussianRational>{-r, GaussianRational(1)}));
        }
        if (rest.degree() >= 1) {
            AlgebraicDirectionGroup g;
            g.minimal = make_monic(rest);
            g.multiplicity = mult;
            for (const auto& r : numeric_roots(to_complex_coeffs(g.minimal)))
                g.roots.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
            std::sort(g.roots.begin(), g.roots.end(), [](Complex a, Complex b) {
                return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
            });
            out.algebraic.push_back(std::move(g));
        }
    }
    std::sort(finite.begin(), finite.end(),
              [](const ExactDirection& a, const ExactDirection& b) { return gaussian_less(a.alpha, b.alpha); });
    out.exact.insert(out.exact.end(), finite.begin(), finite.end());
    return out;
}

Complex eval_factorization(const HomogeneousFactorization& f, Complex x, Complex y) {
    Complex r = f.scalar.to_complex();
    for (const auto& d : f.exact) r *= std::pow(d.alpha.to_complex() * x - d.beta.to_complex() * y, d.multiplicity);
    for (const auto& g : f.algebraic)
        for (const auto& t : g.roots) r *= std::pow(t * x - y, g.multiplicity);
    return r;
}

}  // namespace isochk
