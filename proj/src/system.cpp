#include "isochk/system.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "isochk/flow.hpp"

namespace isochk {

namespace {

// sum |c| |x|^i |y|^j, the natural size of p(x, y) for rounding purposes
double abs_size(const BiPoly& p, double ax, double ay) {
    double s = 0;
    for (const auto& [e, c] : p.terms()) s += std::abs(c.to_complex()) * std::pow(ax, e.first) * std::pow(ay, e.second);
    return s;
}

UniPoly univariate(const BiPoly& p, Var v) {
    UniPoly u;
    for (const auto& [e, c] : p.terms()) {
        const int k = v == Var::X ? e.first : e.second;
        u.set_coeff(k, u.coeff(k) + c);
    }
    return u;
}

struct Evaluator {
    CompiledPoly p, q, px, py, qx, qy;
    Evaluator(const BiPoly& P, const BiPoly& Q)
        : p(P), q(Q), px(partial_derivative(P, Var::X)), py(partial_derivative(P, Var::Y)),
          qx(partial_derivative(Q, Var::X)), qy(partial_derivative(Q, Var::Y)) {}

    void polish(Complex& x, Complex& y) const {
        for (int it = 0; it < 30; ++it) {
            const Complex f = p(x, y), g = q(x, y);
            const Complex a = px(x, y), b = py(x, y), c = qx(x, y), d = qy(x, y);
            const Complex det = a * d - b * c;
            if (std::abs(det) < 1e-300) return;
            const Complex dx = (d * f - b * g) / det, dy = (a * g - c * f) / det;
            x -= dx;
            y -= dy;
            if (std::abs(dx) + std::abs(dy) < 1e-16 * (1 + std::abs(x) + std::abs(y))) return;
        }
    }
};

int cluster_multiplicity(const std::vector<RootCluster>& cs, Complex v) {
    int best = 1;
    double dist = 1e300;
    for (const auto& c : cs)
        if (std::abs(c.value - v) < dist) {
            dist = std::abs(c.value - v);
            best = c.multiplicity;
        }
    return best;
}

}  // namespace

SystemSolution solve_system(const BiPoly& p, const BiPoly& q, double cluster_tol) {
    SystemSolution out;
    if (p.is_zero() || q.is_zero()) throw std::runtime_error("common component");
    if (p.is_constant() || q.is_constant()) return out;

    // both free of one variable: the common zeros are lines unless the univariate gcd is trivial
    for (Var v : {Var::Y, Var::X}) {
        if (p.degree_in(v) <= 0 && q.degree_in(v) <= 0) {
            const Var other = v == Var::Y ? Var::X : Var::Y;
            if (poly_gcd(univariate(p, other), univariate(q, other)).degree() >= 1)
                throw std::runtime_error("common component");
            return out;
        }
    }
    const UniPoly rx = resultant(p, q, Var::Y);  // in x
    const UniPoly ry = resultant(p, q, Var::X);  // in y
    if (rx.is_zero() || ry.is_zero()) throw std::runtime_error("common component");
    if (rx.degree() == 0 || ry.degree() == 0) return out;

    const auto xs = roots_clustered(rx, cluster_tol);
    const auto ys = roots_clustered(ry, cluster_tol);
    const Evaluator ev(p, q);
    auto vanishes = [&](Complex x, Complex y) {
        const double ax = std::abs(x), ay = std::abs(y);
        return std::abs(ev.p(x, y)) <= 1e-9 * abs_size(p, ax, ay) + 1e-13 &&
               std::abs(ev.q(x, y)) <= 1e-9 * abs_size(q, ax, ay) + 1e-13;
    };
    auto distance = [](const SystemRoot& r, Complex x, Complex y) {
        return (std::abs(r.x - x) + std::abs(r.y - y)) / (1 + std::abs(x) + std::abs(y));
    };

    for (const auto& [ex, mx] : exact_roots(rx)) {
        (void)mx;
        for (const auto& [ey, my] : exact_roots(ry)) {
            (void)my;
            if (!p.eval(ex, ey).is_zero() || !q.eval(ex, ey).is_zero()) continue;
            SystemRoot r;
            r.exact_x = ex;
            r.exact_y = ey;
            r.x = ex.to_complex();
            r.y = ey.to_complex();
            out.roots.push_back(r);
        }
    }
    for (const auto& cx : xs)
        for (const auto& cy : ys) {
            Complex x = cx.value, y = cy.value;
            ev.polish(x, y);
            SystemRoot probe;
            probe.x = cx.value;
            probe.y = cy.value;
            if (distance(probe, x, y) > 1e-6 || !vanishes(x, y)) continue;
            if (std::any_of(out.roots.begin(), out.roots.end(), [&](const SystemRoot& r) { return distance(r, x, y) < 1e-9; }))
                continue;
            SystemRoot r;
            r.x = x;
            r.y = y;
            out.roots.push_back(r);
        }

    for (std::size_t i = 0; i < out.roots.size(); ++i)
        for (std::size_t j = i + 1; j < out.roots.size(); ++j)
            if (distance(out.roots[i], out.roots[j].x, out.roots[j].y) < 1e-6) out.ambiguous = true;

    // multiplicity: the resultant root multiplicity of a coordinate no other root shares
    for (auto& r : out.roots) {
        auto shares = [&](bool use_x) {
            return std::count_if(out.roots.begin(), out.roots.end(), [&](const SystemRoot& o) {
                return use_x ? std::abs(o.x - r.x) < 1e-6 * (1 + std::abs(r.x)) : std::abs(o.y - r.y) < 1e-6 * (1 + std::abs(r.y));
            });
        };
        if (shares(true) == 1)
            r.multiplicity = cluster_multiplicity(xs, r.x);
        else if (shares(false) == 1)
            r.multiplicity = cluster_multiplicity(ys, r.y);
    }
    std::sort(out.roots.begin(), out.roots.end(), [](const SystemRoot& a, const SystemRoot& b) {
        const auto key = [](const SystemRoot& r) { return std::array<double, 4>{r.x.real(), r.x.imag(), r.y.real(), r.y.imag()}; };
        return key(a) < key(b);
    });
    return out;
}

}  // namespace isochk
