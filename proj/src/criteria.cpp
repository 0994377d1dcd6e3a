#include "isochk/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "isochk/system.hpp"

namespace isochk {

namespace {

GaussianRational Q(long n, long d = 1) { return GaussianRational::from_fraction(n, d); }

Matrix2 mat_mul(const Matrix2& a, const Matrix2& b) {
    Matrix2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

GaussianRational det(const Matrix2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

// sqrt in Q(i) with Re > 0, or Re = 0 and Im > 0
std::optional<GaussianRational> exact_sqrt(const GaussianRational& D) {
    const auto roots = exact_roots(UniPoly(std::vector<GaussianRational>{-D, GaussianRational(0), GaussianRational(1)}));
    for (const auto& [r, m] : roots) {
        (void)m;
        if (sgn(r.re()) > 0 || (sgn(r.re()) == 0 && sgn(r.im()) > 0)) return r;
    }
    return std::nullopt;
}

}  // namespace

MorseForm normalize(const BiPoly& H) {
    if (!H.coeff(0, 0).is_zero()) throw std::invalid_argument("not a center at the origin: H(0,0) != 0");
    if (!H.coeff(1, 0).is_zero() || !H.coeff(0, 1).is_zero())
        throw std::invalid_argument("not a critical point: nonzero linear part");
    const GaussianRational D = Q(4) * H.coeff(2, 0) * H.coeff(0, 2) - H.coeff(1, 1) * H.coeff(1, 1);
    if (D.is_zero()) throw std::invalid_argument("not a Morse point: degenerate Hessian");
    const auto d = exact_sqrt(D);
    if (!d) throw std::invalid_argument("not normalizable over Q(i): Hessian determinant " + D.to_string() + " is not a square");

    // a first determinant-1 map making the x^2 coefficient nonzero
    const Matrix2 id{{{Q(1), Q(0)}, {Q(0), Q(1)}}};
    const Matrix2 swap{{{Q(0), Q(-1)}, {Q(1), Q(0)}}};
    const Matrix2 shear{{{Q(1), Q(0)}, {Q(1), Q(1)}}};
    Matrix2 pre = id;
    for (const Matrix2& m : {id, swap, shear}) {
        if (!compose_linear(homogeneous_part(H, 2), m).coeff(2, 0).is_zero()) {
            pre = m;
            break;
        }
    }
    const BiPoly H2 = compose_linear(homogeneous_part(H, 2), pre);
    const GaussianRational a = H2.coeff(2, 0), b = H2.coeff(1, 1);
    const GaussianRational i = GaussianRational::i();
    // H2 = a (x - r1 y)(x - r2 y); u + i v = x - r1 y and u - i v = (2a/d)(x - r2 y)
    GaussianRational r1 = (-b + i * *d) / (Q(2) * a), r2 = (-b - i * *d) / (Q(2) * a);
    Matrix2 to_uv;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const GaussianRational k = Q(2) * a / *d;
        const GaussianRational px = Q(1), py = -r1, qx = k, qy = -k * r2;
        to_uv = {{{(px + qx) / Q(2), (py + qy) / Q(2)}, {(px - qx) / (Q(2) * i), (py - qy) / (Q(2) * i)}}};
        if (det(to_uv) == Q(1)) break;
        std::swap(r1, r2);
    }
    if (det(to_uv) != Q(1)) throw std::logic_error("normalize: orientation");
    const Matrix2 from_uv{{{to_uv[1][1], -to_uv[0][1]}, {-to_uv[1][0], to_uv[0][0]}}};

    MorseForm out;
    out.original = H;
    out.change = mat_mul(pre, from_uv);
    out.scale = *d;
    out.normalized = compose_linear(H, out.change).scaled(d->inverse());
    const BiPoly want = BiPoly::monomial(Q(1, 2), 2, 0) + BiPoly::monomial(Q(1, 2), 0, 2);
    if (homogeneous_part(out.normalized, 2) != want) throw std::logic_error("normalize: quadratic part not reached");
    return out;
}

std::string Theorem2Result::comparison() const {
    const int lhs = 2 * max_multiplicity;
    const std::string bound = degree % 2 == 0 ? std::to_string(degree / 2) : std::to_string(degree) + "/2";
    return std::to_string(max_multiplicity) + (lhs >= degree ? " >= " : " < ") + bound;
}

Theorem2Result theorem2_check(const BiPoly& H) {
    Theorem2Result r;
    r.degree = H.total_degree();
    if (r.degree < 2) throw std::invalid_argument("theorem2_check needs degree >= 2");
    for (const auto& p : infinity_points(H)) r.max_multiplicity = std::max(r.max_multiplicity, p.multiplicity);
    r.passes = 2 * r.max_multiplicity >= r.degree;
    return r;
}

const char* to_string(LinearityStatus s) {
    switch (s) {
        case LinearityStatus::Satisfied: return "satisfied";
        case LinearityStatus::Violated: return "violated";
        case LinearityStatus::Partial: return "partial";
    }
    return "partial";
}

std::vector<int> accessible_points(const std::vector<EscapeResult>& escapes) {
    std::set<int> s;
    for (const auto& e : escapes)
        if (e.outcome != EscapeOutcome::MaxTimeReached && e.matched_point >= 0) s.insert(e.matched_point);
    return {s.begin(), s.end()};
}

LinearityResult linearity_check(const std::vector<InfinityPoint>& points, const std::vector<EscapeResult>& escapes) {
    const std::vector<int> acc = accessible_points(escapes);
    LinearityResult r;
    std::vector<LinearityWitness> inaccessible;
    for (const auto& P : points) {
        if (!P.analyzed || !P.error.empty()) {
            r.unanalyzed_points.push_back(P.index);
            continue;
        }
        const bool accessible = std::find(acc.begin(), acc.end(), P.index) != acc.end();
        for (std::size_t bi = 0; bi < P.branches.size(); ++bi) {
            const PuiseuxBranch& b = P.branches[bi];
            auto& sink = accessible ? r.violations : inaccessible;
            for (std::size_t c = 0; c < b.coeff_h_degree.size(); ++c)
                if (b.coeff_h_degree[c] >= 2) {
                    sink.push_back({P.index, static_cast<int>(bi), static_cast<int>(c), accessible});
                    break;
                }
            if (b.dynamics && !b.dynamics->h_independent)
                sink.push_back({P.index, static_cast<int>(bi), -1, accessible});
        }
    }
    if (!r.violations.empty())
        r.status = LinearityStatus::Violated;
    else if (!r.unanalyzed_points.empty())
        r.status = LinearityStatus::Partial;
    r.violations.insert(r.violations.end(), inaccessible.begin(), inaccessible.end());
    return r;
}

const char* to_string(KCheckStatus s) {
    switch (s) {
        case KCheckStatus::ViolationWitness: return "violation_witness";
        case KCheckStatus::Consistent: return "consistent";
        case KCheckStatus::Skipped: return "skipped";
    }
    return "skipped";
}

KCheckResult k_one_check(const std::vector<InfinityPoint>& points, const std::vector<EscapeResult>& escapes) {
    KCheckResult r;
    if (escapes.empty()) return r;
    std::set<int> reached;
    for (const auto& e : escapes)
        if (e.outcome == EscapeOutcome::Escaped && e.matched_point >= 0) reached.insert(e.matched_point);
    for (int idx : reached) {
        const auto it = std::find_if(points.begin(), points.end(), [&](const InfinityPoint& p) { return p.index == idx; });
        if (it == points.end() || !it->analyzed || !it->error.empty()) continue;
        bool all_known = true, has_k1 = false;
        for (const auto& b : it->branches) {
            if (!b.dynamics) {
                all_known = false;
                continue;
            }
            if (b.dynamics->k == 1) has_k1 = true;
        }
        if (!all_known && !has_k1) continue;
        r.checked_points.push_back(idx);
        if (!has_k1) r.witnesses.push_back(idx);
    }
    r.status = r.witnesses.empty() ? KCheckStatus::Consistent : KCheckStatus::ViolationWitness;
    return r;
}

std::vector<SingularPoint> singular_points_on_critical_level(const BiPoly& H, double cluster_tol) {
    const BiPoly Hx = partial_derivative(H, Var::X), Hy = partial_derivative(H, Var::Y);
    SystemSolution sol;
    try {
        sol = solve_system(Hx, Hy, cluster_tol);
    } catch (const std::runtime_error&) {
        throw std::runtime_error("critical set not finite");
    }
    std::vector<SingularPoint> out;
    for (const auto& r : sol.roots) {
        SingularPoint p;
        p.x = r.x;
        p.y = r.y;
        p.exact_x = r.exact_x;
        p.exact_y = r.exact_y;
        if (r.exact_x) {
            p.exact_value = H.eval(*r.exact_x, *r.exact_y);
            p.value = p.exact_value->to_complex();
            p.on_L0 = p.exact_value->is_zero();
        } else {
            p.value = H.eval(r.x, r.y);
            p.on_L0 = std::abs(p.value) < 1e-8;
        }
        out.push_back(p);
    }
    return out;
}

const char* to_string(JvFlag f) { return f == JvFlag::Applies ? "applies" : "not_applicable"; }

JvFlag jv_flag(const BiPoly& H) {
    const int n = H.total_degree() - 1;
    return H.has_real_coefficients() && n >= 0 && n % 2 == 0 ? JvFlag::Applies : JvFlag::NotApplicable;
}

}  // namespace isochk
