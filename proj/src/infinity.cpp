#include "isochk/infinity.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace isochk {

const char* to_string(FlowClass c) {
    switch (c) {
        case FlowClass::Petals: return "petals";
        case FlowClass::Center: return "center";
        case FlowClass::Node: return "node";
        case FlowClass::Focus: return "focus";
        case FlowClass::Regular: return "regular";
        case FlowClass::Saddle: return "saddle";
    }
    return "regular";
}

FlowClass classify_flow(int k, Complex lambda, bool lambda_exact_real, bool lambda_exact_imag) {
    if (k > 1) return FlowClass::Petals;
    if (k == 0) return FlowClass::Regular;
    if (k < 0) return FlowClass::Saddle;
    const double scale = std::max(1e-300, std::abs(lambda));
    const bool imag = lambda_exact_imag || std::abs(lambda.real()) <= 1e-10 * scale;
    const bool real = lambda_exact_real || std::abs(lambda.imag()) <= 1e-10 * scale;
    if (imag) return FlowClass::Center;
    if (real) return FlowClass::Node;
    return FlowClass::Focus;
}

namespace {

using Series = std::vector<AlgNum>;
using Grid = std::vector<std::vector<AlgNum>>;  // g[l][k]: coefficient of X^k Y^l

constexpr int kMaxDepth = 32;

Series ser_mul(const Series& a, const Series& b, std::size_t n) {
    Series r(std::min(n, a.size() + b.size() > 0 ? a.size() + b.size() - 1 : 0));
    for (std::size_t i = 0; i < a.size() && i < r.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size() && i + j < r.size(); ++j)
            if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
    }
    return r;
}

Series ser_add(Series a, const Series& b) {
    if (b.size() > a.size()) a.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

Series ser_truncate(Series a, std::size_t n) {
    if (a.size() > n) a.resize(n);
    return a;
}

Series ser_inverse(const Series& a, std::size_t n) {
    Series b(n);
    if (n == 0) return b;
    const AlgNum inv0 = a.at(0).inverse();
    b[0] = inv0;
    for (std::size_t k = 1; k < n; ++k) {
        AlgNum acc;
        for (std::size_t j = 1; j <= k && j < a.size(); ++j)
            if (!a[j].is_zero() && !b[k - j].is_zero()) acc += a[j] * b[k - j];
        b[k] = -(acc * inv0);
    }
    return b;
}

AlgNum h_symbol() { return AlgNum(RatFunc::h()); }

void grid_add(Grid& g, std::size_t l, std::size_t k, const AlgNum& v) {
    if (v.is_zero()) return;
    if (g.size() <= l) g.resize(l + 1);
    if (g[l].size() <= k) g[l].resize(k + 1);
    g[l][k] += v;
}

AlgNum grid_get(const Grid& g, std::size_t l, std::size_t k) {
    if (l >= g.size() || k >= g[l].size()) return AlgNum();
    return g[l][k];
}

// Bivariate product on grids indexed [y-power][x-power].
Grid grid_mul(const Grid& a, const Grid& b) {
    Grid r;
    for (std::size_t la = 0; la < a.size(); ++la)
        for (std::size_t ka = 0; ka < a[la].size(); ++ka) {
            if (a[la][ka].is_zero()) continue;
            for (std::size_t lb = 0; lb < b.size(); ++lb)
                for (std::size_t kb = 0; kb < b[lb].size(); ++kb)
                    if (!b[lb][kb].is_zero()) grid_add(r, la + lb, ka + kb, a[la][ka] * b[lb][kb]);
        }
    return r;
}

Grid grid_from(const HLinearBiPoly& F) {
    Grid g;
    const AlgNum h = h_symbol();
    for (const auto& [e, c] : F.constant_part.terms())
        grid_add(g, static_cast<std::size_t>(e.second), static_cast<std::size_t>(e.first), AlgNum(c));
    for (const auto& [e, c] : F.h_part.terms())
        grid_add(g, static_cast<std::size_t>(e.second), static_cast<std::size_t>(e.first), AlgNum(c) * h);
    return g;
}

struct ChartMatrices {
    AlgNum S[2][2];  // (x, y) = S (x1, y1)
    AlgNum T[2][2];  // (x1, y1) = T (x, y)
};

// Complement choice: the H2-orthogonal axis for non-isotropic directions, the other isotropic
// line otherwise, and a coordinate axis when the quadratic part is degenerate.
ChartMatrices build_chart(const BiPoly& H, const AlgNum& beta, const AlgNum& alpha) {
    const AlgNum a(H.coeff(2, 0)), b(H.coeff(1, 1)), c(H.coeff(0, 2));
    const AlgNum half(GaussianRational(Rational(1, 2)));
    AlgNum wx, wy;
    bool have = false;
    const bool quad_zero = a.is_zero() && b.is_zero() && c.is_zero();
    if (!quad_zero) {
        const AlgNum qv = a * beta * beta + b * beta * alpha + c * alpha * alpha;
        if (!zero_or_unit(qv)) {
            wx = -(half * b * beta + c * alpha);
            wy = a * beta + half * b * alpha;
            have = true;
        } else {
            const AlgNum disc = b * b - AlgNum(4) * a * c;
            if (!disc.is_zero()) {
                AlgNum u, w;
                if (!beta.is_zero()) {
                    const AlgNum binv = beta.inverse();
                    w = -(c * binv);
                    u = (alpha * w - b) * binv;
                } else {
                    const AlgNum ainv = alpha.inverse();
                    u = a * ainv;
                    w = b * ainv;
                }
                wx = -w;
                wy = u;
                have = true;
            }
        }
    }
    if (!have) {
        if (!beta.is_zero()) {
            wx = AlgNum(0);
            wy = AlgNum(1);
        } else {
            wx = AlgNum(1);
            wy = AlgNum(0);
        }
    }
    const AlgNum D = alpha * wx - beta * wy;
    const AlgNum Dinv = D.inverse();
    ChartMatrices m;
    m.S[0][0] = -beta;
    m.S[0][1] = wx * Dinv;
    m.S[1][0] = -alpha;
    m.S[1][1] = wy * Dinv;
    m.T[0][0] = wy * Dinv;
    m.T[0][1] = -(wx * Dinv);
    m.T[1][0] = alpha;
    m.T[1][1] = -beta;
    return m;
}

struct ChartData {
    Grid F;   // chart polynomial
    Grid Hy;  // Hy[l][j]: coefficient of x1^j y1^l in dH~/dy1
    int n = 0;
};

ChartData build_chart_data(const BiPoly& H, const ChartMatrices& m) {
    const int d = H.total_degree();
    // linear forms u = S00 x1 + S01 y1, v = S10 x1 + S11 y1 as grids [y1][x1]
    Grid u{{AlgNum(), m.S[0][0]}, {m.S[0][1]}};
    Grid v{{AlgNum(), m.S[1][0]}, {m.S[1][1]}};
    std::vector<Grid> up{Grid{{AlgNum(1)}}}, vp{Grid{{AlgNum(1)}}};
    for (int k = 1; k <= d; ++k) {
        up.push_back(grid_mul(up.back(), u));
        vp.push_back(grid_mul(vp.back(), v));
    }
    Grid Ht;
    for (const auto& [e, c] : H.terms()) {
        Grid t = grid_mul(up[static_cast<std::size_t>(e.first)], vp[static_cast<std::size_t>(e.second)]);
        const AlgNum cc(c);
        for (std::size_t l = 0; l < t.size(); ++l)
            for (std::size_t j = 0; j < t[l].size(); ++j) grid_add(Ht, l, j, t[l][j] * cc);
    }
    ChartData cd;
    cd.n = d - 1;
    for (std::size_t l = 0; l < Ht.size(); ++l)
        for (std::size_t j = 0; j < Ht[l].size(); ++j) {
            if (Ht[l][j].is_zero()) continue;
            const int k = d - static_cast<int>(j) - static_cast<int>(l);
            grid_add(cd.F, l, static_cast<std::size_t>(k), Ht[l][j]);
            if (l > 0) grid_add(cd.Hy, l - 1, j, Ht[l][j] * AlgNum(static_cast<long>(l)));
        }
    grid_add(cd.F, 0, static_cast<std::size_t>(d), -h_symbol());
    return cd;
}

struct Bookkeeping {
    std::vector<std::pair<int, AlgNum>> known;  // Y(s) = sum c s^e + s^E Z(s)
    int E = 0;
    int P = 1;
    int depth = 0;
};

struct Record {
    PuiseuxBranch branch;
    AlgNum lambda;
};

// Picks a canonical p-th root in Q(i) when one exists.
std::optional<GaussianRational> rational_root(const GaussianRational& tau, int p) {
    std::vector<GaussianRational> coeffs(static_cast<std::size_t>(p) + 1);
    coeffs[0] = -tau;
    coeffs.back() = GaussianRational(1);
    auto roots = exact_roots_squarefree(UniPoly(coeffs));
    if (roots.empty()) return std::nullopt;
    // largest real part, then largest imaginary part
    return *std::max_element(roots.begin(), roots.end(), gaussian_less);
}

int h_degree(const AlgNum& c) {
    if (c.is_zero()) return -1;
    const AlgNum d1 = derivative_h(c);
    if (d1.is_zero()) return 0;
    if (derivative_h(d1).is_zero()) return 1;
    return 2;
}

std::string describe_level(const TowerLevel* l) {
    const char* kind = l->kind == LevelKind::Direction ? "direction" : (l->kind == LevelKind::Tau ? "edge root" : "radical");
    std::string t = "t" + std::to_string(l->index);
    std::string poly;
    const auto& c = l->modulus.coeffs();
    for (std::size_t j = c.size(); j-- > 0;) {
        if (c[j].is_zero()) continue;
        std::string coeff = c[j].to_string();
        std::string mono = j == 0 ? "" : (j == 1 ? t : t + "^" + std::to_string(j));
        std::string term;
        if (mono.empty())
            term = "(" + coeff + ")";
        else
            term = coeff == "1" ? mono : "(" + coeff + ")*" + mono;
        poly += (poly.empty() ? "" : " + ") + term;
    }
    return t + ": " + poly + " = 0 [" + kind + "]";
}

int class_weight(const TowerLevel* top) {
    int w = 1;
    for (const TowerLevel* l : level_chain(top))
        if (l->kind == LevelKind::Tau) w *= l->modulus.degree();
    return w;
}

class Engine {
public:
    Engine(const Grid& F0, const ChartData* chart, int order, int order_max)
        : F0_(F0), chart_(chart), M_(order), M_max_(order_max) {}

    std::vector<Record> run(const LevelPtr& top) {
        out_.clear();
        explore(F0_, Bookkeeping{}, top);
        return std::move(out_);
    }

    std::vector<Record>& out() { return out_; }
    void explore(const Grid& G, const Bookkeeping& bk, const LevelPtr& top);

private:
    std::vector<int> row_minima(const Grid& G) const;
    void process_edge(const Grid& G, const std::vector<int>& kmin, Exponent from, Exponent to, const Bookkeeping& bk,
                      const LevelPtr& top);
    void descend(const Grid& G, int p, int q, int N, const AlgNum& c0, int mult, const Bookkeeping& bk,
                 const LevelPtr& top);
    void with_tau(const LevelPtr& top, const AlgPoly& modulus, const std::function<void(const LevelPtr&, const AlgNum&)>& body);
    void with_root(const LevelPtr& top, const AlgPoly& modulus, int p,
                   const std::function<void(const LevelPtr&, const AlgNum&)>& body);
    void leaf(const Grid& G, const Bookkeeping& bk, const LevelPtr& top, bool exact_zero);
    Series solve_leaf(const Grid& G, std::size_t need) const;

    const Grid& F0_;
    const ChartData* chart_;
    int M_, M_max_;
    std::vector<Record> out_;
};

std::vector<int> Engine::row_minima(const Grid& G) const {
    std::vector<int> kmin(G.size(), INT_MAX);
    for (std::size_t l = 0; l < G.size(); ++l)
        for (std::size_t k = 0; k < G[l].size(); ++k)
            if (!zero_or_unit(G[l][k])) {
                kmin[l] = static_cast<int>(k);
                break;
            }
    return kmin;
}

void Engine::explore(const Grid& G, const Bookkeeping& bk, const LevelPtr& top) {
    if (bk.depth > kMaxDepth) throw std::runtime_error("Puiseux recursion depth exceeded 32");
    const std::vector<int> kmin = row_minima(G);
    int lmin = -1, kstart = INT_MAX, lstart = -1;
    for (std::size_t l = 0; l < kmin.size(); ++l) {
        if (kmin[l] == INT_MAX) continue;
        if (lmin < 0) lmin = static_cast<int>(l);
        if (kmin[l] < kstart) {
            kstart = kmin[l];
            lstart = static_cast<int>(l);
        }
    }
    if (lmin < 0) throw std::runtime_error("polynomial vanishes identically");
    if (bk.depth == 0 && kstart > 0) throw std::runtime_error("hypothesis violated: F(0,Y) vanishes identically");
    if (bk.depth == 0 && lstart == 0) return;  // (0,0) is not on the curve
    if (lmin > 0) leaf(G, bk, top, true);
    Exponent cur{kstart, lstart};
    while (cur.second > lmin) {
        int best = -1;
        for (int l = lmin; l < cur.second; ++l) {
            if (kmin[static_cast<std::size_t>(l)] == INT_MAX) continue;
            if (best < 0) {
                best = l;
                continue;
            }
            // slope (k - kc)/(lc - l); smaller wins, ties go to the farther point
            const long lhs = static_cast<long>(kmin[static_cast<std::size_t>(l)] - cur.first) * (cur.second - best);
            const long rhs = static_cast<long>(kmin[static_cast<std::size_t>(best)] - cur.first) * (cur.second - l);
            if (lhs < rhs || (lhs == rhs && l < best)) best = l;
        }
        Exponent next{kmin[static_cast<std::size_t>(best)], best};
        process_edge(G, kmin, cur, next, bk, top);
        cur = next;
    }
}

void Engine::process_edge(const Grid& G, const std::vector<int>& kmin, Exponent from, Exponent to, const Bookkeeping& bk,
                          const LevelPtr& top) {
    const int dl = from.second - to.second;
    const int dk = to.first - from.first;
    const int g = std::gcd(dl, dk);
    const int p = dl / g, q = dk / g;
    const int N = p * from.first + q * from.second;
    std::vector<AlgNum> phi(static_cast<std::size_t>(g) + 1);
    for (int j = 0; j <= g; ++j) {
        const int l = to.second + j * p;
        const int k = to.first - j * q;
        if (kmin[static_cast<std::size_t>(l)] == k) phi[static_cast<std::size_t>(j)] = grid_get(G, static_cast<std::size_t>(l), static_cast<std::size_t>(k));
    }
    const AlgPoly principal = make_monic(AlgPoly(phi));
    for (const auto& [mult, factor] : squarefree_decomposition(principal)) {
        auto on_tau = [&, mult = mult](const LevelPtr& t, const AlgNum& tau) {
            if (p == 1) {
                descend(G, p, q, N, tau, mult, bk, t);
                return;
            }
            if (tau.is_rational_constant()) {
                if (auto c = rational_root(tau.base().constant_value(), p)) {
                    descend(G, p, q, N, AlgNum(*c), mult, bk, t);
                    return;
                }
            }
            std::vector<AlgNum> m(static_cast<std::size_t>(p) + 1);
            m[0] = -tau;
            m.back() = AlgNum(1);
            with_root(t, AlgPoly(m), p, [&](const LevelPtr& r, const AlgNum& c0) { descend(G, p, q, N, c0, mult, bk, r); });
        };
        bool rational = std::all_of(factor.coeffs().begin(), factor.coeffs().end(),
                                    [](const AlgNum& c) { return c.is_rational_constant(); });
        if (rational) {
            std::vector<GaussianRational> uc;
            for (const auto& c : factor.coeffs()) uc.push_back(c.base().constant_value());
            UniPoly u(uc);
            UniPoly rest = u;
            for (const auto& r : exact_roots_squarefree(u)) {
                on_tau(top, AlgNum(r));
                rest = divide_exact(rest, UniPoly(std::vector<GaussianRational>{-r, GaussianRational(1)}));
            }
            if (rest.degree() >= 1) {
                std::vector<AlgNum> rc;
                const UniPoly monic = make_monic(rest);
                for (const auto& c : monic.coeffs()) rc.emplace_back(c);
                with_tau(top, AlgPoly(rc), on_tau);
            }
        } else if (factor.degree() == 1) {
            on_tau(top, -factor.coeff(0));
        } else {
            with_tau(top, factor, on_tau);
        }
    }
}

void Engine::with_tau(const LevelPtr& top, const AlgPoly& modulus,
                      const std::function<void(const LevelPtr&, const AlgNum&)>& body) {
    LevelPtr lvl = make_level(top, LevelKind::Tau, modulus);
    const std::size_t mark = out_.size();
    std::optional<AlgPoly> factor;
    try {
        body(lvl, AlgNum::generator(lvl.get()));
    } catch (const Split& s) {
        if (s.level != lvl.get()) throw;
        out_.resize(mark);
        factor = s.factor;
    }
    if (factor) {
        const AlgPoly other = divide_exact(modulus, *factor);
        with_tau(top, *factor, body);
        with_tau(top, other, body);
    }
}

void Engine::with_root(const LevelPtr& top, const AlgPoly& modulus, int p,
                       const std::function<void(const LevelPtr&, const AlgNum&)>& body) {
    LevelPtr lvl = make_level(top, LevelKind::Root, modulus, p);
    const std::size_t mark = out_.size();
    std::optional<AlgPoly> factor;
    try {
        body(lvl, AlgNum::generator(lvl.get()));
    } catch (const Split& s) {
        if (s.level != lvl.get()) throw;
        out_.resize(mark);
        factor = s.factor;
    }
    if (factor) {
        // every root of t^p = tau yields the same conjugacy class; one factor is enough
        const AlgPoly other = divide_exact(modulus, *factor);
        const AlgPoly& keep = factor->degree() <= other.degree() ? *factor : other;
        if (keep.degree() == 1) {
            body(top, -keep.coeff(0));
        } else {
            with_root(top, keep, p, body);
        }
    }
}

void Engine::descend(const Grid& G, int p, int q, int N, const AlgNum& c0, int mult, const Bookkeeping& bk,
                     const LevelPtr& top) {
    // G'(X', Y') = G(X'^p, X'^q (c0 + Y')) / X'^N
    std::size_t maxl = G.size();
    std::vector<AlgNum> cpow{AlgNum(1)};
    for (std::size_t l = 1; l < maxl; ++l) cpow.push_back(cpow.back() * c0);
    Grid out;
    for (std::size_t l = 0; l < G.size(); ++l) {
        std::vector<long> binom(l + 1, 1);
        for (std::size_t j = 1; j <= l; ++j) binom[j] = binom[j - 1] * static_cast<long>(l - j + 1) / static_cast<long>(j);
        for (std::size_t k = 0; k < G[l].size(); ++k) {
            if (G[l][k].is_zero()) continue;
            const int e = p * static_cast<int>(k) + q * static_cast<int>(l) - N;
            if (e < 0) throw std::logic_error("negative exponent after Newton substitution");
            for (std::size_t j = 0; j <= l; ++j)
                grid_add(out, j, static_cast<std::size_t>(e), G[l][k] * cpow[l - j] * AlgNum(binom[j]));
        }
    }
    Bookkeeping next;
    next.P = bk.P * p;
    next.E = bk.E * p + q;
    next.depth = bk.depth + 1;
    for (const auto& [e, c] : bk.known) next.known.emplace_back(e * p, c);
    next.known.emplace_back(next.E, c0);
    if (mult == 1)
        leaf(out, next, top, false);
    else
        explore(out, next, top);
}

Series Engine::solve_leaf(const Grid& G, std::size_t need) const {
    Series Z(need);
    if (need <= 1) return Z;
    std::size_t cur = 1;
    while (cur < need) {
        cur = std::min(2 * cur, need);
        Series val, der;
        for (std::size_t l = G.size(); l-- > 0;) {
            Series row = ser_truncate(Series(G[l].begin(), G[l].end()), cur);
            val = ser_add(ser_mul(val, Z, cur), row);
            if (l >= 1) {
                Series drow;
                for (const auto& c : row) drow.push_back(c * AlgNum(static_cast<long>(l)));
                der = ser_add(ser_mul(der, Z, cur), drow);
            }
        }
        Series delta = ser_mul(val, ser_inverse(der, cur), cur);
        for (std::size_t i = 0; i < delta.size() && i < Z.size(); ++i) Z[i] -= delta[i];
    }
    return Z;
}

void Engine::leaf(const Grid& G, const Bookkeeping& bk, const LevelPtr& top, bool exact_zero) {
    int Q = INT_MAX;
    for (const auto& [e, c] : bk.known) Q = std::min(Q, e);
    const bool y_zero = bk.known.empty();
    if (y_zero) Q = 1;
    int M = M_;
    const int P = bk.P;
    while (true) {
        const int len = Q + M + 1;
        Series Z;
        if (!exact_zero) {
            const int need = len - bk.E;
            Z = solve_leaf(G, need > 0 ? static_cast<std::size_t>(need) : 0);
        }
        Series Y(static_cast<std::size_t>(len));
        int ydeg = -1;
        for (const auto& [e, c] : bk.known)
            if (e < len) {
                Y[static_cast<std::size_t>(e)] += c;
                ydeg = std::max(ydeg, e);
            }
        for (std::size_t i = 0; i < Z.size(); ++i)
            if (bk.E + static_cast<int>(i) < len) Y[static_cast<std::size_t>(bk.E) + i] += Z[i];
        for (std::size_t i = Y.size(); i-- > 0;)
            if (!Y[i].is_zero()) {
                ydeg = static_cast<int>(i);
                break;
            }

        // F0(s^P, Y(s)) through s^(R-1); R < 0 means the full product (Y taken as a polynomial)
        auto residual_zero = [&](long R) {
            if (R < 0) {
                long bound = 0;
                for (std::size_t l = 0; l < F0_.size(); ++l)
                    for (std::size_t k = 0; k < F0_[l].size(); ++k)
                        if (!F0_[l][k].is_zero())
                            bound = std::max(bound, static_cast<long>(P) * static_cast<long>(k) + static_cast<long>(l) * std::max(ydeg, 0));
                R = bound + 1;
            }
            const std::size_t n = static_cast<std::size_t>(R);
            Series ypow{AlgNum(1)}, res(n);
            for (std::size_t l = 0; l < F0_.size(); ++l) {
                if (l > 0) ypow = ser_mul(ypow, Y, n);
                for (std::size_t k = 0; k < F0_[l].size(); ++k) {
                    if (F0_[l][k].is_zero()) continue;
                    const std::size_t shift = static_cast<std::size_t>(P) * k;
                    for (std::size_t i = 0; i < ypow.size() && shift + i < n; ++i)
                        if (!ypow[i].is_zero()) res[shift + i] += F0_[l][k] * ypow[i];
                }
            }
            return std::make_pair(static_cast<int>(R) - 1, std::all_of(res.begin(), res.end(), [](const AlgNum& c) { return c.is_zero(); }));
        };
        // a series whose tail vanishes may be an exact polynomial solution
        bool terminating = exact_zero;
        std::pair<int, bool> exact_check{-1, false};
        if (!terminating && ydeg <= Q + M / 2) {
            exact_check = residual_zero(-1);
            terminating = exact_check.second;
        }

        Record rec;
        PuiseuxBranch& b = rec.branch;
        b.p = P;
        b.q = Q;
        b.truncation = M;
        b.terminating = terminating;
        b.conjugacy_class_size = P;
        b.class_count = class_weight(top.get());
        b.tower_top = top;
        for (const TowerLevel* l : level_chain(top.get())) b.tower.push_back(describe_level(l));
        for (int i = 0; i <= M; ++i) {
            const AlgNum c = y_zero ? AlgNum() : Y[static_cast<std::size_t>(Q + i)];
            b.coeffs.push_back(c);
            b.coeff_text.push_back(c.to_string());
            b.coeff_h_degree.push_back(h_degree(c));
        }

        if (terminating) {
            std::tie(b.residual_checked_through, b.residual_zero) = exact_check.first >= 0 ? exact_check : residual_zero(-1);
        } else {
            long R = LONG_MAX;
            for (std::size_t l = 1; l < F0_.size(); ++l)
                for (std::size_t k = 0; k < F0_[l].size(); ++k)
                    if (!F0_[l][k].is_zero()) R = std::min(R, static_cast<long>(P) * static_cast<long>(k) + static_cast<long>(l) * Q + M + 1);
            std::tie(b.residual_checked_through, b.residual_zero) = residual_zero(R == LONG_MAX ? -1 : R);
        }

        if (chart_) {
            const int n = chart_->n;
            long precW = LONG_MAX;
            const auto& Hy = chart_->Hy;
            for (std::size_t k = 1; k < Hy.size(); ++k)
                for (std::size_t j = 0; j < Hy[k].size(); ++j)
                    if (!Hy[k][j].is_zero() && !terminating)
                        precW = std::min(precW, static_cast<long>(P) * (n - static_cast<long>(j) - static_cast<long>(k)) +
                                                    static_cast<long>(k) * Q + M + 1);
            if (precW == LONG_MAX) {
                long bound = 0;
                for (std::size_t k = 0; k < Hy.size(); ++k)
                    for (std::size_t j = 0; j < Hy[k].size(); ++j)
                        if (!Hy[k][j].is_zero())
                            bound = std::max(bound, static_cast<long>(P) * (n - static_cast<long>(j) - static_cast<long>(k)) +
                                                        static_cast<long>(k) * std::max(ydeg, 0));
                precW = bound + 1;
            }
            const std::size_t nW = static_cast<std::size_t>(precW);
            Series W(nW);
            Series ypow{AlgNum(1)};
            for (std::size_t k = 0; k < Hy.size(); ++k) {
                if (k > 0) ypow = ser_mul(ypow, Y, nW);
                for (std::size_t j = 0; j < Hy[k].size(); ++j) {
                    if (Hy[k][j].is_zero()) continue;
                    const long sh = static_cast<long>(P) * (n - static_cast<long>(j) - static_cast<long>(k));
                    for (std::size_t i = 0; i < ypow.size(); ++i) {
                        const long idx = sh + static_cast<long>(i);
                        if (idx >= precW) break;
                        if (!ypow[i].is_zero()) W[static_cast<std::size_t>(idx)] += Hy[k][j] * ypow[i];
                    }
                }
            }
            int ord = -1;
            for (std::size_t i = 0; i < W.size(); ++i)
                if (!zero_or_unit(W[i])) {
                    ord = static_cast<int>(i);
                    break;
                }
            if (ord < 0) {
                if (!terminating && M < M_max_) {
                    M = std::min(2 * M, M_max_);
                    continue;
                }
                throw std::runtime_error("truncation insufficient: leading term of ds/dt unresolved at order " + std::to_string(M));
            }
            BranchDynamics dyn;
            dyn.k = P + 1 - P * n + ord;
            dyn.omega_order = -dyn.k;
            rec.lambda = W[static_cast<std::size_t>(ord)] * AlgNum(GaussianRational(Rational(1, P)));
            dyn.lambda_exact = rec.lambda.to_string();
            dyn.lambda_h_free = derivative_h(rec.lambda).is_zero();
            bool hfree = true;
            for (const auto& w : W)
                if (!derivative_h(w).is_zero()) {
                    hfree = false;
                    break;
                }
            dyn.h_independent = hfree;
            dyn.ds_dt_terms_checked = static_cast<int>(W.size());
            dyn.coeff_linear_in_h = std::all_of(b.coeff_h_degree.begin(), b.coeff_h_degree.end(), [](int d) { return d <= 1; });
            dyn.petals = dyn.k > 1 ? 2 * (dyn.k - 1) : 0;
            b.dynamics = dyn;
        }
        out_.push_back(std::move(rec));
        return;
    }
}

void set_numeric_direction(InfinityPoint& pt, Complex beta, Complex alpha) {
    const double m = std::max(std::abs(beta), std::abs(alpha));
    pt.beta = beta / m;
    pt.alpha = alpha / m;
}

// Expand records into one branch per conjugacy class visible at the probe value of h.
void expand_records(std::vector<Record>& records, std::optional<Complex> direction, Complex h_probe,
                    std::vector<PuiseuxBranch>& dest) {
    for (auto& rec : records) {
        const TowerLevel* top = rec.branch.tower_top.get();
        std::vector<Embedding> embs;
        if (top)
            embs = embeddings(top, h_probe, true, direction);
        else
            embs.push_back(Embedding{h_probe, {Complex()}});
        for (const auto& e : embs) {
            PuiseuxBranch b = rec.branch;
            b.class_count = 1;
            b.c0_numeric = evaluate(b.coeffs.at(0), e);
            if (b.dynamics) {
                b.dynamics->lambda = evaluate(rec.lambda, e);
                bool ereal = false, eimag = false;
                if (rec.lambda.is_rational_constant()) {
                    const auto v = rec.lambda.base().constant_value();
                    ereal = v.is_real();
                    eimag = sgn(v.re()) == 0;
                }
                b.dynamics->flow_class = classify_flow(b.dynamics->k, b.dynamics->lambda, ereal, eimag);
            }
            dest.push_back(std::move(b));
        }
    }
}

}  // namespace

std::vector<InfinityPoint> infinity_points(const BiPoly& H) {
    if (H.total_degree() < 1) throw std::invalid_argument("infinity analysis needs a nonconstant polynomial");
    const auto f = factor_homogeneous(homogeneous_part(H, H.total_degree()));
    std::vector<InfinityPoint> out;
    for (const auto& d : f.exact) {
        InfinityPoint pt;
        pt.index = static_cast<int>(out.size());
        pt.exact = d;
        pt.multiplicity = d.multiplicity;
        set_numeric_direction(pt, d.beta.to_complex(), d.alpha.to_complex());
        out.push_back(std::move(pt));
    }
    for (const auto& g : f.algebraic)
        for (const auto& t : g.roots) {
            InfinityPoint pt;
            pt.index = static_cast<int>(out.size());
            pt.minimal = g.minimal;
            pt.multiplicity = g.multiplicity;
            set_numeric_direction(pt, Complex(1, 0), t);
            out.push_back(std::move(pt));
        }
    return out;
}

LinearChart chart_map(const BiPoly& H, const InfinityPoint& P) {
    if (!P.exact) throw std::invalid_argument("exact chart unavailable: direction is not defined over Q(i)");
    const ChartMatrices m = build_chart(H, AlgNum(P.exact->beta), AlgNum(P.exact->alpha));
    LinearChart c;
    for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) {
            c.to_chart[r][s] = m.T[r][s].base().constant_value();
            c.from_chart[r][s] = m.S[r][s].base().constant_value();
        }
    return c;
}

HLinearBiPoly chart_at(const BiPoly& H, const InfinityPoint& P) {
    if (!P.exact) throw std::invalid_argument("exact chart unavailable: direction is not defined over Q(i)");
    const ChartMatrices m = build_chart(H, AlgNum(P.exact->beta), AlgNum(P.exact->alpha));
    const ChartData cd = build_chart_data(H, m);
    HLinearBiPoly out;
    for (std::size_t l = 0; l < cd.F.size(); ++l)
        for (std::size_t k = 0; k < cd.F[l].size(); ++k) {
            const AlgNum& c = cd.F[l][k];
            if (c.is_zero()) continue;
            const UniPoly& num = c.base().num();
            out.constant_part.add_term(static_cast<int>(k), static_cast<int>(l), num.coeff(0));
            out.h_part.add_term(static_cast<int>(k), static_cast<int>(l), num.coeff(1));
        }
    return out;
}

namespace {

NewtonPolygon polygon_from_support(std::vector<Exponent> support) {
    NewtonPolygon poly;
    std::sort(support.begin(), support.end());
    poly.support = support;
    if (support.empty()) return poly;
    for (const auto& e : support)
        if (e.first == 0 && e.second == 0) throw std::invalid_argument("hypothesis violated: F(0,0) != 0");
    std::map<int, int> kmin;  // l -> min k
    for (const auto& [k, l] : support) {
        auto it = kmin.find(l);
        if (it == kmin.end() || k < it->second) kmin[l] = k;
    }
    int lmin = kmin.begin()->first;
    Exponent cur{INT_MAX, -1};
    for (const auto& [l, k] : kmin)
        if (k < cur.first) cur = {k, l};
    poly.vertices.push_back(cur);
    while (cur.second > lmin) {
        int best = -1;
        for (const auto& [l, k] : kmin) {
            if (l >= cur.second) break;
            if (best < 0) {
                best = l;
                continue;
            }
            const long lhs = static_cast<long>(k - cur.first) * (cur.second - best);
            const long rhs = static_cast<long>(kmin[best] - cur.first) * (cur.second - l);
            if (lhs < rhs || (lhs == rhs && l < best)) best = l;
        }
        Exponent next{kmin[best], best};
        NewtonEdge e;
        e.from = cur;
        e.to = next;
        const int dl = cur.second - next.second, dk = next.first - cur.first;
        const int g = std::gcd(dl, dk);
        e.p = dl / g;
        e.q = dk / g;
        e.N = e.p * cur.first + e.q * cur.second;
        poly.edges.push_back(e);
        poly.vertices.push_back(next);
        cur = next;
    }
    return poly;
}

}  // namespace

NewtonPolygon newton_polygon(const HLinearBiPoly& F) {
    std::vector<Exponent> support;
    std::set<Exponent> seen;
    for (const auto* part : {&F.constant_part, &F.h_part})
        for (const auto& [e, c] : part->terms())
            if (seen.insert(e).second) support.push_back(e);
    return polygon_from_support(support);
}

NewtonPolygon newton_polygon(const BiPoly& F) { return newton_polygon(HLinearBiPoly{F, BiPoly()}); }

DensePoly<RatFunc> newton_principal(const HLinearBiPoly& F, const NewtonEdge& edge) {
    std::vector<RatFunc> coeffs(static_cast<std::size_t>(edge.from.second) + 1);
    auto add = [&](const BiPoly& part, bool with_h) {
        for (const auto& [e, c] : part.terms()) {
            if (edge.p * e.first + edge.q * e.second != edge.N) continue;
            if (e.second < edge.to.second || e.second > edge.from.second) continue;
            RatFunc v(c);
            if (with_h) v *= RatFunc::h();
            coeffs[static_cast<std::size_t>(e.second)] += v;
        }
    };
    add(F.constant_part, false);
    add(F.h_part, true);
    return DensePoly<RatFunc>(coeffs);
}

std::vector<PuiseuxBranch> puiseux_branches(const HLinearBiPoly& F, int order, Complex h_probe) {
    const Grid G = grid_from(F);
    Engine engine(G, nullptr, order, std::max(order, 64));
    auto records = engine.run(nullptr);
    std::vector<PuiseuxBranch> out;
    expand_records(records, std::nullopt, h_probe, out);
    return out;
}

std::vector<InfinityPoint> analyze_infinity(const BiPoly& H, const InfinityOptions& opts) {
    std::vector<InfinityPoint> points = infinity_points(H);
    auto check_counts = [](InfinityPoint& pt) {
        int total = 0;
        for (const auto& b : pt.branches) total += b.p;
        if (total != pt.multiplicity && pt.error.empty())
            pt.error = "branch count mismatch: ramification sum " + std::to_string(total) + " != multiplicity " +
                       std::to_string(pt.multiplicity);
    };
    // exact directions
    for (auto& pt : points) {
        if (!pt.exact) continue;
        try {
            const ChartMatrices m = build_chart(H, AlgNum(pt.exact->beta), AlgNum(pt.exact->alpha));
            pt.chart = chart_map(H, pt);
            const ChartData cd = build_chart_data(H, m);
            Engine engine(cd.F, opts.dynamics ? &cd : nullptr, opts.order, opts.order_max);
            auto records = engine.run(nullptr);
            expand_records(records, std::nullopt, opts.h_probe, pt.branches);
            pt.analyzed = true;
            check_counts(pt);
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
    }
    // algebraic groups: one computation per group over a direction level
    std::map<std::string, std::vector<InfinityPoint*>> groups;
    std::vector<std::string> order;
    for (auto& pt : points) {
        if (!pt.minimal) continue;
        const std::string key = format_unipoly(*pt.minimal, "t") + "#" + std::to_string(pt.multiplicity);
        if (!groups.count(key)) order.push_back(key);
        groups[key].push_back(&pt);
    }
    for (const auto& key : order) {
        auto& members = groups[key];
        const UniPoly& minimal = *members.front()->minimal;
        std::vector<Record> records;
        std::vector<ChartData> keep_alive;
        try {
            std::function<void(const AlgPoly&)> run_group = [&](const AlgPoly& modulus) {
                LevelPtr lvl = make_level(nullptr, LevelKind::Direction, modulus);
                const std::size_t mark = records.size();
                std::optional<AlgPoly> factor;
                try {
                    const AlgNum theta = AlgNum::generator(lvl.get());
                    const ChartMatrices m = build_chart(H, AlgNum(1), theta);
                    const ChartData cd = build_chart_data(H, m);
                    Engine engine(cd.F, opts.dynamics ? &cd : nullptr, opts.order, opts.order_max);
                    auto recs = engine.run(lvl);
                    for (auto& r : recs) records.push_back(std::move(r));
                } catch (const Split& s) {
                    if (s.level != lvl.get()) throw;
                    records.resize(mark);
                    factor = s.factor;
                }
                if (factor) {
                    const AlgPoly other = divide_exact(modulus, *factor);
                    run_group(*factor);
                    run_group(other);
                }
            };
            std::vector<AlgNum> mc;
            for (const auto& c : minimal.coeffs()) mc.emplace_back(c);
            run_group(AlgPoly(mc));
            for (auto* pt : members) {
                const Complex t = pt->alpha / pt->beta;
                expand_records(records, t, opts.h_probe, pt->branches);
                pt->analyzed = true;
                check_counts(*pt);
            }
        } catch (const std::exception& e) {
            for (auto* pt : members) pt->error = e.what();
        }
    }
    return points;
}

bool residual_vanishes(const HLinearBiPoly& F, const PuiseuxBranch& b, int through) {
    const Grid G = grid_from(F);
    const std::size_t n = static_cast<std::size_t>(through) + 1;
    Series Y(n);
    for (std::size_t i = 0; i < b.coeffs.size(); ++i)
        if (static_cast<std::size_t>(b.q) + i < n) Y[static_cast<std::size_t>(b.q) + i] = b.coeffs[i];
    Series res(n), ypow{AlgNum(1)};
    for (std::size_t l = 0; l < G.size(); ++l) {
        if (l > 0) ypow = ser_mul(ypow, Y, n);
        for (std::size_t k = 0; k < G[l].size(); ++k) {
            if (G[l][k].is_zero()) continue;
            const std::size_t shift = static_cast<std::size_t>(b.p) * k;
            for (std::size_t i = 0; i < ypow.size() && shift + i < n; ++i) res[shift + i] += G[l][k] * ypow[i];
        }
    }
    return std::all_of(res.begin(), res.end(), [](const AlgNum& c) { return c.is_zero(); });
}

}  // namespace isochk
