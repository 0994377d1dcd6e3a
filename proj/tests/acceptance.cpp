// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// usage: acceptance [path/to/isochk]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "isochk/criteria.hpp"
#include "isochk/parser.hpp"
#include "isochk/report.hpp"
#include "test_util.hpp"

using namespace isochk;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
const double kSixty = M_PI / 3;

BiPoly P(const char* s) { return parse_poly(s); }
GaussianRational Q(long n, long d = 1) { return GaussianRational::from_fraction(n, d); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// The randomized suite shared by criteria 6 and 8.
std::vector<BiPoly> random_suite() {
    std::mt19937_64 rng(20261016);
    std::vector<BiPoly> out;
    for (int i = 0; i < 200; ++i) out.push_back(testutil::random_morse_hamiltonian(rng, 5));
    return out;
}

Outcome linear_center() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto set = sample_periods(P("1/2*x^2+1/2*y^2"), default_h_set(8, 1e-3, 1e-1, {0.0, 60.0}));
    const double dt = seconds_since(t0);
    double worst = 0;
    for (const auto& s : set.samples) {
        o.require(s.has_value(), "a sample failed");
        if (s) worst = std::max(worst, std::abs(s->T - Complex(kTwoPi, 0)));
    }
    o.require(set.h.size() == 16, "expected 16 samples");
    o.require(worst <= 1e-9, "max |T - 2pi| = " + fmt(worst));
    o.require(dt < 1.0, "runtime " + fmt(dt) + " s");
    o.detail = o.pass ? "max |T - 2pi| = " + fmt(worst) + ", " + fmt(dt) + " s" : o.detail;
    return o;
}

Outcome shear_isochrone() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const AnalysisReport r = pair_report(P("x"), P("y+x^2"), RunConfig{});
    const double dt = seconds_since(t0);
    o.require(r.hamiltonian && *r.hamiltonian == P("1/2*x^2+1/2*(y+x^2)^2"), "induced H");
    o.require(r.periods && r.periods->verdict == NumericVerdict::Isochronous, "numeric verdict");
    if (r.periods) o.require(r.periods->max_deviation < 1e-6, "deviation " + fmt(r.periods->max_deviation));
    o.require(r.theorem2 && r.theorem2->passes && r.theorem2->max_multiplicity == 4, "theorem 2 max multiplicity 4");
    o.require(r.jacobian && r.jacobian->corollary && r.jacobian->corollary->zeros.roots.size() == 1, "one common zero");
    o.require(r.jacobian && r.jacobian->corollary && r.jacobian->corollary->status == CorollaryStatus::CriterionMet,
              "criterion met");
    o.require(r.overall == Overall::NumericallyIsochronous, std::string("overall ") + to_string(r.overall));
    o.require(dt < 5.0, "runtime " + fmt(dt) + " s");
    if (o.pass && r.periods) o.detail = "deviation " + fmt(r.periods->max_deviation) + ", " + fmt(dt) + " s";
    return o;
}

Outcome cubic() {
    Outcome o;
    const BiPoly H = P("1/2*x^2+1/2*y^2+x^3");
    // the real ray meets the saddle level 1/54 inside [0.01, 0.05], so the ray at 60 degrees is used
    const auto hs = default_h_set(8, 0.01, 0.05, {60.0});
    const auto set = sample_periods(H, hs);
    o.require(set.verdict == NumericVerdict::NonIsochronous, std::string("verdict ") + to_string(set.verdict));
    o.require(set.max_deviation > 1e-4, "spread " + fmt(set.max_deviation));

    // cross-tolerance: the same periods with tolerances two orders tighter
    FlowOptions tight;
    tight.rtol = 1e-12;
    tight.atol = 1e-14;
    double cross = 0;
    for (std::size_t i = 0; i < hs.size(); ++i)
        if (set.samples[i]) cross = std::max(cross, std::abs(period(H, hs[i], tight).T - set.samples[i]->T));
    o.require(cross <= 1e-8, "cross-tolerance difference " + fmt(cross));
    // elliptic-integral values (mpmath quadrature)
    const Complex t02 = period(H, std::polar(0.02, kSixty)).T, t05 = period(H, std::polar(0.05, kSixty)).T;
    o.require(std::abs(t02 - Complex(6.2088600910607775, 0.97313813201944164)) <= 1e-8, "T(0.02) vs quadrature");
    o.require(std::abs(t05 - Complex(5.4445481482215492, 1.4121306531868273)) <= 1e-8, "T(0.05) vs quadrature");

    const auto pts = singular_points_on_critical_level(H);
    int on = 0;
    for (const auto& p : pts) on += p.on_L0;
    o.require(pts.size() == 2 && on == 1, "census size");
    if (pts.size() == 2) {
        o.require(pts[1].on_L0 && *pts[1].exact_x == Q(0) && *pts[1].exact_y == Q(0), "(0,0) on L0");
        o.require(!pts[0].on_L0 && *pts[0].exact_x == Q(-1, 3) && *pts[0].exact_y == Q(0), "(-1/3,0) off L0");
        o.require(pts[0].exact_value && *pts[0].exact_value == Q(1, 54), "H = 1/54 exactly");
    }
    o.require(jv_flag(H) == JvFlag::Applies, "jv flag");
    if (o.pass) o.detail = "spread " + fmt(set.max_deviation) + ", cross-tolerance " + fmt(cross);
    return o;
}

Outcome theorem2_quartic() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg;
    cfg.numeric = false;
    cfg.escape = false;
    Sections s{true, true, false, false, false, false, false, false};
    const AnalysisReport r = partial_report(P("1/2*x^2+1/2*y^2+x^4+y^4"), cfg, s);
    const double dt = seconds_since(t0);
    o.require(r.theorem2 && !r.theorem2->passes, "theorem 2 should fail");
    o.require(r.theorem2 && r.theorem2->comparison() == "1 < 2", "comparison text");
    o.require(!r.periods, "no numeric run");
    o.require(r.overall == Overall::NotIsochronousTheorem2, std::string("overall ") + to_string(r.overall));
    o.require(dt < 0.1, "runtime " + fmt(dt) + " s");
    if (o.pass) o.detail = "1 < 2, " + fmt(dt * 1000) + " ms";
    return o;
}

Outcome puiseux_exactness() {
    Outcome o;
    const BiPoly H = P("1/2*x^2+1/2*y^2+x^3");
    const auto pts = infinity_points(H);
    o.require(pts.size() == 1, "one point at infinity");
    if (pts.empty()) return o;
    const HLinearBiPoly F = chart_at(H, pts[0]);
    const NewtonPolygon np = newton_polygon(F);
    o.require(np.vertices == std::vector<Exponent>{{0, 3}, {1, 0}}, "hull vertices");
    o.require(np.edges.size() == 1 && np.edges[0].p == 3 && np.edges[0].q == 1 && np.edges[0].N == 3, "edge (3,1), N=3");
    const auto br = puiseux_branches(F, 16);
    o.require(br.size() == 1, "one branch class");
    if (br.empty()) return o;
    const PuiseuxBranch& b = br[0];
    o.require(b.p == 3 && b.q == 1, "p = 3, q = 1");
    const AlgNum c0 = b.coeffs.at(0);
    o.require((c0 * c0 * c0 + AlgNum(Q(1, 2))).is_zero(), "c0^3 = -1/2");
    o.require(residual_vanishes(F, b, 16), "residual through s^16");
    if (o.pass) o.detail = "residual zero through s^16";
    return o;
}

Outcome pole_bound(const std::vector<BiPoly>& suite) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    int poles = 0, violations = 0, errors = 0;
    for (const auto& H : suite) {
        const int n = H.total_degree() - 1;
        InfinityOptions io;
        io.order = 6;
        for (const auto& pt : analyze_infinity(H, io)) {
            if (!pt.error.empty()) ++errors;
            for (const auto& b : pt.branches)
                if (b.dynamics && b.dynamics->omega_order <= -1) {
                    ++poles;
                    if (2 * pt.multiplicity < n + 1) ++violations;
                }
        }
    }
    const double dt = seconds_since(t0);
    o.require(violations == 0, std::to_string(violations) + " violations");
    o.require(errors == 0, std::to_string(errors) + " points not analyzed");
    o.require(dt < 300, "runtime " + fmt(dt) + " s");
    if (o.pass) o.detail = std::to_string(poles) + " pole branches, 0 violations, " + fmt(dt) + " s";
    return o;
}

Outcome linear_diagnostic() {
    Outcome o;
    const auto pts = analyze_infinity(P("1/2*x^2+1/2*y^2"));
    o.require(pts.size() == 2, "two points");
    for (const auto& pt : pts) {
        o.require(pt.branches.size() == 1, "one branch per point");
        if (pt.branches.empty()) continue;
        const auto& b = pt.branches[0];
        o.require(b.coeff_h_degree.at(0) == 1, "deg_h c0 = 1");
        o.require(b.dynamics.has_value(), "dynamics");
        if (!b.dynamics) continue;
        const auto& d = *b.dynamics;
        o.require(d.h_independent, "ds/dt h-free");
        o.require(d.k == 1, "k = 1");
        o.require(std::abs(std::abs(d.lambda.imag()) - 1) < 1e-14 && std::abs(d.lambda.real()) < 1e-14, "lambda = +-i");
        o.require(d.flow_class == FlowClass::Center, "class center");
        o.require(d.omega_order == -1, "omega order -1");
    }
    if (pts.size() == 2 && pts[0].branches.size() == 1 && pts[1].branches.size() == 1)
        o.require(std::abs(pts[0].branches[0].dynamics->lambda + pts[1].branches[0].dynamics->lambda) < 1e-14,
                  "opposite lambdas");
    if (o.pass) o.detail = "c0 degree 1 in h, k = 1, lambda = +-i, center, omega order -1";
    return o;
}

Outcome cross_engine(const std::vector<BiPoly>& suite) {
    Outcome o;
    const auto hs = default_h_set(4, 1e-3, 1e-2, {0.0});
    int fails = 0, contradictions = 0, iso = 0;
    for (const auto& H : suite) {
        const bool t2_fails = !theorem2_check(H).passes;
        const auto set = sample_periods(H, hs);
        fails += t2_fails;
        iso += set.verdict == NumericVerdict::Isochronous;
        if (t2_fails && set.verdict == NumericVerdict::Isochronous) ++contradictions;
    }
    o.require(contradictions == 0, std::to_string(contradictions) + " contradictions");
    if (o.pass)
        o.detail = std::to_string(fails) + " fail theorem 2, " + std::to_string(iso) + " numerically isochronous, 0 overlap";
    return o;
}

Outcome invariance() {
    Outcome o;
    std::mt19937_64 rng(909);
    int compared = 0, instances = 0;
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const BiPoly H = testutil::random_morse_hamiltonian(rng, 4, trial % 2 == 0);
        const BiPoly HS = compose_linear(H, testutil::random_unimodular(rng));
        const BiPoly cH = H.scaled(Q(3, 2));
        bool any = false;
        for (Complex h : {Complex(0.004, 0), std::polar(0.008, kSixty)}) {
            Complex t;
            try {
                t = period(H, h).T;
            } catch (const std::runtime_error&) {
                bool agree = true;
                try {
                    period(HS, h);
                    agree = false;
                } catch (const std::runtime_error&) {
                }
                o.require(agree, "failure not mirrored under the symplectic change");
                continue;
            }
            const double ds = std::abs(period(HS, h).T - t);
            const double dc = std::abs(period(cH, 1.5 * h).T - t / 1.5);
            worst = std::max({worst, ds, dc});
            any = true;
            ++compared;
        }
        instances += any;
    }
    o.require(worst <= 1e-7, "max difference " + fmt(worst));
    o.require(instances == 20, std::to_string(instances) + " of 20 instances compared");
    if (o.pass) o.detail = std::to_string(compared) + " paired periods, max difference " + fmt(worst);
    return o;
}

Outcome determinism(const char* cli) {
    Outcome o;
    RunConfig cfg;
    cfg.f = "x";
    cfg.g = "y+x^2";
    const std::string a = report_to_json(pair_report(P("x"), P("y+x^2"), cfg));
    const std::string b = report_to_json(pair_report(P("x"), P("y+x^2"), cfg));
    o.require(a == b, "in-process reports differ");
    if (cli) {
        const std::string out = "acceptance_determinism.json";
        auto run = [&] {
            const std::string cmd = std::string(cli) + " analyze --f x --g 'y+x^2' --json " + out + " > /dev/null";
            if (std::system(cmd.c_str()) != 0) return std::string("<run failed>");
            std::ifstream in(out, std::ios::binary);
            std::stringstream s;
            s << in.rdbuf();
            return s.str();
        };
        const std::string c = run(), d = run();
        std::remove(out.c_str());
        o.require(c == d && c != "<run failed>", "CLI runs differ");
    }
    if (o.pass) o.detail = cli ? "in-process and CLI JSON byte-identical" : "in-process JSON byte-identical";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const char* cli = argc > 1 ? argv[1] : nullptr;
    const std::vector<BiPoly> suite = random_suite();
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"linear center period", linear_center},
        {"Jacobian shear isochrone", shear_isochrone},
        {"non-isochronous cubic", cubic},
        {"Theorem 2 on the quartic", theorem2_quartic},
        {"Puiseux exactness at the cubic point", puiseux_exactness},
        {"pole bound on 200 random Hamiltonians", [&] { return pole_bound(suite); }},
        {"linearity diagnostic on the linear center", linear_diagnostic},
        {"cross-engine consistency", [&] { return cross_engine(suite); }},
        {"symplectic invariance and scaling", invariance},
        {"deterministic JSON", [&] { return determinism(cli); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (o.pass ? "PASS" : "FAIL") << " - "
                  << o.detail << std::endl;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
    return failed ? 1 : 0;
}
