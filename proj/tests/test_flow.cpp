#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "isochk/flow.hpp"
#include "isochk/parser.hpp"
#include "test_util.hpp"

using namespace isochk;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
const double kSixty = M_PI / 3;

BiPoly P(const char* s) { return parse_poly(s); }

Complex on_ray(double r, double angle = 0) { return std::polar(r, angle); }

}  // namespace

TEST_CASE("initial point on the level curve") {
    const FlowState lin = initial_point_on_level(P("1/2*x^2+1/2*y^2"), 0.02, 0.0);
    CHECK(std::abs(lin.x - Complex(0.2, 0)) < 1e-15);
    CHECK(std::abs(lin.y) < 1e-15);

    // dH/dy vanishes at theta = 0, so x is corrected: x^2/2 + x^3 = 1/100 (mpmath findroot)
    const BiPoly cubic = P("1/2*x^2+1/2*y^2+x^3");
    const FlowState c = initial_point_on_level(cubic, 0.01, 0.0);
    CHECK(std::abs(c.x - Complex(0.126354284740997869, 0)) < 1e-14);
    CHECK(std::abs(c.y) < 1e-15);
    const Complex residual = c.x * c.x / 2.0 + c.y * c.y / 2.0 + c.x * c.x * c.x - 0.01;
    CHECK(std::abs(residual) < 1e-13);

    const FlowState tilted = initial_point_on_level(cubic, on_ray(0.03, kSixty), 1.0);
    const Complex r2 = tilted.x * tilted.x / 2.0 + tilted.y * tilted.y / 2.0 + tilted.x * tilted.x * tilted.x;
    CHECK(std::abs(r2 - on_ray(0.03, kSixty)) < 1e-13);

    CHECK_THROWS_AS(initial_point_on_level(cubic, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("integration of V and iV") {
    const BiPoly lin = P("1/2*x^2+1/2*y^2");
    const FlowState z0{0.2, 0.0, 0};
    const Trajectory round = integrate(lin, Field::V, z0, kTwoPi);
    REQUIRE(round.stop == StopReason::Completed);
    const FlowState& end = round.states.back();
    CHECK(std::abs(end.x - z0.x) < 1e-9);
    CHECK(std::abs(end.y - z0.y) < 1e-9);
    CHECK(end.t == doctest::Approx(kTwoPi));
    CHECK(round.drift <= 1e-10);

    // iV = i(-y, x): (1, i) is the growing eigenvector, half of (0.2, 0) lies on it
    const Trajectory grow = integrate(lin, Field::iV, z0, 10.0);
    REQUIRE(grow.stop == StopReason::Completed);
    const FlowState& g = grow.states.back();
    CHECK(std::abs(g.y / g.x - Complex(0, 1)) < 1e-6);
    CHECK(std::abs(g.x) == doctest::Approx(0.1 * std::exp(10.0)).epsilon(1e-6));
    const Trajectory back = integrate(lin, Field::iV, z0, -10.0);
    CHECK(std::abs(back.states.back().y / back.states.back().x - Complex(0, -1)) < 1e-6);
    CHECK(back.states.back().t == doctest::Approx(-10.0));

    const FlowState far{200.0, 0.0, 0};
    CHECK(integrate(lin, Field::iV, far, 20.0).stop == StopReason::Escaped);

    const BiPoly cubic = P("1/2*x^2+1/2*y^2+x^3");
    const FlowState c0 = initial_point_on_level(cubic, 0.01, 0.0);
    const Trajectory rev = integrate(cubic, Field::V, c0, 6.9777190866951779);
    REQUIRE(rev.stop == StopReason::Completed);
    CHECK(rev.drift <= 1e-10);
    CHECK(std::abs(rev.states.back().x - c0.x) < 1e-8);
}

TEST_CASE("period of the linear center") {
    const BiPoly lin = P("1/2*x^2+1/2*y^2");
    for (double angle : {0.0, kSixty, -2.0})
        for (double r : {1e-3, 1e-2, 0.05, 0.1, 0.2}) {
            const PeriodSample s = period(lin, on_ray(r, angle));
            CHECK(std::abs(s.T - kTwoPi) <= 1e-9);
            CHECK(s.drift <= 1e-8 * (1 + r));
        }
    CHECK_THROWS_AS(period(lin, 0.3), std::invalid_argument);
}

TEST_CASE("period of the shear isochrone") {
    const BiPoly shear = P("1/2*x^2+1/2*(y+x^2)^2");
    for (Complex h : {Complex(0.05), on_ray(0.01), on_ray(0.05, kSixty), on_ray(0.1, kSixty)})
        CHECK(std::abs(period(shear, h).T - kTwoPi) <= 1e-6);
}

TEST_CASE("period of the cubic against the elliptic integral") {
    // mpmath: T = 2 int_0^pi dphi / sqrt(2 (x(phi) - x3)) between the small roots of 2h - x^2 - 2x^3
    const BiPoly cubic = P("1/2*x^2+1/2*y^2+x^3");
    CHECK(std::abs(period(cubic, 0.01).T - 6.9777190866951779) < 1e-8);
    CHECK(std::abs(period(cubic, 0.005).T - 6.5607319802129909) < 1e-8);
    const Complex t2 = period(cubic, on_ray(0.02, kSixty)).T;
    const Complex t5 = period(cubic, on_ray(0.05, kSixty)).T;
    CHECK(std::abs(t2 - Complex(6.2088600910607775, 0.97313813201944164)) < 1e-8);
    CHECK(std::abs(t5 - Complex(5.4445481482215492, 1.4121306531868273)) < 1e-8);
    const Complex t1 = period(cubic, 0.01).T;
    CHECK(std::abs(t1 - t5) / std::abs(t1) > 1e-4);

    // the real cycle dies at the saddle level 1/54
    CHECK_THROWS_AS(period(cubic, 0.05), std::runtime_error);
}

TEST_CASE("tighter tolerances reproduce the cubic period") {
    const BiPoly cubic = P("1/2*x^2+1/2*y^2+x^3");
    FlowOptions tight;
    tight.rtol = 1e-12;
    tight.atol = 1e-14;
    for (Complex h : {Complex(0.012), on_ray(0.04, kSixty)})
        CHECK(std::abs(period(cubic, h).T - period(cubic, h, tight).T) < 1e-8);
}

TEST_CASE("sample verdicts") {
    const BiPoly lin = P("1/2*x^2+1/2*y^2");
    const auto hs = default_h_set(8, 1e-3, 1e-1, {0.0, 60.0});
    REQUIRE(hs.size() == 16);
    CHECK(std::abs(hs[7] - Complex(0.1)) < 1e-15);
    CHECK(std::abs(hs[8] - on_ray(1e-3, kSixty)) < 1e-15);
    const SampleSet ls = sample_periods(lin, hs);
    CHECK(ls.verdict == NumericVerdict::Isochronous);
    CHECK(ls.max_deviation < 1e-9);
    CHECK(std::string(to_string(ls.verdict)) == "numerically_isochronous");

    const BiPoly cubic = P("1/2*x^2+1/2*y^2+x^3");
    const SampleSet cs = sample_periods(cubic, default_h_set());
    CHECK(cs.verdict == NumericVerdict::NonIsochronous);
    CHECK(cs.max_deviation > 1e-4);

    // a failed sample without any spread elsewhere leaves the question open
    const SampleSet failed = sample_periods(lin, {Complex(0.01), Complex(0.0), Complex(0.02)});
    CHECK(failed.verdict == NumericVerdict::Inconclusive);
    CHECK(!failed.samples[1]);
    CHECK(!failed.errors[1].empty());
    CHECK(failed.errors[0].empty());
    CHECK(sample_periods(lin, {Complex(0.01)}).verdict == NumericVerdict::Inconclusive);
}

TEST_CASE("escape experiments on the linear center") {
    const BiPoly lin = P("1/2*x^2+1/2*y^2");
    const auto pts = infinity_points(lin);
    REQUIRE(pts.size() == 2);
    const auto res = escape_analysis(lin, 0.05, 6);
    REQUIRE(res.size() == 12);
    for (const auto& r : res) {
        CHECK(r.outcome == EscapeOutcome::Escaped);
        REQUIRE(r.matched_point >= 0);
        const InfinityPoint& p = pts[r.matched_point];
        CHECK(r.match_distance < 1e-6);
        // forward: [1:i], backward: [1:-i]
        const Complex want = r.backward ? Complex(0, -1) : Complex(0, 1);
        CHECK(projective_distance(p.beta, p.alpha, 1.0, want) < 1e-12);
    }
    FlowOptions opts;
    const auto quick = escape_analysis(lin, 0.05, 2, opts, 0.001);
    for (const auto& r : quick) CHECK(r.outcome == EscapeOutcome::MaxTimeReached);
}

TEST_CASE("symplectic invariance of the period") {
    std::mt19937_64 rng(77);
    int compared = 0;
    for (int trial = 0; trial < 8; ++trial) {
        const BiPoly H = testutil::random_morse_hamiltonian(rng, 4, false);
        const BiPoly HS = compose_linear(H, testutil::random_unimodular(rng));
        for (Complex h : {Complex(0.004), on_ray(0.008, kSixty)}) {
            bool ok_h = true, ok_s = true;
            Complex th, ts;
            try {
                th = period(H, h).T;
            } catch (const std::runtime_error&) {
                ok_h = false;
            }
            try {
                ts = period(HS, h).T;
            } catch (const std::runtime_error&) {
                ok_s = false;
            }
            CHECK(ok_h == ok_s);
            if (ok_h && ok_s) {
                CHECK(std::abs(th - ts) <= 1e-7);
                ++compared;
            }
        }
    }
    CHECK(compared >= 12);
}

TEST_CASE("scaling law") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 4; ++trial) {
        const BiPoly H = testutil::random_morse_hamiltonian(rng, 4, true);
        for (const auto& [cn, cd] : {std::pair{2L, 1L}, std::pair{1L, 3L}}) {
            const double c = double(cn) / double(cd);
            const BiPoly cH = H.scaled(GaussianRational::from_fraction(cn, cd));
            for (Complex h : {Complex(0.003), on_ray(0.006, kSixty)}) {
                Complex t;
                try {
                    t = period(H, h).T;
                } catch (const std::runtime_error&) {
                    CHECK_THROWS_AS(period(cH, c * h), std::runtime_error);
                    continue;
                }
                CHECK(std::abs(period(cH, c * h).T - t / c) <= 1e-7);
            }
        }
    }
}

TEST_CASE("period samples are deterministic") {
    const BiPoly cubic = P("1/2*x^2+1/2*y^2+x^3");
    const auto hs = default_h_set(6, 1e-3, 5e-2, {0.0, 60.0});
    const SampleSet a = sample_periods(cubic, hs, {}, 1e-6, 1);
    const SampleSet b = sample_periods(cubic, hs, {}, 1e-6, 4);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < hs.size(); ++i) {
        REQUIRE(a.samples[i].has_value() == b.samples[i].has_value());
        CHECK(a.errors[i] == b.errors[i]);
        if (!a.samples[i]) continue;
        CHECK(std::memcmp(&a.samples[i]->T, &b.samples[i]->T, sizeof(Complex)) == 0);
        CHECK(std::memcmp(&a.samples[i]->drift, &b.samples[i]->drift, sizeof(double)) == 0);
        CHECK(a.samples[i]->steps == b.samples[i]->steps);
    }
    CHECK(a.max_deviation == b.max_deviation);
}
