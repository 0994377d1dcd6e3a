#include <cmath>

#include "doctest.h"
#include "isochk/tower.hpp"

using namespace isochk;

namespace {
AlgPoly poly(std::vector<AlgNum> c) { return AlgPoly(std::move(c)); }
const AlgNum h = AlgNum(RatFunc::h());
}  // namespace

TEST_CASE("rational functions in h") {
    RatFunc x = RatFunc::h();
    RatFunc a = (x * x - RatFunc(1)) / (x - RatFunc(1));
    CHECK(a == x + RatFunc(1));
    CHECK(a.is_polynomial());
    RatFunc b = RatFunc(1) / x;
    CHECK_FALSE(b.is_polynomial());
    CHECK(b.derivative() == -(RatFunc(1) / (x * x)));
    CHECK(std::abs(b.eval(Complex(2, 0)) - 0.5) < 1e-15);
    CHECK(b.to_string() == "(1)/(h)");
}

TEST_CASE("quadratic extension arithmetic") {
    auto lvl = make_level(nullptr, LevelKind::Tau, poly({AlgNum(-2), AlgNum(0), AlgNum(1)}));
    AlgNum t = AlgNum::generator(lvl.get());
    CHECK((t * t - AlgNum(2)).is_zero());
    CHECK((t * t.inverse()).is_one());
    CHECK(((t - AlgNum(1)) * (t + AlgNum(1))).is_one());
    CHECK(derivative_h(t).is_zero());
    auto emb = embeddings(lvl.get(), Complex(0.5, 0), false);
    REQUIRE(emb.size() == 2);
    CHECK(std::abs(evaluate(t, emb[0]) + std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(evaluate(t, emb[1]) - std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("zero divisors raise a split") {
    auto lvl = make_level(nullptr, LevelKind::Tau, poly({AlgNum(-1), AlgNum(0), AlgNum(1)}));
    AlgNum t = AlgNum::generator(lvl.get());
    CHECK(((t - AlgNum(1)) * (t + AlgNum(1))).is_zero());
    try {
        (void)zero_or_unit(t - AlgNum(1));
        FAIL("expected split");
    } catch (const Split& s) {
        CHECK(s.level == lvl.get());
        CHECK(s.factor.degree() == 1);
        CHECK((s.factor.coeff(0) + AlgNum(1)).is_zero());
    }
    CHECK_FALSE(zero_or_unit(t));
}

TEST_CASE("derivation through an h-dependent modulus") {
    // t^2 = h: dt/dh = 1/(2t)
    auto lvl = make_level(nullptr, LevelKind::Root, poly({-h, AlgNum(0), AlgNum(1)}), 2);
    AlgNum t = AlgNum::generator(lvl.get());
    AlgNum dt = derivative_h(t);
    CHECK((dt * t * AlgNum(2)).is_one());
    // d/dh (t^2) = 1
    CHECK(derivative_h(t * t).is_one());
    // second level: u^3 = t
    auto lvl2 = make_level(lvl, LevelKind::Root, poly({-t, AlgNum(0), AlgNum(0), AlgNum(1)}), 3);
    AlgNum u = AlgNum::generator(lvl2.get());
    CHECK((u.pow(6) - h).is_zero());
    // d/dh u^6 = 1
    CHECK(derivative_h(u.pow(6)).is_one());
    // u = h^(1/6): u' = u/(6h)
    CHECK((derivative_h(u) * AlgNum(6) * h - u).is_zero());
}
