#include <cmath>

#include "doctest.h"
#include "isochk/flow.hpp"
#include "isochk/jacobian.hpp"
#include "isochk/parser.hpp"

using namespace isochk;

namespace {

BiPoly P(const char* s) { return parse_poly(s); }
GaussianRational Q(long n, long d = 1) { return GaussianRational::from_fraction(n, d); }

}  // namespace

TEST_CASE("jacobian determinant") {
    auto j = jacobian_det(P("x"), P("y+x^2"));
    CHECK(j.constant);
    CHECK(j.value == Q(1));
    j = jacobian_det(P("x+y^2"), P("y"));
    CHECK(j.constant);
    CHECK(j.value == Q(1));
    j = jacobian_det(P("x^2"), P("y"));
    CHECK_FALSE(j.constant);
    CHECK(j.det == P("2*x"));
    j = jacobian_det(P("3*x"), P("y+x^5"));
    CHECK(j.value == Q(3));

    CHECK_THROWS_WITH_AS(accept_pair(P("x^2"), P("y")), doctest::Contains("2*x"), std::invalid_argument);
    CHECK_THROWS_AS(accept_pair(P("x+y"), P("2*x+2*y")), std::invalid_argument);
    CHECK(accept_pair(P("2*x"), P("y")).jac == Q(2));
}

TEST_CASE("induced hamiltonian") {
    CHECK(induced_hamiltonian(accept_pair(P("x"), P("y+x^2"))) == P("1/2*x^2+1/2*(y+x^2)^2"));
    CHECK(induced_hamiltonian(accept_pair(P("x"), P("y"))) == P("1/2*x^2+1/2*y^2"));
    CHECK(induced_hamiltonian(accept_pair(P("x+y^2"), P("y"))) == P("1/2*(x+y^2)^2+1/2*y^2"));
    const BiPoly H = induced_hamiltonian(accept_pair(P("x+(y+x^2)^2"), P("y+x^2")));
    CHECK(homogeneous_part(H, 2) == P("1/2*x^2+1/2*y^2"));
}

TEST_CASE("common zeros") {
    auto z = common_zeros(P("x"), P("y+x^2"));
    REQUIRE(z.roots.size() == 1);
    CHECK(*z.roots[0].exact_x == Q(0));
    CHECK(*z.roots[0].exact_y == Q(0));
    CHECK(z.roots[0].multiplicity == 1);

    z = common_zeros(P("x^2-1"), P("y"));
    REQUIRE(z.roots.size() == 2);
    CHECK(*z.roots[0].exact_x == Q(-1));
    CHECK(*z.roots[1].exact_x == Q(1));
    CHECK(z.roots[0].multiplicity == 1);
    CHECK(z.roots[1].multiplicity == 1);

    CHECK(common_zeros(P("x"), P("x+1")).roots.empty());
    CHECK_THROWS_WITH(common_zeros(P("x*(y-1)"), P("x*y^2")), "common component");

    // a circle meets a line in 2 points; a parabola touches its tangent once with multiplicity 2
    z = common_zeros(P("x^2+y^2-2"), P("x-y"));
    CHECK(z.roots.size() == 2);
    z = common_zeros(P("y-x^2"), P("y"));
    REQUIRE(z.roots.size() == 1);
    CHECK(z.roots[0].multiplicity == 2);
}

TEST_CASE("common zeros stay within the Bezout bound") {
    const char* pairs[][2] = {{"x^3-y", "y^2-x"}, {"x^2+y^2-1", "x^2-y^2"}, {"x*y-1", "x+y"}, {"x^3+y^3-1", "x*y-2"}};
    for (const auto& pr : pairs) {
        const BiPoly f = P(pr[0]), g = P(pr[1]);
        const auto z = common_zeros(f, g);
        int total = 0;
        for (const auto& r : z.roots) total += r.multiplicity;
        CHECK(total <= f.total_degree() * g.total_degree());
        CHECK(!z.roots.empty());
    }
    // x^3 = y, y^2 = x: x^6 = x, six points
    CHECK(common_zeros(P("x^3-y"), P("y^2-x")).roots.size() == 6);
}

TEST_CASE("corollary verdict") {
    const auto met = corollary_verdict(accept_pair(P("x"), P("y+x^2")));
    CHECK(met.status == CorollaryStatus::CriterionMet);
    CHECK(std::string(to_string(met.status)) == "criterion_met");
    CHECK(corollary_verdict(accept_pair(P("x+(y+x^2)^2"), P("y+x^2"))).status == CorollaryStatus::CriterionMet);

    // not a Jacobian pair, but exercises the counting path
    const auto two = corollary_verdict(PolyPair{P("x^2-1"), P("y"), Q(1)});
    CHECK(two.status == CorollaryStatus::CriterionViolated);
    CHECK(two.zeros.roots.size() == 2);

    const auto close = corollary_verdict(PolyPair{P("x^2-1/100000000000000"), P("y"), Q(1)});
    CHECK(close.status == CorollaryStatus::Undetermined);
}

TEST_CASE("shear pairs give isochronous induced hamiltonians") {
    const char* pairs[][2] = {{"x", "y+x^2"}, {"x+y^2", "y"}, {"x+(y+x^2)^2", "y+x^2"}, {"x", "y+x^2-3*x^3"}};
    const auto hs = default_h_set(6, 1e-3, 1e-1, {0.0, 60.0});
    for (const auto& pr : pairs) {
        const BiPoly H = induced_hamiltonian(accept_pair(P(pr[0]), P(pr[1])));
        const auto set = sample_periods(H, hs);
        CHECK(set.verdict == NumericVerdict::Isochronous);
        for (const auto& s : set.samples) {
            REQUIRE(s.has_value());
            CHECK(std::abs(s->T - Complex(2 * M_PI, 0)) <= 1e-6);
        }
    }
}
