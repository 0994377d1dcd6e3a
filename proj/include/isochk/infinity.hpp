#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isochk/bipoly.hpp"
#include "isochk/tower.hpp"

namespace isochk {

/// constant_part + h * h_part.
struct HLinearBiPoly {
    BiPoly constant_part;
    BiPoly h_part;
};

enum class FlowClass { Petals, Center, Node, Focus, Regular, Saddle };
const char* to_string(FlowClass c);

/// Class of ds/dt = lambda s^k + ... at s = 0.
FlowClass classify_flow(int k, Complex lambda, bool lambda_exact_real, bool lambda_exact_imag);

struct BranchDynamics {
    Complex lambda;               // at the probe value of h
    std::string lambda_exact;     // exact expression (tower notation)
    bool lambda_h_free = false;
    int k = 0;
    FlowClass flow_class = FlowClass::Regular;
    int petals = 0;               // 2(k-1) when k > 1
    int omega_order = 0;          // order of the period form, -k
    bool h_independent = false;   // every computed ds/dt coefficient is h-free
    bool coeff_linear_in_h = false;
    int ds_dt_terms_checked = 0;
};

struct PuiseuxBranch {
    int p = 1;                   // X = s^p
    int q = 1;                   // Y = s^q (c_0 + c_1 s + ...)
    GaussianRational shift;      // branch centre in Y (always 0 in the chart frame)
    std::vector<AlgNum> coeffs;  // c_0 .. c_M
    std::vector<std::string> coeff_text;
    std::vector<int> coeff_h_degree;  // -1 zero, 0, 1, or 2 meaning "2 or more / not polynomial"
    int truncation = 0;          // M
    bool terminating = false;    // the series is an exact polynomial
    int conjugacy_class_size = 1;
    int class_count = 1;         // conjugacy classes represented (before numeric expansion)
    Complex c0_numeric;
    int residual_checked_through = -1;  // residual coefficients verified zero through s^this
    bool residual_zero = false;
    std::vector<std::string> tower;     // generator definitions
    LevelPtr tower_top;
    std::optional<BranchDynamics> dynamics;
};

struct LinearChart {
    // x1 = to_chart[0] . (x, y), y1 = to_chart[1] . (x, y); determinant 1
    Matrix2 to_chart;
    Matrix2 from_chart;
};

struct InfinityPoint {
    int index = 0;
    Complex beta, alpha;                 // numeric direction [beta:alpha], max(|beta|,|alpha|) = 1
    std::optional<ExactDirection> exact; // direction in Q(i)
    std::optional<UniPoly> minimal;      // for algebraic directions [1:t], minimal(t) = 0
    int multiplicity = 1;
    std::optional<LinearChart> chart;    // exact directions only
    std::vector<PuiseuxBranch> branches;
    bool analyzed = false;
    std::string error;
};

struct InfinityOptions {
    int order = 16;
    int order_max = 64;
    Complex h_probe{0.01, 0.0};
    bool dynamics = true;
};

/// Points at infinity of the level curves (branches left empty).
std::vector<InfinityPoint> infinity_points(const BiPoly& H);

/// Determinant-1 chart sending the direction to [1:0:0], with the quadratic part used to pick
/// the complementary axis. Throws for directions outside Q(i).
LinearChart chart_map(const BiPoly& H, const InfinityPoint& P);

/// X^(n+1) H~(1/X, Y/X) - h X^(n+1) for the chart of P.
HLinearBiPoly chart_at(const BiPoly& H, const InfinityPoint& P);

struct NewtonEdge {
    Exponent from, to;  // from has the larger Y exponent
    int p = 1, q = 1, N = 0;
};

struct NewtonPolygon {
    std::vector<Exponent> support;
    std::vector<Exponent> vertices;
    std::vector<NewtonEdge> edges;
};

NewtonPolygon newton_polygon(const HLinearBiPoly& F);
NewtonPolygon newton_polygon(const BiPoly& F);

/// g(1, Y) for one edge: sum of b_kl Y^l over support points on the edge.
DensePoly<RatFunc> newton_principal(const HLinearBiPoly& F, const NewtonEdge& edge);

/// Newton-Puiseux expansion at (0,0) of a polynomial with coefficients linear in h.
std::vector<PuiseuxBranch> puiseux_branches(const HLinearBiPoly& F, int order = 16,
                                            Complex h_probe = Complex(0.01, 0.0));

/// Full analysis: points, branches, and dynamics. Failures are recorded per point.
std::vector<InfinityPoint> analyze_infinity(const BiPoly& H, const InfinityOptions& opts = {});

/// Exact residual F(s^p, Y(s)) through s^through for a branch of F; true when all vanish.
bool residual_vanishes(const HLinearBiPoly& F, const PuiseuxBranch& b, int through);

}  // namespace isochk
