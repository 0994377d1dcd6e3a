#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isochk/bipoly.hpp"
#include "isochk/flow.hpp"
#include "isochk/infinity.hpp"

namespace isochk {

/// H written around a Morse center: normalized(u, v) = original(change . (u, v)) / scale, with
/// quadratic part exactly (u^2 + v^2)/2. Periods map back as T_original(h) = T_normalized(h/scale)/scale.
struct MorseForm {
    BiPoly original;
    BiPoly normalized;
    Matrix2 change;  // determinant 1
    GaussianRational scale{1};
};

/// Throws std::invalid_argument for a nonzero constant or linear part, a degenerate Hessian
/// ("not a Morse point"), or a Hessian determinant without a square root in Q(i).
MorseForm normalize(const BiPoly& H);

struct Theorem2Result {
    bool passes = true;
    int max_multiplicity = 0;
    int degree = 0;  // n + 1
    /// "2*max >= n+1" as text, e.g. "1 < 2"
    std::string comparison() const;
};

/// Necessary condition on the top homogeneous part: some linear factor of multiplicity >= (n+1)/2.
Theorem2Result theorem2_check(const BiPoly& H);

enum class LinearityStatus { Satisfied, Violated, Partial };
const char* to_string(LinearityStatus s);

struct LinearityWitness {
    int point = 0;
    int branch = 0;
    int coefficient = -1;  // -1: the ds/dt series is not h-free
    bool accessible = false;
};

struct LinearityResult {
    LinearityStatus status = LinearityStatus::Satisfied;
    std::vector<LinearityWitness> violations;  // accessible ones first
    std::vector<int> unanalyzed_points;
};

/// Points reached by the iV experiment (escape or blow-up), by index.
std::vector<int> accessible_points(const std::vector<EscapeResult>& escapes);

/// Every c_i(h) of degree <= 1 in h and ds/dt free of h. Only violations on accessible points count.
LinearityResult linearity_check(const std::vector<InfinityPoint>& points, const std::vector<EscapeResult>& escapes);

enum class KCheckStatus { ViolationWitness, Consistent, Skipped };
const char* to_string(KCheckStatus s);

struct KCheckResult {
    KCheckStatus status = KCheckStatus::Skipped;
    std::vector<int> checked_points;  // reached at infinite time
    std::vector<int> witnesses;       // of those, points without a k = 1 branch
};

KCheckResult k_one_check(const std::vector<InfinityPoint>& points, const std::vector<EscapeResult>& escapes);

struct SingularPoint {
    Complex x, y;
    std::optional<GaussianRational> exact_x, exact_y;
    std::optional<GaussianRational> exact_value;  // H at the point when the point is in Q(i)^2
    Complex value;
    bool on_L0 = false;
};

/// Solutions of H_x = H_y = 0 (resultants, clustered roots, Newton polish, exact check when rational).
/// Throws std::runtime_error("critical set not finite") when the gradient has a common component.
std::vector<SingularPoint> singular_points_on_critical_level(const BiPoly& H, double cluster_tol = 1e-8);

enum class JvFlag { Applies, NotApplicable };
const char* to_string(JvFlag f);

/// Real coefficients and even n (degree n + 1).
JvFlag jv_flag(const BiPoly& H);

}  // namespace isochk
