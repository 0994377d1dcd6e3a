#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isochk/bipoly.hpp"
#include "isochk/infinity.hpp"

namespace isochk {

/// Complex double evaluation of a polynomial and its gradient.
class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(const BiPoly& p);
    explicit CompiledPoly(const std::map<Exponent, Complex>& terms);
    Complex operator()(Complex x, Complex y) const;

private:
    struct Term {
        int i, j;
        Complex c;
    };
    std::vector<Term> terms_;
    int max_x_ = 0, max_y_ = 0;
};

struct FlowState {
    Complex x, y;
    double t = 0;
};

enum class Field { V, iV };

struct FlowOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double escape_radius = 1e6;
    double blowup_radius = 1e9;      // escapes are followed out to here to tell power-law blow-up apart
    double min_step = 1e-14;
    double conservation_tol = 1e-8;  // relative to 1 + |h|
    double return_radius = 0;        // 0: 0.1 * |start point|
    double t_max = 0;                // 0: 50 * 2 pi
    double h_max = 0.25;             // largest |h| accepted by the period code
    long max_steps = 5'000'000;
};

enum class StopReason { Completed, Escaped, StepUnderflow, MaxSteps };

struct Trajectory {
    std::vector<FlowState> states;  // accepted step endpoints, starting with z0
    StopReason stop = StopReason::Completed;
    double drift = 0;               // max |H - H(z0)| along the accepted steps
    long steps = 0;
};

/// Point on H = h near the vanishing cycle: the quadratic part sets the radius along the
/// direction theta, then Newton corrects y (x when dH/dy is nearly singular there).
FlowState initial_point_on_level(const BiPoly& H, Complex h, double theta);

/// Real-time integration of V = (-H_y, H_x) or iV from z0 until t_end (negative t_end runs backward).
Trajectory integrate(const BiPoly& H, Field field, const FlowState& z0, double t_end, const FlowOptions& opts = {});

struct PeriodSample {
    Complex h;
    Complex T;
    double drift = 0;
    long steps = 0;
};

/// Period of the vanishing cycle at level h. Throws std::runtime_error on failure.
PeriodSample period(const BiPoly& H, Complex h, const FlowOptions& opts = {});

enum class NumericVerdict { Isochronous, NonIsochronous, Inconclusive };
const char* to_string(NumericVerdict v);

struct SampleSet {
    std::vector<Complex> h;
    std::vector<std::optional<PeriodSample>> samples;  // parallel to h
    std::vector<std::string> errors;                   // parallel to h, empty on success
    NumericVerdict verdict = NumericVerdict::Inconclusive;
    double max_deviation = 0;                          // max |T_i - T_j| / |mean T|
};

/// `count` values of |h| log-spaced in [h_min, h_max] on each ray (angles in degrees).
std::vector<Complex> default_h_set(int count = 8, double h_min = 1e-3, double h_max = 1e-1,
                                   const std::vector<double>& rays_deg = {0.0});

/// Periods at every h (in parallel, at most `threads` workers; 0 reads ISOCHK_THREADS).
SampleSet sample_periods(const BiPoly& H, const std::vector<Complex>& hs, const FlowOptions& opts = {},
                         double iso_tol = 1e-6, int threads = 0);

enum class EscapeOutcome { Escaped, FiniteTimeBlowup, MaxTimeReached };
const char* to_string(EscapeOutcome o);

struct EscapeResult {
    FlowState start;
    bool backward = false;
    EscapeOutcome outcome = EscapeOutcome::MaxTimeReached;
    Complex dir_x, dir_y;        // escape direction, max(|dir_x|, |dir_y|) = 1
    int matched_point = -1;      // index into the infinity points
    double match_distance = 0;   // sine of the projective angle to the matched point
    double t = 0;                // time at which the escape radius (or t_max) was reached
    double t_blowup_est = 0;     // only for FiniteTimeBlowup
};

/// iV forward and backward from n_starts points spread over the cycle at level h.
std::vector<EscapeResult> escape_analysis(const BiPoly& H, Complex h, int n_starts, const FlowOptions& opts = {},
                                          double t_max = 200.0);

/// Sine of the angle between the complex lines through (x, y) and (bx, by).
double projective_distance(Complex x, Complex y, Complex bx, Complex by);

/// Worker count from ISOCHK_THREADS (default: hardware concurrency), at least 1.
int default_thread_count();

}  // namespace isochk
