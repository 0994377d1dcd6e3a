#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isochk/criteria.hpp"
#include "isochk/flow.hpp"
#include "isochk/infinity.hpp"
#include "isochk/jacobian.hpp"

namespace isochk {

/// Everything that determines a report. Thread count is deliberately absent: it never changes results.
struct RunConfig {
    std::string command = "analyze";
    std::string hamiltonian;
    std::string f, g;
    int samples = 8;  // per ray
    double h_min = 1e-3;
    double h_max = 1e-1;
    std::vector<double> rays_deg{0.0};
    int order = 16;  // Puiseux truncation M
    double rtol = 1e-10;
    double atol = 1e-12;
    double iso_tol = 1e-6;
    double cluster_tol = 1e-8;
    bool numeric = true;  // period sampling
    bool escape = true;   // iV escape experiment (cycle accessibility)
    int escape_starts = 8;
    double escape_h = 0.01;
    std::string output;
    std::string format = "text";
};

enum class Overall { NotIsochronousTheorem2, NotIsochronousNumeric, NumericallyIsochronous, Inconclusive };
const char* to_string(Overall o);

struct JacobianSection {
    BiPoly f, g;
    JacobianDet det;
    std::optional<CorollaryVerdict> corollary;
    int bezout_bound = 0;
};

struct AnalysisReport {
    RunConfig config;
    std::optional<BiPoly> hamiltonian;
    std::optional<MorseForm> morse;
    std::optional<Theorem2Result> theorem2;
    std::optional<std::vector<InfinityPoint>> infinity;
    std::optional<std::vector<EscapeResult>> escapes;
    std::optional<LinearityResult> linearity;
    std::optional<KCheckResult> k_check;
    std::optional<SampleSet> periods;
    std::optional<std::vector<SingularPoint>> singular;
    std::optional<JvFlag> jv;
    std::optional<JacobianSection> jacobian;
    Overall overall = Overall::Inconclusive;
    bool contradiction = false;                // theorem 2 fails yet the periods look constant
    std::map<std::string, std::string> errors;  // stage -> message
};

/// normalize, infinity analysis and criteria on the normalized H, period sampling on H itself.
/// A failing stage is recorded in `errors`; stages that do not depend on it still run.
AnalysisReport combined_report(const BiPoly& H, const RunConfig& cfg);

/// Only the Jacobian section: determinant, common zeros, intersection criterion.
AnalysisReport jacobian_report(const BiPoly& f, const BiPoly& g, const RunConfig& cfg);

/// Jacobian section for (f, g), then the combined report of (f^2 + g^2)/2 when the pair is accepted.
AnalysisReport pair_report(const BiPoly& f, const BiPoly& g, const RunConfig& cfg);

/// Only the selected sections; used by the single-purpose subcommands.
struct Sections {
    bool normalize = true, theorem2 = true, infinity = true, escape = true, criteria = true, periods = true,
         singular = true, jv = true;
};
AnalysisReport partial_report(const BiPoly& H, const RunConfig& cfg, const Sections& which);

/// Sets `overall` and `contradiction` from the sections present.
void settle_overall(AnalysisReport& r);

/// Stable JSON (sorted keys, 2-space indent, trailing newline).
std::string report_to_json(const AnalysisReport& r);

}  // namespace isochk
