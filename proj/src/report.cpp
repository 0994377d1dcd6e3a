#include "isochk/report.hpp"

#include <json.hpp>

#include "isochk/parser.hpp"

namespace isochk {

using nlohmann::json;

const char* to_string(Overall o) {
    switch (o) {
        case Overall::NotIsochronousTheorem2: return "not_isochronous_theorem2";
        case Overall::NotIsochronousNumeric: return "not_isochronous_numeric";
        case Overall::NumericallyIsochronous: return "numerically_isochronous_exact_checks_passed";
        case Overall::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

AnalysisReport partial_report(const BiPoly& H, const RunConfig& cfg, const Sections& which) {
    AnalysisReport r;
    r.config = cfg;
    r.hamiltonian = H;
    auto guarded = [&](const char* stage, auto&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            r.errors[stage] = e.what();
        }
    };

    if (which.normalize || which.infinity || which.escape || which.criteria || which.periods)
        guarded("normalize", [&] { r.morse = normalize(H); });
    if (which.theorem2) guarded("theorem2", [&] { r.theorem2 = theorem2_check(H); });

    // the chart and escape machinery expects the (u^2 + v^2)/2 form, so both use the normalized H
    if (r.morse) {
        const BiPoly& N = r.morse->normalized;
        if (which.infinity || which.criteria)
            guarded("infinity", [&] {
                InfinityOptions io;
                io.order = cfg.order;
                io.order_max = std::max(64, cfg.order);
                r.infinity = analyze_infinity(N, io);
            });
        if (which.escape && cfg.escape)
            guarded("escape", [&] {
                FlowOptions fo;
                fo.rtol = cfg.rtol;
                fo.atol = cfg.atol;
                r.escapes = escape_analysis(N, Complex(cfg.escape_h, 0), cfg.escape_starts, fo);
            });
        if (which.criteria && r.infinity) {
            const std::vector<EscapeResult> none;
            const auto& esc = r.escapes ? *r.escapes : none;
            r.linearity = linearity_check(*r.infinity, esc);
            r.k_check = k_one_check(*r.infinity, esc);
        }
    } else if (which.infinity || which.criteria || which.escape || which.periods) {
        if (!r.errors.count("normalize")) r.errors["normalize"] = "not run";
    }

    if (which.periods && cfg.numeric) {
        if (!r.morse)
            r.errors["periods"] = "skipped: no Morse center at the origin";
        else
            guarded("periods", [&] {
                FlowOptions fo;
                fo.rtol = cfg.rtol;
                fo.atol = cfg.atol;
                r.periods = sample_periods(H, default_h_set(cfg.samples, cfg.h_min, cfg.h_max, cfg.rays_deg), fo,
                                           cfg.iso_tol);
            });
    }
    if (which.singular)
        guarded("singular", [&] { r.singular = singular_points_on_critical_level(H, cfg.cluster_tol); });
    if (which.jv) r.jv = jv_flag(H);
    settle_overall(r);
    return r;
}

AnalysisReport combined_report(const BiPoly& H, const RunConfig& cfg) { return partial_report(H, cfg, Sections{}); }

AnalysisReport jacobian_report(const BiPoly& f, const BiPoly& g, const RunConfig& cfg) {
    AnalysisReport r;
    r.config = cfg;
    JacobianSection js;
    js.f = f;
    js.g = g;
    js.det = jacobian_det(f, g);
    js.bezout_bound = std::max(0, f.total_degree()) * std::max(0, g.total_degree());
    if (js.det.constant && !js.det.value.is_zero()) {
        try {
            js.corollary = corollary_verdict(accept_pair(f, g), cfg.cluster_tol);
        } catch (const std::exception& e) {
            r.errors["common_zeros"] = e.what();
        }
    } else {
        r.errors["jacobian"] = js.det.constant ? "Jacobian determinant is zero"
                                               : "Jacobian determinant is not constant: " + format_poly(js.det.det);
    }
    r.jacobian = js;
    return r;
}

AnalysisReport pair_report(const BiPoly& f, const BiPoly& g, const RunConfig& cfg) {
    AnalysisReport j = jacobian_report(f, g, cfg);
    if (j.errors.count("jacobian")) return j;
    AnalysisReport r = combined_report(induced_hamiltonian(accept_pair(f, g)), cfg);
    r.jacobian = j.jacobian;
    r.errors.insert(j.errors.begin(), j.errors.end());
    return r;
}

void settle_overall(AnalysisReport& r) {
    const bool t2_fails = r.theorem2 && !r.theorem2->passes;
    const NumericVerdict nv = r.periods ? r.periods->verdict : NumericVerdict::Inconclusive;
    r.contradiction = t2_fails && nv == NumericVerdict::Isochronous;
    if (t2_fails)
        r.overall = Overall::NotIsochronousTheorem2;
    else if (nv == NumericVerdict::NonIsochronous)
        r.overall = Overall::NotIsochronousNumeric;
    else if (nv == NumericVerdict::Isochronous && r.theorem2)
        r.overall = Overall::NumericallyIsochronous;
    else
        r.overall = Overall::Inconclusive;
}

namespace {

json cplx(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json exact(const GaussianRational& q) { return q.to_string(); }

template <class T, class F>
json opt(const std::optional<T>& v, F&& f) {
    return v ? f(*v) : json(nullptr);
}

json to_json(const RunConfig& c) {
    return json{{"command", c.command},
                {"hamiltonian", c.hamiltonian},
                {"f", c.f},
                {"g", c.g},
                {"samples", c.samples},
                {"h_min", c.h_min},
                {"h_max", c.h_max},
                {"rays_deg", c.rays_deg},
                {"order", c.order},
                {"rtol", c.rtol},
                {"atol", c.atol},
                {"iso_tol", c.iso_tol},
                {"cluster_tol", c.cluster_tol},
                {"numeric", c.numeric},
                {"escape", c.escape},
                {"escape_starts", c.escape_starts},
                {"escape_h", c.escape_h},
                {"output", c.output},
                {"format", c.format}};
}

json matrix(const Matrix2& m) {
    return json::array({json::array({exact(m[0][0]), exact(m[0][1])}), json::array({exact(m[1][0]), exact(m[1][1])})});
}

json to_json(const BranchDynamics& d) {
    return json{{"lambda", cplx(d.lambda)},
                {"lambda_exact", d.lambda_exact},
                {"lambda_h_free", d.lambda_h_free},
                {"k", d.k},
                {"class", to_string(d.flow_class)},
                {"petals", d.petals},
                {"omega_order", d.omega_order},
                {"h_independent", d.h_independent},
                {"ds_dt_terms_checked", d.ds_dt_terms_checked}};
}

json to_json(const PuiseuxBranch& b) {
    return json{{"p", b.p},
                {"q", b.q},
                {"truncation", b.truncation},
                {"terminating", b.terminating},
                {"coefficients", b.coeff_text},
                {"coeff_h_degree", b.coeff_h_degree},
                {"c0", cplx(b.c0_numeric)},
                {"conjugates", b.conjugacy_class_size},
                {"tower", b.tower},
                {"residual_zero", b.residual_zero},
                {"residual_checked_through", b.residual_checked_through},
                {"dynamics", opt(b.dynamics, [](const BranchDynamics& d) { return to_json(d); })}};
}

json to_json(const InfinityPoint& p) {
    json branches = json::array();
    for (const auto& b : p.branches) branches.push_back(to_json(b));
    return json{{"index", p.index},
                {"direction", json{{"beta", cplx(p.beta)}, {"alpha", cplx(p.alpha)}}},
                {"exact_direction",
                 opt(p.exact, [](const ExactDirection& d) { return json::array({exact(d.beta), exact(d.alpha)}); })},
                {"minimal_polynomial", opt(p.minimal, [](const UniPoly& u) { return json(format_unipoly(u, "t")); })},
                {"multiplicity", p.multiplicity},
                {"chart", opt(p.chart, [](const LinearChart& c) { return matrix(c.to_chart); })},
                {"analyzed", p.analyzed},
                {"error", p.error.empty() ? json(nullptr) : json(p.error)},
                {"branches", branches}};
}

json to_json(const EscapeResult& e) {
    return json{{"start", json{{"x", cplx(e.start.x)}, {"y", cplx(e.start.y)}}},
                {"backward", e.backward},
                {"outcome", to_string(e.outcome)},
                {"direction", json{{"x", cplx(e.dir_x)}, {"y", cplx(e.dir_y)}}},
                {"matched_point", e.matched_point},
                {"match_distance", e.match_distance},
                {"t", e.t},
                {"t_blowup_est", e.outcome == EscapeOutcome::FiniteTimeBlowup ? json(e.t_blowup_est) : json(nullptr)},
                {"heuristic", e.outcome == EscapeOutcome::FiniteTimeBlowup}};
}

json to_json(const LinearityResult& l) {
    json v = json::array();
    for (const auto& w : l.violations)
        v.push_back(json{{"point", w.point}, {"branch", w.branch}, {"coefficient", w.coefficient}, {"accessible", w.accessible}});
    return json{{"status", to_string(l.status)},
                {"verdict", l.status == LinearityStatus::Violated ? "violated_on_accessible_branch" : to_string(l.status)},
                {"violations", v},
                {"unanalyzed_points", l.unanalyzed_points},
                {"accessibility", "escape_experiment"}};
}

json to_json(const KCheckResult& k) {
    return json{{"status", to_string(k.status)},
                {"checked_points", k.checked_points},
                {"witnesses", k.witnesses},
                {"accessibility", "escape_experiment"}};
}

json to_json(const SampleSet& s) {
    json rows = json::array();
    for (std::size_t i = 0; i < s.h.size(); ++i) {
        const auto& smp = s.samples[i];
        rows.push_back(json{{"h", cplx(s.h[i])},
                            {"T", smp ? cplx(smp->T) : json(nullptr)},
                            {"drift", smp ? json(smp->drift) : json(nullptr)},
                            {"error", s.errors[i].empty() ? json(nullptr) : json(s.errors[i])}});
    }
    return json{{"samples", rows}, {"verdict", to_string(s.verdict)}, {"max_deviation", s.max_deviation}};
}

json to_json(const std::vector<SingularPoint>& pts) {
    json arr = json::array();
    int on = 0;
    for (const auto& p : pts) {
        on += p.on_L0;
        arr.push_back(json{{"x", cplx(p.x)},
                           {"y", cplx(p.y)},
                           {"exact_x", opt(p.exact_x, exact)},
                           {"exact_y", opt(p.exact_y, exact)},
                           {"value", cplx(p.value)},
                           {"exact_value", opt(p.exact_value, exact)},
                           {"on_L0", p.on_L0}});
    }
    return json{{"points", arr}, {"single_singularity_on_L0", on == 1}};
}

json to_json(const SystemSolution& z) {
    json arr = json::array();
    for (const auto& r : z.roots)
        arr.push_back(json{{"x", cplx(r.x)},
                           {"y", cplx(r.y)},
                           {"exact_x", opt(r.exact_x, exact)},
                           {"exact_y", opt(r.exact_y, exact)},
                           {"multiplicity", r.multiplicity}});
    return json{{"points", arr}, {"ambiguous", z.ambiguous}};
}

json to_json(const JacobianSection& j) {
    return json{{"f", format_poly(j.f)},
                {"g", format_poly(j.g)},
                {"determinant", format_poly(j.det.det)},
                {"constant", j.det.constant},
                {"bezout_bound", j.bezout_bound},
                {"common_zeros", opt(j.corollary, [](const CorollaryVerdict& v) { return to_json(v.zeros); })},
                {"corollary", opt(j.corollary, [](const CorollaryVerdict& v) { return json(to_string(v.status)); })},
                {"note", "criterion_met holds exactly when the map (f, g) is a global homeomorphism of C^2"}};
}

}  // namespace

std::string report_to_json(const AnalysisReport& r) {
    json j;
    j["schema"] = "isochk/1";
    j["config"] = to_json(r.config);
    j["hamiltonian"] = opt(r.hamiltonian, [](const BiPoly& p) { return json(format_poly(p)); });
    j["morse"] = opt(r.morse, [](const MorseForm& m) {
        return json{{"normalized", format_poly(m.normalized)}, {"change", matrix(m.change)}, {"scale", exact(m.scale)}};
    });
    j["theorem2"] = opt(r.theorem2, [](const Theorem2Result& t) {
        return json{{"verdict", t.passes ? "passes_theorem2" : "fails_theorem2"},
                    {"max_multiplicity", t.max_multiplicity},
                    {"degree", t.degree},
                    {"comparison", t.comparison()}};
    });
    j["infinity"] = opt(r.infinity, [](const std::vector<InfinityPoint>& pts) {
        json a = json::array();
        for (const auto& p : pts) a.push_back(to_json(p));
        return a;
    });
    j["escape"] = opt(r.escapes, [](const std::vector<EscapeResult>& es) {
        json a = json::array();
        for (const auto& e : es) a.push_back(to_json(e));
        return a;
    });
    j["linearity"] = opt(r.linearity, [](const LinearityResult& l) { return to_json(l); });
    j["k_check"] = opt(r.k_check, [](const KCheckResult& k) { return to_json(k); });
    j["periods"] = opt(r.periods, [](const SampleSet& s) { return to_json(s); });
    j["singular"] = opt(r.singular, [](const std::vector<SingularPoint>& s) { return to_json(s); });
    j["jv_flag"] = opt(r.jv, [](JvFlag f) {
        return json{{"status", to_string(f)}, {"strength", "conjectural"}};
    });
    j["jacobian"] = opt(r.jacobian, [](const JacobianSection& s) { return to_json(s); });
    j["overall"] = to_string(r.overall);
    j["contradiction"] = r.contradiction;
    j["errors"] = r.errors;
    return j.dump(2) + "\n";
}

}  // namespace isochk
