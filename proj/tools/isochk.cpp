// isochk: command-line front end. Exit codes: 0 ok, 2 parse error, 3 degenerate input, 4 numeric failure.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "isochk/parser.hpp"
#include "isochk/report.hpp"

using namespace isochk;

namespace {

constexpr int kOk = 0, kParse = 2, kDegenerate = 3, kNumeric = 4;

struct Failure {
    int code;
    std::string message;
};

BiPoly parse_or_fail(const std::string& what, const std::string& text) {
    if (text.empty()) throw Failure{kParse, what + ": missing polynomial"};
    try {
        return parse_poly(text);
    } catch (const ParseError& e) {
        throw Failure{kParse, what + ": " + e.what()};
    }
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cnum(Complex z) {
    std::ostringstream s;
    s << num(z.real()) << (z.imag() < 0 ? " - " : " + ") << num(std::abs(z.imag())) << "i";
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure{kNumeric, "cannot write " + path};
    out << text;
}

std::string periods_csv(const SampleSet& s) {
    std::string out = "h_re,h_im,T_re,T_im,drift\n";
    for (std::size_t i = 0; i < s.h.size(); ++i) {
        out += num(s.h[i].real()) + "," + num(s.h[i].imag()) + ",";
        if (s.samples[i])
            out += num(s.samples[i]->T.real()) + "," + num(s.samples[i]->T.imag()) + "," + num(s.samples[i]->drift);
        else
            out += ",,";
        out += "\n";
    }
    return out;
}

std::string theorem2_line(const Theorem2Result& t) {
    if (!t.passes) return "FAILS Theorem 2: max multiplicity " + t.comparison() + " ⇒ not isochronous";
    return "passes Theorem 2: max multiplicity " + t.comparison() + " (necessary condition only; inconclusive)";
}

std::string text_summary(const AnalysisReport& r) {
    std::ostringstream o;
    if (r.hamiltonian) o << "H = " << format_poly(*r.hamiltonian) << "\n";
    if (r.morse && r.morse->scale != GaussianRational(1))
        o << "normalized: " << format_poly(r.morse->normalized) << " (scale " << r.morse->scale.to_string() << ")\n";
    if (r.theorem2) o << theorem2_line(*r.theorem2) << "\n";
    if (r.infinity) {
        for (const auto& p : *r.infinity) {
            o << "point at infinity " << p.index << ": [" << cnum(p.beta) << " : " << cnum(p.alpha)
              << "], multiplicity " << p.multiplicity;
            if (!p.error.empty()) o << ", not analyzed: " << p.error;
            o << "\n";
            for (const auto& b : p.branches) {
                o << "  branch p=" << b.p << " q=" << b.q << " c0 = " << (b.coeff_text.empty() ? "?" : b.coeff_text[0]);
                if (b.dynamics)
                    o << "; k=" << b.dynamics->k << " " << to_string(b.dynamics->flow_class) << ", omega order "
                      << b.dynamics->omega_order;
                o << "\n";
            }
        }
    }
    if (r.linearity) {
        o << "linearity diagnostic: " << to_string(r.linearity->status);
        if (!r.linearity->violations.empty()) o << " (" << r.linearity->violations.size() << " witnesses)";
        o << " [accessibility from the escape experiment]\n";
    }
    if (r.k_check) o << "k = 1 check: " << to_string(r.k_check->status) << "\n";
    if (r.periods) {
        o << "periods: " << to_string(r.periods->verdict) << ", max relative deviation " << num(r.periods->max_deviation)
          << "\n";
        for (std::size_t i = 0; i < r.periods->h.size(); ++i) {
            o << "  h = " << cnum(r.periods->h[i]) << ": ";
            if (r.periods->samples[i])
                o << "T = " << cnum(r.periods->samples[i]->T);
            else
                o << "failed: " << r.periods->errors[i];
            o << "\n";
        }
    }
    if (r.singular) {
        int on = 0;
        for (const auto& p : *r.singular) {
            on += p.on_L0;
            o << "critical point (" << (p.exact_x ? p.exact_x->to_string() : cnum(p.x)) << ", "
              << (p.exact_y ? p.exact_y->to_string() : cnum(p.y)) << "), H = "
              << (p.exact_value ? p.exact_value->to_string() : cnum(p.value)) << (p.on_L0 ? " on L0" : "") << "\n";
        }
        o << "single singularity on L0: " << (on == 1 ? "yes" : "no") << "\n";
    }
    if (r.jv) o << "JV flag: " << to_string(*r.jv) << " (conjectural)\n";
    if (r.jacobian) {
        const auto& j = *r.jacobian;
        if (!j.det.constant)
            o << "Jacobian not constant: " << format_poly(j.det.det) << "\n";
        else if (j.corollary)
            o << "Jacobian constant " << j.det.value.to_string() << "; common zeros: " << j.corollary->zeros.roots.size()
              << "; Corollary criterion: "
              << (j.corollary->status == CorollaryStatus::CriterionMet       ? "met"
                  : j.corollary->status == CorollaryStatus::CriterionViolated ? "violated"
                                                                              : "undetermined")
              << "\n";
    }
    if (r.theorem2 || r.periods) {
        o << "overall: " << to_string(r.overall) << "\n";
        if (r.contradiction) o << "WARNING: Theorem 2 fails but the sampled periods agree; check tolerances\n";
    }
    for (const auto& [stage, msg] : r.errors) o << "error [" << stage << "]: " << msg << "\n";
    return o.str();
}

int exit_code(const AnalysisReport& r, const RunConfig& cfg) {
    auto has = [&](const char* s) { return r.errors.count(s) > 0; };
    if (has("jacobian") || has("common_zeros") || has("singular") || has("normalize")) return kDegenerate;
    if (has("periods") || has("escape") || has("infinity")) return kNumeric;
    if (r.periods && cfg.numeric) {
        bool any = false;
        for (const auto& s : r.periods->samples) any = any || s.has_value();
        if (!any) return kNumeric;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"isochk: isochronicity checks for polynomial Hamiltonian centers"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string json_out, csv_out;
    bool no_escape = false;

    auto add_common = [&](CLI::App* sub, bool pair) {
        if (pair) {
            sub->add_option("--f", cfg.f, "first component of the pair");
            sub->add_option("--g", cfg.g, "second component of the pair");
        }
        sub->add_option("-H,--hamiltonian", cfg.hamiltonian, "polynomial in x, y, e.g. \"1/2*x^2+1/2*y^2+x^3\"");
        sub->add_option("--json", json_out, "write the JSON report here (- for stdout)");
        sub->add_option("--cluster-tol", cfg.cluster_tol, "root clustering tolerance")->capture_default_str();
    };
    auto add_numeric = [&](CLI::App* sub) {
        sub->add_option("--samples", cfg.samples, "|h| values per ray")->capture_default_str()->check(CLI::Range(2, 100000));
        sub->add_option("--h-min", cfg.h_min, "smallest |h|")->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--h-max", cfg.h_max, "largest |h|")->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--ray", cfg.rays_deg, "argument of h in degrees (repeatable)")->capture_default_str();
        sub->add_option("--iso-tol", cfg.iso_tol, "relative period spread counted as isochronous")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        sub->add_option("--rtol", cfg.rtol, "integrator relative tolerance")->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--atol", cfg.atol, "integrator absolute tolerance")->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--csv", csv_out, "write h_re,h_im,T_re,T_im,drift rows here (- for stdout)");
    };
    auto add_infinity = [&](CLI::App* sub) {
        sub->add_option("--order", cfg.order, "Puiseux truncation order M")->capture_default_str()->check(CLI::Range(1, 256));
        sub->add_flag("--no-escape", no_escape, "skip the iV escape experiment");
        sub->add_option("--escape-starts", cfg.escape_starts, "escape starting points on the cycle")->capture_default_str();
        sub->add_option("--escape-h", cfg.escape_h, "level used for the escape experiment")->capture_default_str();
    };

    auto* analyze = app.add_subcommand("analyze", "full report: criteria, points at infinity, periods, census");
    add_common(analyze, true);
    add_numeric(analyze);
    add_infinity(analyze);
    auto* period = app.add_subcommand("period", "period function samples");
    add_common(period, false);
    add_numeric(period);
    auto* infinity = app.add_subcommand("infinity", "points at infinity, Puiseux branches and flow classes");
    add_common(infinity, false);
    add_infinity(infinity);
    auto* necessary = app.add_subcommand("necessary", "exact necessary conditions and diagnostics");
    add_common(necessary, false);
    add_infinity(necessary);
    auto* jacobian = app.add_subcommand("jacobian", "Jacobian pair: determinant, common zeros, intersection criterion");
    jacobian->add_option("--f", cfg.f, "first component")->required();
    jacobian->add_option("--g", cfg.g, "second component")->required();
    jacobian->add_option("--json", json_out, "write the JSON report here (- for stdout)");
    jacobian->add_option("--cluster-tol", cfg.cluster_tol, "root clustering tolerance")->capture_default_str();
    auto* singular = app.add_subcommand("singular", "critical points and the critical level L0");
    add_common(singular, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParse;
    }
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    cfg.escape = !no_escape;
    cfg.output = json_out;
    cfg.format = !json_out.empty() ? "json" : !csv_out.empty() ? "csv" : "text";

    try {
        AnalysisReport r;
        if (sub == jacobian) {
            r = jacobian_report(parse_or_fail("--f", cfg.f), parse_or_fail("--g", cfg.g), cfg);
        } else if (sub == analyze && cfg.hamiltonian.empty() && (!cfg.f.empty() || !cfg.g.empty())) {
            r = pair_report(parse_or_fail("--f", cfg.f), parse_or_fail("--g", cfg.g), cfg);
        } else {
            const BiPoly H = parse_or_fail("--hamiltonian", cfg.hamiltonian);
            Sections s;
            if (sub == period) s = {true, false, false, false, false, true, false, false};
            if (sub == infinity) s = {true, false, true, true, false, false, false, false};
            if (sub == necessary) s = {true, true, true, true, true, false, true, true};
            if (sub == singular) s = {false, false, false, false, false, false, true, false};
            r = partial_report(H, cfg, s);
        }

        if (!json_out.empty()) write_file(json_out, report_to_json(r));
        if (!csv_out.empty() && r.periods) write_file(csv_out, periods_csv(*r.periods));
        if (json_out != "-" && csv_out != "-") std::cout << text_summary(r);
        return exit_code(r, cfg);
    } catch (const Failure& f) {
        std::cerr << "isochk: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "isochk: " << e.what() << "\n";
        return kNumeric;
    }
}
