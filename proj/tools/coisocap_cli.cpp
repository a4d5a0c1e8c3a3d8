// Command-line front end: body ingestion, capacity / spectrum / chord
// computation, axiom verification, machine-readable output.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "coisocap/capacity.hpp"
#include "coisocap/clarke_dual.hpp"
#include "coisocap/json_io.hpp"
#include "coisocap/spectrum.hpp"

using namespace coisocap;

namespace {

constexpr double kPi = 3.14159265358979323846;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open body file: " + path);
    json j;
    in >> j;
    return j;
}

json round_all(json j, int digits = 12) {
    if (j.is_number_float()) return round_sig(j.get<double>(), digits);
    if (j.is_object() || j.is_array())
        for (auto& el : j) el = round_all(el, digits);
    return j;
}

// Analytic minimal chord for bodies with a closed-form capacity: the
// minimizing planar chord of the active plane (full period when the whole
// plane lies in the coisotropic subspace, half period otherwise).
struct PlanarChordSpec {
    int plane = -1;  // global symplectic plane, 0-based
    double r = 0.0;
    bool full_period = false;
    Vec shift;
};

std::optional<PlanarChordSpec> analytic_min_chord(const Body& body, const CoisoIndex& idx) {
    auto from_radii = [&](const std::vector<double>& radii) {
        PlanarChordSpec spec;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < idx.n; ++i) {
            const double act = i < idx.k ? kPi * radii[i] * radii[i]
                                         : 0.5 * kPi * radii[i] * radii[i];
            if (act < best) {
                best = act;
                spec.plane = i;
                spec.r = radii[i];
                spec.full_period = i < idx.k;
            }
        }
        spec.shift = Vec::Zero(idx.dim());
        return spec;
    };
    switch (body.kind()) {
        case BodyKind::Ball:
            return from_radii(std::vector<double>(idx.n, as_ball(body)->r));
        case BodyKind::Ellipsoid: {
            const auto* p = as_ellipsoid(body);
            if (!p->has_plane_radii) return std::nullopt;
            return from_radii(p->plane_radii);
        }
        case BodyKind::Product: {
            const auto factors = product_factors(body);
            std::vector<int> dims;
            for (const auto& f : factors) dims.push_back(f->dim() / 2);
            const auto ks = product_effective_indices(idx.k, dims);
            int best_i = -1;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < factors.size(); ++i) {
                const auto v = closed_form_capacity(*factors[i], CoisoIndex(dims[i], ks[i]));
                if (v && *v < best) {
                    best = *v;
                    best_i = static_cast<int>(i);
                }
            }
            if (best_i < 0) return std::nullopt;
            auto sub =
                analytic_min_chord(*factors[best_i], CoisoIndex(dims[best_i], ks[best_i]));
            if (!sub) return std::nullopt;
            int off = 0;
            for (int i = 0; i < best_i; ++i) off += dims[i];
            sub->plane += off;
            sub->shift = Vec::Zero(idx.dim());
            return sub;
        }
        case BodyKind::Translate: {
            auto [base, shift] = translate_parts(body);
            auto sub = analytic_min_chord(*base, idx);
            if (!sub) return std::nullopt;
            sub->shift += shift;
            return sub;
        }
        default:
            return std::nullopt;
    }
}

Chord sample_planar_chord(const PlanarChordSpec& spec, const CoisoIndex& idx, int samples) {
    Chord chord;
    chord.times = Vec::LinSpaced(samples, 0.0, 1.0);
    chord.points = Mat::Zero(samples, idx.dim());
    const double omega = spec.full_period ? 2 * kPi : kPi;
    for (int j = 0; j < samples; ++j) {
        const double th = omega * chord.times(j);
        chord.points(j, spec.plane) = spec.r * std::cos(th);
        chord.points(j, idx.n + spec.plane) = -spec.r * std::sin(th);
        chord.points.row(j) += spec.shift.transpose();
    }
    chord.action = (spec.full_period ? kPi : 0.5 * kPi) * spec.r * spec.r;
    return chord;
}

int cmd_capacity(const std::string& body_file, int n, int k, SolverOptions opts, bool check,
                 const std::string& chord_csv, int chord_samples) {
    const CoisoIndex idx(n, k);
    BodyPtr body = body_from_json(load_json(body_file), idx.dim());

    const std::optional<double> closed = closed_form_capacity(*body, idx);
    json out;
    out["n"] = n;
    out["k"] = k;

    Chord chord;
    bool have_chord = false;
    double capacity = 0.0;

    if (closed && !check) {
        capacity = *closed;
        out["method"] = "closed_form";
        if (auto spec = analytic_min_chord(*body, idx)) {
            chord = sample_planar_chord(*spec, idx, chord_samples);
            const ChordReport rep = verify_chord(chord, *body, idx);
            chord.ode_residual = rep.ode_residual;
            chord.boundary_residual = rep.boundary_residual;
            chord.gauge_residual = rep.gauge_residual;
            chord.certified = rep.pass;
            have_chord = true;
        }
    } else {
        const CapacityEstimate est = minimize_capacity(body, idx, opts);
        capacity = est.value;
        out["method"] = closed ? "closed_form" : "clarke_dual";
        if (closed) {
            capacity = *closed;
            const double gap = std::abs(est.value - *closed) / std::max(*closed, 1e-300);
            out["diagnostics"]["check"] = {{"closed_form", *closed},
                                           {"solver", est.value},
                                           {"relative_gap", gap}};
            if (gap > 0.01) {
                std::cerr << "capacity check failed: closed form " << *closed << " vs solver "
                          << est.value << " (relative gap " << gap << ")\n";
                std::cout << round_all(out).dump(2) << "\n";
                return 3;
            }
        }
        chord = reconstruct_chord(est, body, idx, opts, chord_samples);
        have_chord = true;
        out["diagnostics"]["solver"] = estimate_to_json(est);
        out["diagnostics"]["solver"]["modes"] = opts.modes;
        out["diagnostics"]["solver"]["seed"] = opts.seed;
    }

    out["capacity"] = capacity;
    out["chord"] = have_chord ? chord_to_json(chord) : json(nullptr);

    if (!chord_csv.empty() && have_chord) {
        std::ofstream f(chord_csv);
        f << chord_to_csv(chord);
    }
    std::cout << round_all(out).dump(2) << "\n";
    return 0;
}

int cmd_spectrum(const std::string& body_file, bool planar, bool wdomain, double wd_N,
                 double wd_eps, double wd_d1, double wd_d2, int n, int k, double bound,
                 const std::string& format) {
    Spectrum sp;
    json extra;
    if (wdomain) {
        const WDomain dom = w_domain_curve(wd_N, wd_eps, wd_d1, wd_d2);
        sp = planar_chord_actions(dom.curve, bound);
        extra = {{"area", dom.area},
                 {"cap_action", dom.cap_action},
                 {"bottom_action", dom.bottom_action},
                 {"cap_surplus", dom.cap_surplus},
                 {"corner_area", dom.corner_area}};
    } else {
        const CoisoIndex idx(n, k);
        BodyPtr body = body_from_json(load_json(body_file), idx.dim());
        if (planar) {
            if (body->dim() != 2 || body->kind() != BodyKind::Ball)
                throw std::invalid_argument("planar spectrum: body must be a disc (2d ball)");
            sp = planar_chord_actions(PlanarCurve::circle(as_ball(*body)->r), bound);
        } else {
            const Body* core = body.get();
            BodyPtr base_keep = body;
            if (core->kind() == BodyKind::Translate) {
                auto [base, shift] = translate_parts(*core);
                base_keep = base;
                core = base.get();
                (void)shift;
            }
            std::vector<double> radii;
            if (core->kind() == BodyKind::Ball)
                radii.assign(idx.n, as_ball(*core)->r);
            else if (core->kind() == BodyKind::Ellipsoid && as_ellipsoid(*core)->has_plane_radii)
                radii = as_ellipsoid(*core)->plane_radii;
            else
                throw std::invalid_argument(
                    "spectrum: closed-form spectra exist for balls and per-plane ellipsoids "
                    "(use --planar for discs, --wdomain for the staircase family)");
            sp = ellipsoid_spectrum(radii, idx, bound);
        }
    }
    if (format == "csv") {
        std::cout << spectrum_to_csv(sp);
    } else {
        json out = spectrum_to_json(sp);
        if (!extra.is_null()) out["domain"] = extra;
        std::cout << round_all(out).dump(2) << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& body_file, int n, int k, SolverOptions opts) {
    const CoisoIndex idx(n, k);
    BodyPtr body = body_from_json(load_json(body_file), idx.dim());

    AxiomReport rep = axiom_harness(body, idx, opts);

    // chord certification on top of the axioms
    try {
        const CapacityEstimate est = minimize_capacity(body, idx, opts);
        const Chord chord = reconstruct_chord(est, body, idx, opts);
        const ChordReport cr = verify_chord(chord, *body, idx);
        rep.checks.push_back({"chord certification", cr.pass ? 1.0 : 0.0, 1.0, 1.0, cr.pass,
                              "gauge " + std::to_string(cr.gauge_residual) + ", boundary " +
                                  std::to_string(cr.boundary_residual) + ", ode " +
                                  std::to_string(cr.ode_residual)});
        rep.all_pass = rep.all_pass && cr.pass;
    } catch (const std::exception& e) {
        rep.checks.push_back({"chord certification", 0.0, 1.0, 1.0, false, e.what()});
        rep.all_pass = false;
    }

    std::ostringstream table;
    table << "check                          measured        interval              result\n";
    for (const auto& c : rep.checks) {
        char line[160];
        std::snprintf(line, sizeof line, "%-30s %-15.10g [%.4g, %.4g]  %s", c.name.c_str(),
                      c.measured, c.lo, c.hi, c.pass ? "pass" : "FAIL");
        table << line << "\n";
        if (!c.pass && !c.detail.empty()) table << "    " << c.detail << "\n";
    }
    std::cerr << table.str();
    std::cout << round_all(axiom_report_to_json(rep)).dump(2) << "\n";
    return rep.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coisotropic capacities of convex bodies via the dual action functional"};
    app.require_subcommand(1);

    std::string body_file, format = "json", chord_csv;
    int n = 1, k = 0, chord_samples = 0;
    double bound = 10.0;
    bool check = false, planar = false, wdomain = false;
    double wd_N = 3.0, wd_eps = 0.01, wd_d1 = -1.0, wd_d2 = -1.0;
    SolverOptions opts;

    auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--modes", opts.modes, "Fourier truncation M");
        cmd->add_option("--starts", opts.starts, "number of restarts");
        cmd->add_option("--seed", opts.seed, "random seed");
        cmd->add_option("--tol", opts.grad_tol, "gradient tolerance");
        cmd->add_option("--max-iters", opts.max_iters, "iteration cap per restart");
    };

    CLI::App* cap = app.add_subcommand("capacity", "capacity of a convex body");
    cap->add_option("--body", body_file, "body spec JSON file")->required();
    cap->add_option("--n", n, "half dimension")->required();
    cap->add_option("--k", k, "coisotropic index, 0 <= k <= n")->required();
    cap->add_flag("--check", check, "cross-check closed form against the solver");
    cap->add_option("--chord-csv", chord_csv, "write chord samples to CSV");
    cap->add_option("--chord-samples", chord_samples, "number of chord samples");
    add_solver_flags(cap);

    CLI::App* spec = app.add_subcommand("spectrum", "chord action spectrum");
    spec->add_option("--body", body_file, "body spec JSON file");
    spec->add_option("--n", n, "half dimension");
    spec->add_option("--k", k, "coisotropic index");
    spec->add_option("--bound", bound, "list actions up to this bound");
    spec->add_flag("--planar", planar, "planar arc spectrum of a disc");
    spec->add_flag("--wdomain", wdomain, "smoothed staircase domain spectrum");
    spec->add_option("--N", wd_N, "staircase box size");
    spec->add_option("--eps", wd_eps, "staircase smoothing parameter");
    spec->add_option("--delta1", wd_d1, "cap blend width inside");
    spec->add_option("--delta2", wd_d2, "cap blend width outside");
    spec->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    CLI::App* ver = app.add_subcommand("verify", "axiom and chord checks");
    ver->add_option("--body", body_file, "body spec JSON file")->required();
    ver->add_option("--n", n, "half dimension")->required();
    ver->add_option("--k", k, "coisotropic index")->required();
    add_solver_flags(ver);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cap->parsed()) return cmd_capacity(body_file, n, k, opts, check, chord_csv,
                                               chord_samples > 1 ? chord_samples : 513);
        if (spec->parsed()) {
            if (!wdomain && body_file.empty())
                throw std::invalid_argument("spectrum: give --body or --wdomain");
            return cmd_spectrum(body_file, planar, wdomain, wd_N, wd_eps, wd_d1, wd_d2, n, k,
                                bound, format);
        }
        if (ver->parsed()) return cmd_verify(body_file, n, k, opts);
    } catch (const json::parse_error& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
