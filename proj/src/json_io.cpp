#include "coisocap/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace coisocap {

namespace {

std::vector<double> to_doubles(const json& j, const char* what) {
    if (!j.is_array()) throw std::invalid_argument(std::string(what) + ": expected an array");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw std::invalid_argument(std::string(what) + ": expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

Vec to_vec(const json& j, const char* what) {
    const auto d = to_doubles(j, what);
    return Eigen::Map<const Vec>(d.data(), static_cast<Eigen::Index>(d.size()));
}

json from_vec(const Vec& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

BodyPtr parse_body(const json& j, int ambient_dim, bool top_level) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw std::invalid_argument("body: expected an object with a \"type\" string");
    const std::string type = j["type"].get<std::string>();
    if (type == "ball") {
        if (!j.contains("r") || !j["r"].is_number())
            throw std::invalid_argument("ball: missing numeric \"r\"");
        int dim = top_level ? ambient_dim : 2;
        if (j.contains("dim")) dim = j["dim"].get<int>();
        if (dim < 2) throw std::invalid_argument("ball: unknown dimension (give \"dim\")");
        return make_ball(j["r"].get<double>(), dim);
    }
    if (type == "ellipsoid") {
        if (!j.contains("radii")) throw std::invalid_argument("ellipsoid: missing \"radii\"");
        return make_ellipsoid(to_doubles(j["radii"], "ellipsoid radii"));
    }
    if (type == "lp_ball") {
        if (!j.contains("p") || !j.contains("radii"))
            throw std::invalid_argument("lp_ball: missing \"p\" or \"radii\"");
        return make_lp_ball(j["p"].get<double>(), to_doubles(j["radii"], "lp_ball radii"));
    }
    if (type == "product") {
        if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].empty())
            throw std::invalid_argument("product: missing non-empty \"factors\"");
        std::vector<BodyPtr> fs;
        for (const auto& f : j["factors"]) fs.push_back(parse_body(f, -1, false));
        return make_product(std::move(fs));
    }
    if (type == "translate") {
        if (!j.contains("shift") || !j.contains("base"))
            throw std::invalid_argument("translate: missing \"shift\" or \"base\"");
        BodyPtr base = parse_body(j["base"], ambient_dim, top_level);
        const Vec shift = to_vec(j["shift"], "translate shift");
        if (shift.size() != base->dim())
            throw std::invalid_argument("translate: shift length must be 2n");
        return make_translate(base, shift);
    }
    throw std::invalid_argument("body: unknown type \"" + type + "\"");
}

}  // namespace

BodyPtr body_from_json(const json& j, int ambient_dim) {
    BodyPtr body = parse_body(j, ambient_dim, true);
    if (ambient_dim > 0 && body->dim() != ambient_dim)
        throw std::invalid_argument("body: dimension " + std::to_string(body->dim()) +
                                    " does not match the session dimension " +
                                    std::to_string(ambient_dim));
    return body;
}

json body_to_json(const Body& body) {
    switch (body.kind()) {
        case BodyKind::Ball: {
            const auto* p = as_ball(body);
            return {{"type", "ball"}, {"r", p->r}, {"dim", p->dim}};
        }
        case BodyKind::Ellipsoid: {
            const auto* p = as_ellipsoid(body);
            if (!p->has_plane_radii)
                throw std::invalid_argument("body_to_json: general ellipsoids have no schema");
            return {{"type", "ellipsoid"}, {"radii", p->plane_radii}};
        }
        case BodyKind::LpBall: {
            const auto* p = as_lp_ball(body);
            return {{"type", "lp_ball"}, {"p", p->p}, {"radii", p->plane_radii}};
        }
        case BodyKind::Product: {
            json factors = json::array();
            for (const auto& f : product_factors(body)) factors.push_back(body_to_json(*f));
            return {{"type", "product"}, {"factors", factors}};
        }
        case BodyKind::Translate: {
            auto [base, shift] = translate_parts(body);
            return {{"type", "translate"}, {"shift", from_vec(shift)}, {"base", body_to_json(*base)}};
        }
    }
    throw std::logic_error("body_to_json: unreachable");
}

json loop_to_json(const FourierLoop& loop) {
    const CoisoIndex& idx = loop.index();
    json a = json::array(), b = json::array();
    for (int m = -loop.truncation(); m <= loop.truncation(); ++m) {
        a.push_back(from_vec(loop.a(m)));
        b.push_back(from_vec(loop.b(m)));
    }
    return {{"n", idx.n}, {"k", idx.k}, {"M", loop.truncation()}, {"a", a}, {"b", b}};
}

FourierLoop loop_from_json(const json& j) {
    const CoisoIndex idx(j.at("n").get<int>(), j.at("k").get<int>());
    const int M = j.at("M").get<int>();
    FourierLoop loop(idx, M);
    const auto& a = j.at("a");
    const auto& b = j.at("b");
    if (!a.is_array() || !b.is_array() || static_cast<int>(a.size()) != 2 * M + 1 ||
        static_cast<int>(b.size()) != 2 * M + 1)
        throw std::invalid_argument("loop: coefficient arrays must have 2M+1 entries");
    for (int m = -M; m <= M; ++m) {
        loop.set_a(m, to_vec(a[m + M], "loop a"));
        loop.set_b(m, to_vec(b[m + M], "loop b"));
    }
    return loop;
}

json chord_to_json(const Chord& chord, bool include_samples) {
    json out = {{"action", chord.action},
                {"certified", chord.certified},
                {"residuals",
                 {{"ode", chord.ode_residual},
                  {"boundary", chord.boundary_residual},
                  {"gauge", chord.gauge_residual}}}};
    if (include_samples) {
        out["times"] = from_vec(chord.times);
        json pts = json::array();
        for (int i = 0; i < chord.points.rows(); ++i) pts.push_back(from_vec(chord.points.row(i)));
        out["points"] = pts;
    }
    return out;
}

std::string chord_to_csv(const Chord& chord) {
    std::ostringstream os;
    const int n = static_cast<int>(chord.points.cols()) / 2;
    os << "t";
    for (int i = 1; i <= n; ++i) os << ",q" << i;
    for (int i = 1; i <= n; ++i) os << ",p" << i;
    os << "\n";
    char buf[32];
    for (int r = 0; r < chord.points.rows(); ++r) {
        std::snprintf(buf, sizeof buf, "%.12g", chord.times(r));
        os << buf;
        for (int c = 0; c < chord.points.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.12g", chord.points(r, c));
            os << "," << buf;
        }
        os << "\n";
    }
    return os.str();
}

json spectrum_to_json(const Spectrum& sp) {
    json arr = json::array();
    for (const auto& e : sp.entries)
        arr.push_back({{"action", e.action}, {"label", e.label}, {"multiplicity", e.multiplicity}});
    return {{"spectrum", arr}};
}

std::string spectrum_to_csv(const Spectrum& sp) {
    std::ostringstream os;
    os << "action,label\n";
    char buf[32];
    for (const auto& e : sp.entries) {
        std::snprintf(buf, sizeof buf, "%.12g", e.action);
        os << buf << ",\"" << e.label << "\"\n";
    }
    return os.str();
}

json estimate_to_json(const CapacityEstimate& est, bool include_minimizer) {
    json out = {{"capacity", est.value},
                {"rayleigh_residual", est.rayleigh_residual},
                {"starts_agreeing", est.starts_agreeing},
                {"converged", est.converged},
                {"anchor", from_vec(est.anchor)}};
    if (include_minimizer) out["minimizer"] = loop_to_json(est.minimizer);
    return out;
}

json axiom_report_to_json(const AxiomReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"measured", c.measured},
                          {"lo", c.lo},
                          {"hi", c.hi},
                          {"pass", c.pass},
                          {"detail", c.detail}});
    return {{"all_pass", rep.all_pass}, {"checks", checks}};
}

double round_sig(double x, int digits) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return std::strtod(buf, nullptr);
}

}  // namespace coisocap
