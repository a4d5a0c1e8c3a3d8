#include "coisocap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "coisocap/spectrum.hpp"

namespace coisocap {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::vector<int> product_index_chain(int l0, const std::vector<int>& dims) {
    int total = 0;
    for (int d : dims) {
        if (d < 1) throw std::invalid_argument("product_index_chain: factor dims must be >= 1");
        total += d;
    }
    if (l0 < 0 || l0 > total)
        throw std::invalid_argument("product_index_chain: need 0 <= l0 <= sum of dims");
    std::vector<int> chain;
    chain.reserve(dims.size());
    int l = l0;
    for (std::size_t j = 0; j < dims.size(); ++j) {
        chain.push_back(l);
        l = std::max(l - dims[j], 0);
    }
    return chain;
}

std::vector<int> product_effective_indices(int l0, const std::vector<int>& dims) {
    std::vector<int> chain = product_index_chain(l0, dims);
    std::vector<int> ks(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) ks[i] = std::min(dims[i], chain[i]);
    return ks;
}

double product_capacity(const std::vector<std::pair<int, std::function<double(int)>>>& factors,
                        int l0) {
    std::vector<int> dims;
    dims.reserve(factors.size());
    for (const auto& f : factors) dims.push_back(f.first);
    const std::vector<int> ks = product_effective_indices(l0, dims);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < factors.size(); ++i)
        best = std::min(best, factors[i].second(ks[i]));
    return best;
}

double disc_capacity(double r, int kk) {
    if (!(r > 0)) throw std::invalid_argument("disc_capacity: radius must be positive");
    if (kk != 0 && kk != 1) throw std::invalid_argument("disc_capacity: kk must be 0 or 1");
    return kk == 1 ? kPi * r * r : 0.5 * kPi * r * r;
}

NontrivialityConstants nontriviality_constants(const CoisoIndex& idx) {
    if (idx.k >= idx.n)
        throw std::invalid_argument(
            "nontriviality_constants: defined for k < n (the full-index constants differ)");
    return {0.5 * kPi, 0.5 * kPi, 0.5 * kPi};
}

std::optional<double> closed_form_capacity(const Body& body, const CoisoIndex& idx) {
    if (body.dim() != idx.dim()) return std::nullopt;
    switch (body.kind()) {
        case BodyKind::Ball: {
            const auto* p = as_ball(body);
            return ellipsoid_min_action(std::vector<double>(idx.n, p->r), idx);
        }
        case BodyKind::Ellipsoid: {
            const auto* p = as_ellipsoid(body);
            if (!p->has_plane_radii) return std::nullopt;
            return ellipsoid_min_action(p->plane_radii, idx);
        }
        case BodyKind::Product: {
            const auto factors = product_factors(body);
            std::vector<std::pair<int, std::function<double(int)>>> evals;
            for (const auto& f : factors) {
                const int ni = f->dim() / 2;
                evals.emplace_back(ni, [f, ni](int ki) {
                    const CoisoIndex sub(ni, ki);
                    auto v = closed_form_capacity(*f, sub);
                    if (!v) throw std::domain_error("no closed form for factor");
                    return *v;
                });
            }
            try {
                return product_capacity(evals, idx.k);
            } catch (const std::domain_error&) {
                return std::nullopt;
            }
        }
        case BodyKind::Translate: {
            // invariant under translation along the coisotropic subspace
            auto [base, shift] = translate_parts(body);
            if ((shift - project(shift, Subspace::Rnk, idx)).lpNorm<Eigen::Infinity>() > 1e-9)
                return std::nullopt;
            return closed_form_capacity(*base, idx);
        }
        default:
            return std::nullopt;
    }
}

AxiomReport axiom_harness(BodyPtr body, const CoisoIndex& idx, const SolverOptions& opts,
                          const CapacityFn& eval_in) {
    if (!body) throw std::invalid_argument("axiom_harness: null body");
    CapacityFn eval = eval_in;
    if (!eval)
        eval = [](BodyPtr b, const CoisoIndex& i, const SolverOptions& o) {
            return minimize_capacity(b, i, o).value;
        };

    AxiomReport rep;
    rep.all_pass = true;
    auto add = [&](std::string name, double measured, double lo, double hi, std::string detail) {
        const bool pass = std::isfinite(measured) && measured >= lo && measured <= hi;
        rep.all_pass = rep.all_pass && pass;
        rep.checks.push_back({std::move(name), measured, lo, hi, pass, std::move(detail)});
    };
    const double nan = std::numeric_limits<double>::quiet_NaN();

    double base = nan;
    try {
        base = eval(body, idx, opts);
        add("base value positive", base, 1e-12, std::numeric_limits<double>::infinity(), "");
    } catch (const std::exception& e) {
        add("base value positive", nan, 1e-12, std::numeric_limits<double>::infinity(), e.what());
        return rep;  // nothing downstream is meaningful
    }

    try {
        const double up = eval(body->scaled(1.1), idx, opts);
        add("monotonicity (1.1x body)", up / base, 1.0 - 0.01, std::numeric_limits<double>::infinity(),
            "value(1.1 D) / value(D)");
    } catch (const std::exception& e) {
        add("monotonicity (1.1x body)", nan, 1.0, 2.0, e.what());
    }

    try {
        const double big = eval(body->scaled(2.0), idx, opts);
        add("conformality (lambda = 2)", big / base, 3.96, 4.04, "value(2 D) / value(D)");
    } catch (const std::exception& e) {
        add("conformality (lambda = 2)", nan, 3.96, 4.04, e.what());
    }

    try {
        // shift to the boundary distance along q_1, inside the coisotropic
        // subspace for every k
        Vec e1 = Vec::Unit(idx.dim(), 0);
        const double reach = 1.0 / body->gauge(e1);
        BodyPtr moved = make_translate(body, Vec(reach * e1));
        const double shifted = eval(moved, idx, opts);
        add("translation invariance", shifted / base, 0.99, 1.01,
            "value(D + w) / value(D), w = q_1 boundary shift");
    } catch (const std::exception& e) {
        add("translation invariance", nan, 0.99, 1.01, e.what());
    }

    return rep;
}

}  // namespace coisocap
