#include "coisocap/clarke_dual.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace coisocap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec pick_anchor(const Body& body, const CoisoIndex& idx) {
    const Vec c = body.center();
    if (c.size() != idx.dim())
        throw std::invalid_argument("solver: body dimension does not match the index");
    if ((c - project(c, Subspace::Rnk, idx)).lpNorm<Eigen::Infinity>() > 1e-9)
        throw std::invalid_argument(
            "solver: body center must lie in the coisotropic subspace (shift invariant only "
            "along it)");
    // prefer the origin so translated inputs are solved as genuinely
    // translated problems; fall back toward the center until the anchor is
    // safely interior
    for (double beta : {0.0, 0.5, 1.0}) {
        Vec a = beta * c;
        if (body.gauge(a) <= 0.95) return a;
    }
    throw std::invalid_argument("solver: no interior anchor found on the center segment");
}

}  // namespace

DualProblem::DualProblem(BodyPtr body, CoisoIndex idx, int modes, int quad_per_mode,
                         const Vec* anchor)
    : body_(std::move(body)), idx_(idx), grid_(idx, modes, quad_per_mode * modes) {
    if (!body_) throw std::invalid_argument("DualProblem: null body");
    anchor_ = anchor ? *anchor : pick_anchor(*body_, idx_);
}

double DualProblem::dual_value(const Vec& packed) const {
    const Mat V = grid_.neg_J_velocity(packed);
    const Vec& w = grid_.weights();
    double I = 0.0;
    for (int j = 0; j < V.rows(); ++j) {
        const Vec v = V.row(j);
        const double h = std::max(body_->support(v) - anchor_.dot(v), 0.0);
        I += w(j) * 0.25 * h * h;
    }
    return I;
}

Vec DualProblem::dual_gradient(const Vec& packed) const {
    const Mat V = grid_.neg_J_velocity(packed);
    const Vec& w = grid_.weights();
    Mat G(V.rows(), V.cols());
    for (int j = 0; j < V.rows(); ++j) {
        const Vec v = V.row(j);
        const double h = std::max(body_->support(v) - anchor_.dot(v), 0.0);
        G.row(j) = (w(j) * 0.5 * h) * (body_->grad_support(v).g - anchor_).transpose();
    }
    return grid_.neg_J_velocity_adjoint(G);
}

double DualProblem::ratio(const Vec& packed, Vec* grad) const {
    const double A = grid_.action(packed);
    if (!(A > 0.0) || !std::isfinite(A)) return kInf;
    const Mat V = grid_.neg_J_velocity(packed);
    const Vec& w = grid_.weights();
    double I = 0.0;
    Mat G;
    if (grad) G.resize(V.rows(), V.cols());
    for (int j = 0; j < V.rows(); ++j) {
        const Vec v = V.row(j);
        const double h = std::max(body_->support(v) - anchor_.dot(v), 0.0);
        I += w(j) * 0.25 * h * h;
        if (grad) G.row(j) = (w(j) * 0.5 * h) * (body_->grad_support(v).g - anchor_).transpose();
    }
    const double rho = I / A;
    if (grad) {
        const Vec gI = grid_.neg_J_velocity_adjoint(G);
        *grad = (gI - rho * grid_.action_gradient(packed)) / A;
    }
    return rho;
}

double dual_functional(const FourierLoop& w, const Body& body) {
    // anchoring at the body's own center reproduces the centered dual
    // integrand; the linear term integrates to zero over admissible loops
    CoisoIndex idx = w.index();
    BodyPtr keep(&body, [](const Body*) {});
    Vec anchor = body.center();
    DualProblem prob(keep, idx, w.truncation(), 16, &anchor);
    return prob.dual_value(w.packed());
}

std::pair<double, Vec> dual_functional_with_gradient(const FourierLoop& w, BodyPtr body) {
    Vec anchor = body->center();
    DualProblem prob(body, w.index(), w.truncation(), 16, &anchor);
    const Vec packed = w.packed();
    return {prob.dual_value(packed), prob.dual_gradient(packed)};
}

namespace {

struct RestartResult {
    double value = kInf;
    Vec packed;
    double grad_norm = kInf;
    bool converged = false;
    bool feasible = false;
};

// Limited-memory BFGS with Armijo backtracking on the scale-invariant
// ratio.  The iterate is kept near the action-1 slice so the gradient-norm
// stopping criterion has a fixed scale.
RestartResult run_descent(const DualProblem& prob, Vec c, const SolverOptions& opts) {
    RestartResult out;
    const LoopGrid& grid = prob.grid();
    double A = grid.action(c);
    if (!(A > 0.0)) return out;
    c /= std::sqrt(A);

    std::deque<Vec> S, Y;
    const int mem = 10;
    Vec g;
    double rho = prob.ratio(c, &g);
    if (!std::isfinite(rho)) return out;

    int it = 0;
    double best_rho = rho;
    int no_progress = 0;
    for (; it < opts.max_iters; ++it) {
        const double gn = g.norm();
        if (gn <= opts.grad_tol) {
            out.converged = true;
            break;
        }
        // two-loop recursion
        Vec q = g;
        std::vector<double> alpha(S.size());
        for (int i = static_cast<int>(S.size()) - 1; i >= 0; --i) {
            alpha[i] = S[i].dot(q) / Y[i].dot(S[i]);
            q -= alpha[i] * Y[i];
        }
        q *= S.empty() ? 1.0 / std::max(gn, 1.0) : S.back().dot(Y.back()) / Y.back().squaredNorm();
        for (std::size_t i = 0; i < S.size(); ++i) {
            const double beta = Y[i].dot(q) / Y[i].dot(S[i]);
            q += (alpha[i] - beta) * S[i];
        }
        Vec p = -q;
        double d0 = p.dot(g);
        if (d0 >= 0.0) {
            p = -g;
            d0 = -gn * gn;
        }
        // Armijo with a roundoff allowance so progress can continue down to
        // the floating-point floor of the quadrature sums
        const double noise = 1e-14 * (1.0 + std::abs(rho));
        double step = 1.0;
        bool accepted = false;
        Vec cn, gn2;
        double rn = 0.0;
        for (int ls = 0; ls < 60; ++ls) {
            cn = c + step * p;
            rn = prob.ratio(cn, &gn2);
            if (std::isfinite(rn) && rn <= rho + 1e-4 * step * d0 + noise) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // line search stalled (typically at a kink)
        if (rn < best_rho - noise) {
            best_rho = rn;
            no_progress = 0;
        } else if (++no_progress >= 64) {
            c = cn;
            rho = rn;
            g = gn2;
            break;  // wandering on the roundoff floor
        }
        const Vec s = cn - c, y = gn2 - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            S.push_back(s);
            Y.push_back(y);
            if (static_cast<int>(S.size()) > mem) {
                S.pop_front();
                Y.pop_front();
            }
        }
        c = cn;
        rho = rn;
        g = gn2;
        if ((it + 1) % 64 == 0) {
            const double An = grid.action(c);
            if (std::abs(An - 1.0) > 0.25) {
                c /= std::sqrt(An);
                S.clear();
                Y.clear();
                rho = prob.ratio(c, &g);
            }
        }
    }

    c /= std::sqrt(grid.action(c));
    rho = prob.ratio(c, &g);
    out.feasible = std::isfinite(rho);
    out.value = rho;
    out.packed = c;
    out.grad_norm = g.norm();
    out.converged = out.converged || out.grad_norm <= opts.grad_tol;
    return out;
}

// Zero near-vanishing coefficients and re-polish.  The ratio is kinked in
// directions where the support integrand is not differentiable (product
// bodies); descent can stall with tiny residual blocks that the selection
// gradient cannot remove.  Hard-thresholding lands exactly on the kink,
// where the selected gradient is stationary.
RestartResult shrink_and_polish(const DualProblem& prob, RestartResult r,
                                const SolverOptions& opts) {
    if (!r.feasible || r.packed.size() == 0) return r;
    const double thresh = 1e-8 * r.packed.lpNorm<Eigen::Infinity>();
    Vec trimmed = r.packed;
    bool any = false;
    for (int i = 0; i < trimmed.size(); ++i)
        if (trimmed(i) != 0.0 && std::abs(trimmed(i)) < thresh) {
            trimmed(i) = 0.0;
            any = true;
        }
    if (!any) return r;
    const double rho_trim = prob.ratio(trimmed);
    if (!(rho_trim <= r.value * (1.0 + 1e-12))) return r;
    SolverOptions polish = opts;
    polish.max_iters = std::max(200, opts.max_iters / 4);
    RestartResult p = run_descent(prob, trimmed, polish);
    return (p.feasible && p.value <= r.value * (1.0 + 1e-12)) ? p : r;
}

Vec seeded_start(const LoopGrid& grid, const CoisoIndex& idx, int restart,
                 const SolverOptions& opts) {
    const int na = idx.dim_v0(), nb = idx.dim_v1(), nm = 2 * grid.truncation();
    Vec c = Vec::Zero(grid.packed_size());
    const bool want_a = restart == 0 && na > 0;
    const bool want_b = nb > 0 && ((restart == 0 && na == 0) || (restart == 1 && na > 0));
    if (want_a) {
        // pure half-period circle: exact minimizer for round bodies
        c.segment(0, na).setConstant(1.0 / std::sqrt(double(na)));
        return c;
    }
    if (want_b) {
        // pure full-period circle spread over the symplectic planes
        Vec u = Vec::Zero(nb);
        for (int i = 0; i < idx.k; ++i) u(i) = 1.0 / std::sqrt(double(idx.k));
        c.segment(nm * na, nb) = u;
        return c;
    }
    std::mt19937_64 rng(opts.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(restart + 1));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < nm; ++i) {
        const double decay = 1.0 / double(std::abs(packed_mode(i)) * std::abs(packed_mode(i)));
        for (int s = 0; s < na; ++s) c(i * na + s) = decay * gauss(rng);
        for (int s = 0; s < nb; ++s) c(nm * na + i * nb + s) = decay * gauss(rng);
    }
    if (grid.action(c) <= 0.0) {
        // drop the negative-frequency half; what remains has positive action
        for (int i = 0; i < nm; ++i) {
            if (packed_mode(i) > 0) continue;
            c.segment(i * na, na).setZero();
            c.segment(nm * na + i * nb, nb).setZero();
        }
    }
    return c;
}

}  // namespace

CapacityEstimate minimize_capacity(BodyPtr body, const CoisoIndex& idx,
                                   const SolverOptions& opts) {
    if (!body) throw std::invalid_argument("minimize_capacity: null body");
    if (body->dim() != idx.dim())
        throw std::invalid_argument("minimize_capacity: body dimension mismatch");
    if (opts.modes < 1 || opts.starts < 1 || !(opts.grad_tol > 0.0))
        throw std::invalid_argument("minimize_capacity: bad solver options");

    DualProblem prob(body, idx, opts.modes, opts.quad_per_mode);

    // restarts are independent; results are reduced in restart order so the
    // outcome does not depend on any execution schedule
    std::vector<RestartResult> runs(opts.starts);
    for (int r = 0; r < opts.starts; ++r) {
        Vec c0 = seeded_start(prob.grid(), idx, r, opts);
        if (prob.grid().action(c0) <= 0.0) continue;
        runs[r] = shrink_and_polish(prob, run_descent(prob, c0, opts), opts);
    }

    int best = -1;
    for (int r = 0; r < opts.starts; ++r) {
        if (!runs[r].feasible) continue;
        if (best < 0 || runs[r].value < runs[best].value) best = r;
    }
    if (best < 0)
        throw std::runtime_error(
            "minimize_capacity: every restart landed in the nonpositive-action cone");

    int agreeing = 0;
    for (int r = 0; r < opts.starts; ++r)
        if (runs[r].feasible &&
            std::abs(runs[r].value - runs[best].value) <= 1e-4 * std::max(1.0, runs[best].value))
            ++agreeing;

    CapacityEstimate est{runs[best].value,
                         FourierLoop::from_packed(idx, opts.modes, runs[best].packed),
                         runs[best].grad_norm,
                         agreeing,
                         runs[best].converged,
                         prob.anchor()};
    return est;
}

namespace {

// gauge of the anchored set at x: smallest lambda with x/lambda + anchor
// inside the body
double anchored_gauge(const Body& body, const Vec& anchor, const Vec& x) {
    const Vec c = body.center();
    if (anchor.lpNorm<Eigen::Infinity>() == 0.0 && c.lpNorm<Eigen::Infinity>() == 0.0)
        return body.gauge(x);
    // gauge() is homogeneous about the center, so anchoring there stays
    // closed form; only intermediate anchors need the membership bisection
    if ((anchor - c).lpNorm<Eigen::Infinity>() == 0.0) return body.gauge(x + anchor);
    const double xn = x.norm();
    if (xn == 0.0) return 0.0;
    double hi = std::max(xn, 1e-6);
    while (body.gauge(x / hi + anchor) >= 1.0) hi *= 2.0;
    double lo = hi;
    while (body.gauge(x / lo + anchor) < 1.0) {
        lo *= 0.5;
        if (lo < 1e-300) return 0.0;
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (body.gauge(x / mid + anchor) < 1.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

Chord reconstruct_chord(const CapacityEstimate& est, BodyPtr body, const CoisoIndex& idx,
                        const SolverOptions& opts, int samples) {
    if (!body) throw std::invalid_argument("reconstruct_chord: null body");
    const FourierLoop& w = est.minimizer;
    const Vec& a = est.anchor;
    const double rho = est.value;
    const int S = samples > 1 ? samples : opts.quad_per_mode * w.truncation() + 1;

    auto x_raw = [&](double t) -> Vec {
        const Vec v = -apply_J(w.velocity(t));
        const double h = std::max(body->support(v) - a.dot(v), 0.0);
        return 0.5 * h * (body->grad_support(v).g - a);
    };

    Chord chord;
    chord.times = Vec::LinSpaced(S, 0.0, 1.0);
    Mat X(S, idx.dim());
    for (int j = 0; j < S; ++j) X.row(j) = x_raw(chord.times(j));

    // scale so the mean anchored gauge is one; pointwise equality holds only
    // at exact convergence
    double mean_gauge = 0.0;
    for (int j = 0; j < S; ++j) mean_gauge += anchored_gauge(*body, a, X.row(j));
    mean_gauge /= S;
    if (!(mean_gauge > 0.0)) throw std::runtime_error("reconstruct_chord: degenerate minimizer");
    const double mu = 1.0 / mean_gauge;
    X *= mu;

    double gauge_res = 0.0;
    for (int j = 0; j < S; ++j)
        gauge_res = std::max(gauge_res, std::abs(anchored_gauge(*body, a, X.row(j)) - 1.0));

    // analytic-in-t velocities: fourth-order central differences of the
    // explicit map t -> grad Hs(-J wdot(t)); the Fourier curve extends
    // beyond [0, 1], so no one-sided stencils are needed
    const double delta = 1e-4;
    Mat Xd(S, idx.dim());
    for (int j = 0; j < S; ++j) {
        const double t = chord.times(j);
        Xd.row(j) = (mu / (12 * delta)) *
                    (-x_raw(t + 2 * delta) + 8 * x_raw(t + delta) - 8 * x_raw(t - delta) +
                     x_raw(t - 2 * delta));
    }

    // velocity against the characteristic field of the anchored gauge:
    // grad of the squared anchored gauge at a boundary point x is
    // 2 nhat / <nhat, x> with nhat the outward unit normal
    double ode_num = 0.0, speed = 0.0;
    for (int j = 0; j < S; ++j) {
        const Vec x = X.row(j);
        Vec nhat = body->grad_gauge_sq(Vec(x + a)).g;
        const double nn = nhat.norm();
        if (nn == 0.0) continue;
        nhat /= nn;
        const Vec field = apply_J(Vec(2.0 / nhat.dot(x) * nhat));
        ode_num = std::max(ode_num, (Xd.row(j).transpose() - rho * field).norm());
        speed = std::max(speed, Xd.row(j).norm());
    }
    chord.ode_residual = speed > 0 ? ode_num / speed : kInf;

    const Vec x0 = X.row(0), x1 = X.row(S - 1);
    const Vec d = x1 - x0;
    double bres = (x0 - project(x0, Subspace::Rnk, idx)).lpNorm<Eigen::Infinity>();
    bres = std::max(bres, (x1 - project(x1, Subspace::Rnk, idx)).lpNorm<Eigen::Infinity>());
    bres = std::max(bres, (d - project(d, Subspace::V0, idx)).lpNorm<Eigen::Infinity>());
    chord.boundary_residual = bres;
    chord.gauge_residual = gauge_res;

    // action quadrature on the sample grid
    double act = 0.0;
    for (int j = 0; j < S; ++j) {
        const double wq = (j == 0 || j == S - 1) ? 0.5 : 1.0;
        act += wq * (-apply_J(Vec(Xd.row(j)))).dot(X.row(j));
    }
    chord.action = 0.5 * act / (S - 1);

    // shift back into the original body's coordinates
    for (int j = 0; j < S; ++j) X.row(j) += a.transpose();
    chord.points = X;

    ChordTols tols;
    chord.certified = chord.gauge_residual <= tols.gauge &&
                      chord.boundary_residual <= tols.boundary &&
                      chord.ode_residual <= tols.ode &&
                      std::abs(chord.action - est.value) <= 2.0 * opts.grad_tol;
    return chord;
}

namespace {

// 4th-order first derivative on a uniform grid; one-sided at the ends.
Mat sample_derivative(const Mat& X, double h) {
    const int S = static_cast<int>(X.rows());
    Mat D(S, X.cols());
    if (S < 5) {
        for (int j = 0; j < S; ++j) {
            const int j0 = std::max(0, std::min(S - 2, j));
            D.row(j) = (X.row(j0 + 1) - X.row(j0)) / h;
        }
        return D;
    }
    for (int j = 0; j < S; ++j) {
        if (j == 0)
            D.row(j) = (-25 * X.row(0) + 48 * X.row(1) - 36 * X.row(2) + 16 * X.row(3) -
                        3 * X.row(4)) /
                       (12 * h);
        else if (j == 1)
            D.row(j) =
                (-3 * X.row(0) - 10 * X.row(1) + 18 * X.row(2) - 6 * X.row(3) + X.row(4)) /
                (12 * h);
        else if (j == S - 2)
            D.row(j) = -(-3 * X.row(S - 1) - 10 * X.row(S - 2) + 18 * X.row(S - 3) -
                         6 * X.row(S - 4) + X.row(S - 5)) /
                       (12 * h);
        else if (j == S - 1)
            D.row(j) = -(-25 * X.row(S - 1) + 48 * X.row(S - 2) - 36 * X.row(S - 3) +
                         16 * X.row(S - 4) - 3 * X.row(S - 5)) /
                       (12 * h);
        else
            D.row(j) =
                (-X.row(j + 2) + 8 * X.row(j + 1) - 8 * X.row(j - 1) + X.row(j - 2)) / (12 * h);
    }
    return D;
}

}  // namespace

ChordReport verify_chord(const Chord& chord, const Body& body, const CoisoIndex& idx,
                         const ChordTols& tols) {
    const int S = static_cast<int>(chord.points.rows());
    if (S < 2 || chord.points.cols() != idx.dim())
        throw std::invalid_argument("verify_chord: malformed chord");
    ChordReport rep{};

    double gres = 0.0;
    for (int j = 0; j < S; ++j)
        gres = std::max(gres, std::abs(body.gauge(chord.points.row(j)) - 1.0));
    rep.gauge_residual = gres;
    rep.on_surface = gres <= tols.gauge;

    const Vec x0 = chord.points.row(0), x1 = chord.points.row(S - 1);
    const Vec d = x1 - x0;
    double bres = (x0 - project(x0, Subspace::Rnk, idx)).lpNorm<Eigen::Infinity>();
    bres = std::max(bres, (x1 - project(x1, Subspace::Rnk, idx)).lpNorm<Eigen::Infinity>());
    bres = std::max(bres, (d - project(d, Subspace::V0, idx)).lpNorm<Eigen::Infinity>());
    rep.boundary_residual = bres;
    rep.endpoints_ok = bres <= tols.boundary;

    const double h = (chord.times(S - 1) - chord.times(0)) / (S - 1);
    const Mat Xd = sample_derivative(chord.points, h);

    double worst_angle = 0.0;
    bool oriented = true;
    for (int j = 0; j < S; ++j) {
        const Vec v = Xd.row(j);
        const Vec dir = apply_J(body.grad_gauge_sq(Vec(chord.points.row(j))).g);
        const double vn = v.norm(), dn = dir.norm();
        if (vn == 0.0 || dn == 0.0) {
            oriented = false;
            continue;
        }
        if (v.dot(dir) <= 0.0) oriented = false;
        worst_angle = std::max(worst_angle, (v / vn - dir / dn).norm());
    }
    rep.ode_residual = worst_angle;
    rep.ode_ok = oriented && worst_angle <= tols.ode;

    double act = 0.0;
    for (int j = 0; j < S; ++j) {
        const double wq = (j == 0 || j == S - 1) ? 0.5 : 1.0;
        act += wq * (-apply_J(Vec(Xd.row(j)))).dot(chord.points.row(j));
    }
    rep.action = 0.5 * act * h;
    rep.orientation_ok = oriented && rep.action > 0.0;

    rep.pass = rep.on_surface && rep.endpoints_ok && rep.ode_ok && rep.orientation_ok;
    return rep;
}

}  // namespace coisocap
