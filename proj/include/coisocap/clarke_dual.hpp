#pragma once

#include <cstdint>
#include <utility>

#include "coisocap/convex_body.hpp"
#include "coisocap/fourier_loop.hpp"

namespace coisocap {

struct SolverOptions {
    int modes = 24;        // Fourier truncation M
    int starts = 16;       // random restarts (first ones are seeded circles)
    int max_iters = 5000;  // per restart
    double grad_tol = 1e-7;
    std::uint64_t seed = 1234;
    int quad_per_mode = 16;  // trapezoid intervals = quad_per_mode * modes
};

struct CapacityEstimate {
    double value;              // min of I(w)/A(w), an upper bound for the capacity
    FourierLoop minimizer;     // normalized to action 1
    double rayleigh_residual;  // norm of the coefficient gradient of the ratio
    int starts_agreeing;
    bool converged;
    Vec anchor;  // interior anchor in the coisotropic subspace used for the solve
};

struct Chord {
    Vec times;   // sample parameters in [0, 1]
    Mat points;  // (samples) x (2n), on the boundary of the original body
    double action;
    double ode_residual;       // velocity against the scaled characteristic field
    double boundary_residual;  // endpoint and leaf conditions
    double gauge_residual;     // distance of samples from the boundary
    bool certified;
};

struct ChordTols {
    double gauge = 1e-6;
    double boundary = 1e-8;
    double ode = 1e-6;
};

struct ChordReport {
    bool on_surface;
    bool endpoints_ok;
    bool ode_ok;
    bool orientation_ok;
    bool pass;
    double gauge_residual;
    double boundary_residual;
    double ode_residual;  // angular deviation of the sampled velocity from J * normal
    double action;
};

/// Discretized Clarke-dual problem for one (body, index, truncation):
/// minimize the ratio I(w)/A(w) over the open cone A > 0, where
/// I(w) = int_0^1 Hs(-J wdot) and Hs is the Legendre transform of the
/// squared gauge of the body anchored at an interior point of the
/// coisotropic subspace.  Both I and A are 2-homogeneous, so the ratio is
/// scale invariant and its minimum over the cone equals the minimum of I
/// on the slice A = 1.
class DualProblem {
public:
    DualProblem(BodyPtr body, CoisoIndex idx, int modes, int quad_per_mode = 16,
                const Vec* anchor = nullptr);

    const Vec& anchor() const { return anchor_; }
    const LoopGrid& grid() const { return grid_; }
    const CoisoIndex& index() const { return idx_; }

    double dual_value(const Vec& packed) const;
    Vec dual_gradient(const Vec& packed) const;

    /// Ratio I/A; +infinity outside the cone A > 0.  If grad is non-null it
    /// receives the coefficient gradient of the ratio.
    double ratio(const Vec& packed, Vec* grad = nullptr) const;

private:
    BodyPtr body_;
    CoisoIndex idx_;
    LoopGrid grid_;
    Vec anchor_;
};

/// I(w) for a loop, anchored at the body's own center, with its gradient
/// with respect to the packed coefficients.
double dual_functional(const FourierLoop& w, const Body& body);
std::pair<double, Vec> dual_functional_with_gradient(const FourierLoop& w, BodyPtr body);

/// Minimizes the dual ratio over multi-start quasi-Newton descent and
/// returns the best critical value found.  Deterministic for a fixed seed.
/// Throws std::invalid_argument if the body's center does not lie in the
/// coisotropic subspace, std::runtime_error if every restart lands in the
/// nonpositive-action cone.
CapacityEstimate minimize_capacity(BodyPtr body, const CoisoIndex& idx,
                                   const SolverOptions& opts = {});

/// Rebuilds the boundary chord x = mu * grad Hs(-J wdot) from a converged
/// estimate, normalized so the mean anchored gauge of the samples is 1,
/// and reports its defect against the chord equations.  samples <= 0 uses
/// the solver grid resolution.
Chord reconstruct_chord(const CapacityEstimate& est, BodyPtr body, const CoisoIndex& idx,
                        const SolverOptions& opts = {}, int samples = 0);

/// Independent re-check of the chord conditions from the samples alone:
/// points on the boundary, endpoints in the coisotropic subspace and leaf
/// equivalent, sampled velocity aligned with J times an outward normal
/// selection with positive orientation (positive action).
ChordReport verify_chord(const Chord& chord, const Body& body, const CoisoIndex& idx,
                         const ChordTols& tols = {});

}  // namespace coisocap
