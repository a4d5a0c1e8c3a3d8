#pragma once

#include <vector>

#include "coisocap/symplectic.hpp"

namespace coisocap {

/// Truncated Fourier model of the mixed-boundary loop space on [0, 1]:
///
///   x(t) = sum_{m=-M..M} e^{m pi t J} a_m  +  sum_{m=-M..M} e^{2 m pi t J} b_m
///
/// with a_m in V0 (half-period modes) and b_m in V1 (full-period modes).
/// Every representable curve satisfies x(0), x(1) in the coisotropic
/// subspace with x(1) - x(0) in V0, i.e. the chord boundary conditions
/// hold identically in the coefficients.
///
/// Coefficients are stored in subspace components (see embed/extract).
class FourierLoop {
public:
    FourierLoop(CoisoIndex idx, int truncation);

    const CoisoIndex& index() const { return idx_; }
    int truncation() const { return M_; }

    /// Component vectors, m in [-M, M].  a(m) has size n-k, b(m) size 2k.
    Vec a(int m) const;
    Vec b(int m) const;
    void set_a(int m, const Vec& comps);
    void set_b(int m, const Vec& comps);

    Vec evaluate(double t) const;
    Vec velocity(double t) const;

    /// Closed-form action (pi/2) sum_m m (|a_m|^2 + 2 |b_m|^2).  Equals the
    /// quadrature of (1/2) int <-J xdot, x>.
    double action() const;

    struct HalfNorms {
        double plus;   // norm of the positive-frequency part
        double zero;   // norm of the constant part
        double minus;  // norm of the negative-frequency part
    };

    /// Splits the H^{1/2} norm across the positive/constant/negative
    /// frequency parts; action() == (plus^2 - minus^2) / 2.
    HalfNorms h_half_split() const;

    /// Copy with the constant coefficients a_0, b_0 removed.  Action and
    /// the dual functional depend only on the derivative, so both are
    /// unchanged.
    FourierLoop zero_mean_gauge() const;

    /// Packed coefficient layout used by the solver and the grid engine:
    /// modes ordered +1, -1, +2, -2, ..., +M, -M; all a-components first,
    /// then all b-components.  The m = 0 coefficients are not packed.
    Vec packed() const;
    static FourierLoop from_packed(const CoisoIndex& idx, int truncation, const Vec& coeffs);
    static int packed_size(const CoisoIndex& idx, int truncation);

private:
    CoisoIndex idx_;
    int M_;
    Mat a_;  // (n-k) x (2M+1), column m + M
    Mat b_;  // (2k)  x (2M+1)
};

/// Signed mode value for packed position i = 0..2M-1: +1, -1, +2, -2, ...
inline int packed_mode(int i) { return (i / 2 + 1) * (i % 2 == 0 ? 1 : -1); }

/// Precomputed trigonometric tables on the uniform grid t_j = j/N,
/// j = 0..N, for fast batched evaluation of v(t) = -J xdot(t) and its
/// adjoint with respect to the packed coefficients.  This is the whole
/// inner loop of the dual solver.
class LoopGrid {
public:
    LoopGrid(CoisoIndex idx, int truncation, int intervals);

    const CoisoIndex& index() const { return idx_; }
    int truncation() const { return M_; }
    int intervals() const { return N_; }
    int packed_size() const { return psize_; }
    const Vec& times() const { return t_; }
    /// Composite trapezoid weights (sum to 1).
    const Vec& weights() const { return w_; }

    /// Rows = grid node, cols = 2n phase-space coordinates.
    Mat neg_J_velocity(const Vec& packed) const;

    /// Gradient of sum_j <G_j, v_j(packed)> with respect to packed, where
    /// G already carries any per-node weights.
    Vec neg_J_velocity_adjoint(const Mat& G) const;

    double action(const Vec& packed) const;
    Vec action_gradient(const Vec& packed) const;

private:
    CoisoIndex idx_;
    int M_, N_, psize_;
    Vec t_, w_;
    Mat ca_, sa_;  // (2M) x (N+1): cos/sin(m pi t) per packed mode
    Mat cb_, sb_;  // (2M) x (N+1): cos/sin(2 m pi t)
    Vec freq_a_, freq_b_, mval_;
};

}  // namespace coisocap
