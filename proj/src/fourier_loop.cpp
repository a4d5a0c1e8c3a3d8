#include "coisocap/fourier_loop.hpp"

#include <cmath>
#include <stdexcept>

namespace coisocap {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

FourierLoop::FourierLoop(CoisoIndex idx, int truncation)
    : idx_(idx),
      M_(truncation),
      a_(Mat::Zero(idx.dim_v0(), 2 * truncation + 1)),
      b_(Mat::Zero(idx.dim_v1(), 2 * truncation + 1)) {
    if (truncation < 1) throw std::invalid_argument("FourierLoop: truncation must be >= 1");
}

Vec FourierLoop::a(int m) const {
    if (std::abs(m) > M_) throw std::out_of_range("FourierLoop::a: |m| > M");
    return a_.col(m + M_);
}

Vec FourierLoop::b(int m) const {
    if (std::abs(m) > M_) throw std::out_of_range("FourierLoop::b: |m| > M");
    return b_.col(m + M_);
}

void FourierLoop::set_a(int m, const Vec& comps) {
    if (std::abs(m) > M_) throw std::out_of_range("FourierLoop::set_a: |m| > M");
    if (comps.size() != idx_.dim_v0()) throw std::invalid_argument("set_a: component size");
    a_.col(m + M_) = comps;
}

void FourierLoop::set_b(int m, const Vec& comps) {
    if (std::abs(m) > M_) throw std::out_of_range("FourierLoop::set_b: |m| > M");
    if (comps.size() != idx_.dim_v1()) throw std::invalid_argument("set_b: component size");
    b_.col(m + M_) = comps;
}

// e^{theta J} v = cos(theta) v + sin(theta) J v, applied per mode.
Vec FourierLoop::evaluate(double t) const {
    const int n = idx_.n, k = idx_.k;
    Vec x = Vec::Zero(idx_.dim());
    for (int m = -M_; m <= M_; ++m) {
        if (idx_.dim_v0() > 0) {
            const double th = m * kPi * t;
            const double c = std::cos(th), s = std::sin(th);
            // a in V0 slots q_{k+1..n}; J a lands in -p_{k+1..n}
            x.segment(k, n - k) += c * a_.col(m + M_);
            x.segment(n + k, n - k) -= s * a_.col(m + M_);
        }
        if (k > 0) {
            const double th = 2 * m * kPi * t;
            const double c = std::cos(th), s = std::sin(th);
            const auto bq = b_.col(m + M_).head(k);
            const auto bp = b_.col(m + M_).tail(k);
            // J maps (q_i, p_i) -> (p_i, -q_i) within each plane i <= k
            x.head(k) += c * bq + s * bp;
            x.segment(n, k) += c * bp - s * bq;
        }
    }
    return x;
}

// Termwise derivative: d/dt e^{m pi t J} a = (m pi) e^{m pi t J} (J a).
Vec FourierLoop::velocity(double t) const {
    const int n = idx_.n, k = idx_.k;
    Vec v = Vec::Zero(idx_.dim());
    for (int m = -M_; m <= M_; ++m) {
        if (m == 0) continue;
        if (idx_.dim_v0() > 0) {
            const double w = m * kPi, th = m * kPi * t;
            const double c = std::cos(th), s = std::sin(th);
            const auto am = a_.col(m + M_);
            // e^{th J}(J a) with Ja = -a in the p slots
            v.segment(k, n - k) += (-w * s) * am;
            v.segment(n + k, n - k) += (-w * c) * am;
        }
        if (k > 0) {
            const double w = 2 * m * kPi, th = 2 * m * kPi * t;
            const double c = std::cos(th), s = std::sin(th);
            const auto bq = b_.col(m + M_).head(k);
            const auto bp = b_.col(m + M_).tail(k);
            // e^{th J}(J b) with Jb = (bp, -bq)
            v.head(k) += w * (c * bp - s * bq);
            v.segment(n, k) += w * (-c * bq - s * bp);
        }
    }
    return v;
}

double FourierLoop::action() const {
    double acc = 0.0;
    for (int m = -M_; m <= M_; ++m) {
        const double aa = a_.col(m + M_).squaredNorm();
        const double bb = b_.col(m + M_).squaredNorm();
        acc += m * (aa + 2.0 * bb);
    }
    return 0.5 * kPi * acc;
}

FourierLoop::HalfNorms FourierLoop::h_half_split() const {
    double plus2 = 0.0, minus2 = 0.0;
    for (int m = 1; m <= M_; ++m) {
        plus2 += kPi * (m * a_.col(m + M_).squaredNorm() + 2.0 * m * b_.col(m + M_).squaredNorm());
        minus2 += kPi * (m * a_.col(-m + M_).squaredNorm() + 2.0 * m * b_.col(-m + M_).squaredNorm());
    }
    const double zero2 = a_.col(M_).squaredNorm() + b_.col(M_).squaredNorm();
    return {std::sqrt(plus2), std::sqrt(zero2), std::sqrt(minus2)};
}

FourierLoop FourierLoop::zero_mean_gauge() const {
    FourierLoop out = *this;
    out.a_.col(M_).setZero();
    out.b_.col(M_).setZero();
    return out;
}

int FourierLoop::packed_size(const CoisoIndex& idx, int truncation) {
    return 2 * truncation * (idx.dim_v0() + idx.dim_v1());
}

Vec FourierLoop::packed() const {
    const int na = idx_.dim_v0(), nb = idx_.dim_v1();
    Vec out(packed_size(idx_, M_));
    int pos = 0;
    for (int i = 0; i < 2 * M_; ++i) {
        const int m = packed_mode(i);
        out.segment(pos, na) = a_.col(m + M_);
        pos += na;
    }
    for (int i = 0; i < 2 * M_; ++i) {
        const int m = packed_mode(i);
        out.segment(pos, nb) = b_.col(m + M_);
        pos += nb;
    }
    return out;
}

FourierLoop FourierLoop::from_packed(const CoisoIndex& idx, int truncation, const Vec& coeffs) {
    if (coeffs.size() != packed_size(idx, truncation))
        throw std::invalid_argument("FourierLoop::from_packed: size mismatch");
    FourierLoop loop(idx, truncation);
    const int na = idx.dim_v0(), nb = idx.dim_v1();
    int pos = 0;
    for (int i = 0; i < 2 * truncation; ++i) {
        loop.a_.col(packed_mode(i) + truncation) = coeffs.segment(pos, na);
        pos += na;
    }
    for (int i = 0; i < 2 * truncation; ++i) {
        loop.b_.col(packed_mode(i) + truncation) = coeffs.segment(pos, nb);
        pos += nb;
    }
    return loop;
}

// ---------------------------------------------------------------------------

LoopGrid::LoopGrid(CoisoIndex idx, int truncation, int intervals)
    : idx_(idx), M_(truncation), N_(intervals) {
    if (truncation < 1 || intervals < 2) throw std::invalid_argument("LoopGrid: bad sizes");
    psize_ = FourierLoop::packed_size(idx_, M_);
    t_ = Vec::LinSpaced(N_ + 1, 0.0, 1.0);
    w_ = Vec::Constant(N_ + 1, 1.0 / N_);
    w_(0) *= 0.5;
    w_(N_) *= 0.5;
    const int nm = 2 * M_;
    ca_.resize(nm, N_ + 1);
    sa_.resize(nm, N_ + 1);
    cb_.resize(nm, N_ + 1);
    sb_.resize(nm, N_ + 1);
    freq_a_.resize(nm);
    freq_b_.resize(nm);
    mval_.resize(nm);
    for (int i = 0; i < nm; ++i) {
        const int m = packed_mode(i);
        mval_(i) = m;
        freq_a_(i) = m * kPi;
        freq_b_(i) = 2 * m * kPi;
        for (int j = 0; j <= N_; ++j) {
            ca_(i, j) = std::cos(m * kPi * t_(j));
            sa_(i, j) = std::sin(m * kPi * t_(j));
            cb_(i, j) = std::cos(2 * m * kPi * t_(j));
            sb_(i, j) = std::sin(2 * m * kPi * t_(j));
        }
    }
}

Mat LoopGrid::neg_J_velocity(const Vec& packed) const {
    const int n = idx_.n, k = idx_.k, na = idx_.dim_v0(), nb = idx_.dim_v1();
    const int nm = 2 * M_;
    Mat V = Mat::Zero(N_ + 1, 2 * n);
    if (na > 0) {
        // -J xdot for the a-part is sum m pi e^{m pi t J} a_m
        Mat FA(nm, na);
        for (int i = 0; i < nm; ++i) FA.row(i) = freq_a_(i) * packed.segment(i * na, na).transpose();
        V.middleCols(k, n - k) = ca_.transpose() * FA;
        V.middleCols(n + k, n - k) = -(sa_.transpose() * FA);
    }
    if (nb > 0) {
        const int off = nm * na;
        Mat BQ(nm, k), BP(nm, k);
        for (int i = 0; i < nm; ++i) {
            const auto seg = packed.segment(off + i * nb, nb);
            BQ.row(i) = freq_b_(i) * seg.head(k).transpose();
            BP.row(i) = freq_b_(i) * seg.tail(k).transpose();
        }
        V.leftCols(k) = cb_.transpose() * BQ + sb_.transpose() * BP;
        V.middleCols(n, k) = cb_.transpose() * BP - sb_.transpose() * BQ;
    }
    return V;
}

Vec LoopGrid::neg_J_velocity_adjoint(const Mat& G) const {
    const int n = idx_.n, k = idx_.k, na = idx_.dim_v0(), nb = idx_.dim_v1();
    const int nm = 2 * M_;
    Vec out = Vec::Zero(psize_);
    if (na > 0) {
        const Mat GA = ca_ * G.middleCols(k, n - k) - sa_ * G.middleCols(n + k, n - k);
        for (int i = 0; i < nm; ++i) out.segment(i * na, na) = freq_a_(i) * GA.row(i).transpose();
    }
    if (nb > 0) {
        const int off = nm * na;
        const Mat PQ = cb_ * G.leftCols(k) - sb_ * G.middleCols(n, k);
        const Mat PP = cb_ * G.middleCols(n, k) + sb_ * G.leftCols(k);
        for (int i = 0; i < nm; ++i) {
            out.segment(off + i * nb, k) = freq_b_(i) * PQ.row(i).transpose();
            out.segment(off + i * nb + k, k) = freq_b_(i) * PP.row(i).transpose();
        }
    }
    return out;
}

double LoopGrid::action(const Vec& packed) const {
    const int na = idx_.dim_v0(), nb = idx_.dim_v1();
    const int nm = 2 * M_;
    double acc = 0.0;
    for (int i = 0; i < nm; ++i) {
        if (na > 0) acc += mval_(i) * packed.segment(i * na, na).squaredNorm();
        if (nb > 0) acc += 2.0 * mval_(i) * packed.segment(nm * na + i * nb, nb).squaredNorm();
    }
    return 0.5 * kPi * acc;
}

Vec LoopGrid::action_gradient(const Vec& packed) const {
    const int na = idx_.dim_v0(), nb = idx_.dim_v1();
    const int nm = 2 * M_;
    Vec g(psize_);
    for (int i = 0; i < nm; ++i) {
        if (na > 0) g.segment(i * na, na) = kPi * mval_(i) * packed.segment(i * na, na);
        if (nb > 0)
            g.segment(nm * na + i * nb, nb) =
                2.0 * kPi * mval_(i) * packed.segment(nm * na + i * nb, nb);
    }
    return g;
}

}  // namespace coisocap
