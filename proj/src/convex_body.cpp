#include "coisocap/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace coisocap {

double Body::hamiltonian(const Vec& z) const {
    const double j = gauge(z);
    return j * j;
}

double Body::legendre(const Vec& w) const {
    const Vec c = center();
    const double hc = support(w) - c.dot(w);
    return c.dot(w) + 0.25 * hc * hc;
}

GradResult Body::grad_legendre(const Vec& w) const {
    const Vec c = center();
    GradResult gs = grad_support(w);
    const double hc = support(w) - c.dot(w);
    return {c + 0.5 * hc * (gs.g - c), gs.smooth};
}

double Body::gauge_origin(const Vec& z) const {
    const Vec c = center();
    if (c.lpNorm<Eigen::Infinity>() == 0.0) return gauge(z);
    if (gauge(Vec::Zero(dim())) >= 1.0)
        throw std::domain_error("gauge_origin: origin not interior to the set");
    const double zn = z.norm();
    if (zn == 0.0) return 0.0;
    // membership is gauge(.) <= 1; the set is star-shaped about the origin,
    // so {lambda : z/lambda inside} is an upward ray
    double hi = zn;
    while (gauge(z / hi) >= 1.0) hi *= 2.0;
    double lo = hi;
    while (gauge(z / lo) < 1.0) {
        lo *= 0.5;
        if (lo < 1e-300) return 0.0;
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (gauge(z / mid) < 1.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

class BallBody final : public Body {
public:
    BallBody(double r, int dim) : p_{r, dim} {
        if (r <= 0) throw std::invalid_argument("ball: radius must be positive");
        if (dim < 2 || dim % 2) throw std::invalid_argument("ball: dimension must be even >= 2");
    }
    BodyKind kind() const override { return BodyKind::Ball; }
    int dim() const override { return p_.dim; }
    double gauge(const Vec& z) const override { return z.norm() / p_.r; }
    GradResult grad_gauge_sq(const Vec& z) const override {
        return {2.0 / (p_.r * p_.r) * z, true};
    }
    double support(const Vec& w) const override { return p_.r * w.norm(); }
    GradResult grad_support(const Vec& w) const override {
        const double n = w.norm();
        if (n == 0.0) return {Vec::Zero(dim()), false};
        return {p_.r / n * w, true};
    }
    std::shared_ptr<const Body> scaled(double lambda) const override {
        return std::make_shared<BallBody>(lambda * p_.r, p_.dim);
    }
    const BallParams& params() const { return p_; }

private:
    BallParams p_;
};

class EllipsoidBody final : public Body {
public:
    explicit EllipsoidBody(const Mat& Q) { init(Q, {}); }
    explicit EllipsoidBody(const std::vector<double>& plane_radii) {
        const int n = static_cast<int>(plane_radii.size());
        if (n < 1) throw std::invalid_argument("ellipsoid: need at least one radius");
        Vec d(2 * n);
        for (int i = 0; i < n; ++i) {
            if (plane_radii[i] <= 0) throw std::invalid_argument("ellipsoid: radii must be positive");
            d(i) = d(n + i) = 1.0 / (plane_radii[i] * plane_radii[i]);
        }
        init(Mat(d.asDiagonal()), plane_radii);
    }
    BodyKind kind() const override { return BodyKind::Ellipsoid; }
    int dim() const override { return static_cast<int>(p_.Q.rows()); }
    double gauge(const Vec& z) const override { return std::sqrt(z.dot(p_.Q * z)); }
    GradResult grad_gauge_sq(const Vec& z) const override { return {2.0 * (p_.Q * z), true}; }
    double support(const Vec& w) const override { return std::sqrt(w.dot(qinv_ * w)); }
    GradResult grad_support(const Vec& w) const override {
        const double h = support(w);
        if (h == 0.0) return {Vec::Zero(dim()), false};
        return {qinv_ * w / h, true};
    }
    std::shared_ptr<const Body> scaled(double lambda) const override {
        if (p_.has_plane_radii) {
            auto radii = p_.plane_radii;
            for (auto& r : radii) r *= lambda;
            return std::make_shared<EllipsoidBody>(radii);
        }
        return std::make_shared<EllipsoidBody>(Mat(p_.Q / (lambda * lambda)));
    }
    const EllipsoidParams& params() const { return p_; }

private:
    void init(const Mat& Q, std::vector<double> radii) {
        if (Q.rows() != Q.cols() || Q.rows() % 2)
            throw std::invalid_argument("ellipsoid: Q must be square of even dimension");
        if ((Q - Q.transpose()).lpNorm<Eigen::Infinity>() > 1e-12 * (1 + Q.lpNorm<Eigen::Infinity>()))
            throw std::invalid_argument("ellipsoid: Q must be symmetric");
        Eigen::LLT<Mat> llt(Q);
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument("ellipsoid: Q must be positive definite");
        p_.Q = 0.5 * (Q + Q.transpose());
        p_.plane_radii = std::move(radii);
        p_.has_plane_radii = !p_.plane_radii.empty();
        qinv_ = llt.solve(Mat::Identity(Q.rows(), Q.cols()));
    }
    EllipsoidParams p_;
    Mat qinv_;
};

class LpBallBody final : public Body {
public:
    LpBallBody(double p, const std::vector<double>& plane_radii) : p_{p, plane_radii} {
        if (p < 2) throw std::invalid_argument("lp_ball: need p >= 2");
        const int n = static_cast<int>(plane_radii.size());
        if (n < 1) throw std::invalid_argument("lp_ball: need at least one radius");
        d_.resize(2 * n);
        for (int i = 0; i < n; ++i) {
            if (plane_radii[i] <= 0) throw std::invalid_argument("lp_ball: radii must be positive");
            d_(i) = d_(n + i) = plane_radii[i];
        }
        q_ = p / (p - 1.0);  // dual exponent
    }
    BodyKind kind() const override { return BodyKind::LpBall; }
    int dim() const override { return static_cast<int>(d_.size()); }
    double gauge(const Vec& z) const override { return weighted_norm(z.cwiseQuotient(d_), p_.p); }
    GradResult grad_gauge_sq(const Vec& z) const override {
        const double j = gauge(z);
        if (j == 0.0) return {Vec::Zero(dim()), false};
        Vec g(dim());
        for (int i = 0; i < dim(); ++i) {
            const double u = z(i) / d_(i);
            g(i) = 2.0 * j * sgn(u) * std::pow(std::abs(u) / j, p_.p - 1.0) / d_(i);
        }
        return {g, true};
    }
    double support(const Vec& w) const override { return weighted_norm(w.cwiseProduct(d_), q_); }
    GradResult grad_support(const Vec& w) const override {
        const double h = support(w);
        if (h == 0.0) return {Vec::Zero(dim()), false};
        Vec g(dim());
        bool smooth = true;
        for (int i = 0; i < dim(); ++i) {
            const double u = d_(i) * std::abs(w(i));
            g(i) = d_(i) * sgn(w(i)) * std::pow(u / h, q_ - 1.0);
            if (q_ < 2.0 && u < 1e-14 * h) smooth = false;
        }
        return {g, smooth};
    }
    std::shared_ptr<const Body> scaled(double lambda) const override {
        auto radii = p_.plane_radii;
        for (auto& r : radii) r *= lambda;
        return std::make_shared<LpBallBody>(p_.p, radii);
    }
    const LpBallParams& params() const { return p_; }

private:
    static double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }
    static double weighted_norm(const Vec& u, double expo) {
        const double m = u.lpNorm<Eigen::Infinity>();
        if (m == 0.0) return 0.0;
        double acc = 0.0;
        for (int i = 0; i < u.size(); ++i) acc += std::pow(std::abs(u(i)) / m, expo);
        return m * std::pow(acc, 1.0 / expo);
    }
    LpBallParams p_;
    Vec d_;
    double q_;
};

class ProductBody final : public Body {
public:
    explicit ProductBody(std::vector<BodyPtr> factors) : factors_(std::move(factors)) {
        if (factors_.size() < 1) throw std::invalid_argument("product: need at least one factor");
        offsets_.push_back(0);
        for (const auto& f : factors_) {
            if (!f) throw std::invalid_argument("product: null factor");
            offsets_.push_back(offsets_.back() + f->dim() / 2);
        }
    }
    BodyKind kind() const override { return BodyKind::Product; }
    int dim() const override { return 2 * offsets_.back(); }

    // factor i occupies q slots [off_i, off_{i+1}) and the matching p slots
    Vec gather(const Vec& z, std::size_t i) const {
        const int n = offsets_.back(), ni = factors_[i]->dim() / 2, off = offsets_[i];
        Vec zi(2 * ni);
        zi.head(ni) = z.segment(off, ni);
        zi.tail(ni) = z.segment(n + off, ni);
        return zi;
    }
    void scatter(Vec& z, std::size_t i, const Vec& zi) const {
        const int n = offsets_.back(), ni = factors_[i]->dim() / 2, off = offsets_[i];
        z.segment(off, ni) = zi.head(ni);
        z.segment(n + off, ni) = zi.tail(ni);
    }

    double gauge(const Vec& z) const override {
        double j = 0.0;
        for (std::size_t i = 0; i < factors_.size(); ++i)
            j = std::max(j, factors_[i]->gauge(gather(z, i)));
        return j;
    }
    GradResult grad_gauge_sq(const Vec& z) const override {
        // gradient of max_i H_i: the active factor; on ties take the last
        // near-maximal factor as the subgradient selection
        double best = -1.0;
        std::vector<double> js(factors_.size());
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            js[i] = factors_[i]->gauge(gather(z, i));
            best = std::max(best, js[i]);
        }
        std::size_t pick = 0;
        int near = 0;
        for (std::size_t i = 0; i < factors_.size(); ++i)
            if (js[i] >= best - 1e-12 * std::max(1.0, best)) {
                pick = i;
                ++near;
            }
        Vec g = Vec::Zero(dim());
        GradResult gi = factors_[pick]->grad_gauge_sq(gather(z, pick));
        scatter(g, pick, gi.g);
        return {g, gi.smooth && near <= 1};
    }
    double support(const Vec& w) const override {
        double h = 0.0;
        for (std::size_t i = 0; i < factors_.size(); ++i) h += factors_[i]->support(gather(w, i));
        return h;
    }
    GradResult grad_support(const Vec& w) const override {
        Vec g = Vec::Zero(dim());
        bool smooth = true;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            GradResult gi = factors_[i]->grad_support(gather(w, i));
            scatter(g, i, gi.g);
            smooth = smooth && gi.smooth;
        }
        return {g, smooth};
    }
    Vec center() const override {
        Vec c = Vec::Zero(dim());
        for (std::size_t i = 0; i < factors_.size(); ++i) scatter(c, i, factors_[i]->center());
        return c;
    }
    std::shared_ptr<const Body> scaled(double lambda) const override {
        std::vector<BodyPtr> fs;
        fs.reserve(factors_.size());
        for (const auto& f : factors_) fs.push_back(f->scaled(lambda));
        return std::make_shared<ProductBody>(std::move(fs));
    }
    const std::vector<BodyPtr>& factors() const { return factors_; }

private:
    std::vector<BodyPtr> factors_;
    std::vector<int> offsets_;
};

class TranslateBody final : public Body {
public:
    TranslateBody(BodyPtr base, Vec shift) : base_(std::move(base)), shift_(std::move(shift)) {
        if (!base_) throw std::invalid_argument("translate: null base");
        if (shift_.size() != base_->dim())
            throw std::invalid_argument("translate: shift dimension mismatch");
    }
    BodyKind kind() const override { return BodyKind::Translate; }
    int dim() const override { return base_->dim(); }
    double gauge(const Vec& z) const override { return base_->gauge(z - shift_); }
    GradResult grad_gauge_sq(const Vec& z) const override {
        return base_->grad_gauge_sq(z - shift_);
    }
    double support(const Vec& w) const override { return base_->support(w) + shift_.dot(w); }
    GradResult grad_support(const Vec& w) const override {
        GradResult g = base_->grad_support(w);
        return {g.g + shift_, g.smooth};
    }
    Vec center() const override { return shift_ + base_->center(); }
    std::shared_ptr<const Body> scaled(double lambda) const override {
        return std::make_shared<TranslateBody>(base_->scaled(lambda), Vec(lambda * shift_));
    }
    BodyPtr base() const { return base_; }
    const Vec& shift() const { return shift_; }

private:
    BodyPtr base_;
    Vec shift_;
};

}  // namespace

BodyPtr make_ball(double r, int dim) { return std::make_shared<BallBody>(r, dim); }

BodyPtr make_ellipsoid(const std::vector<double>& plane_radii) {
    return std::make_shared<EllipsoidBody>(plane_radii);
}

BodyPtr make_ellipsoid_q(const Mat& Q) { return std::make_shared<EllipsoidBody>(Q); }

BodyPtr make_lp_ball(double p, const std::vector<double>& plane_radii) {
    return std::make_shared<LpBallBody>(p, plane_radii);
}

BodyPtr make_product(std::vector<BodyPtr> factors) {
    return std::make_shared<ProductBody>(std::move(factors));
}

BodyPtr make_translate(BodyPtr base, const Vec& shift) {
    return std::make_shared<TranslateBody>(std::move(base), shift);
}

DualEstimate dual_estimate(const Body& body, int samples, double inflate, std::uint64_t seed) {
    const int d = body.dim();
    const Vec c = body.center();
    double h_max = 0.0, h_min = std::numeric_limits<double>::infinity();
    double s_max = 0.0, s_min = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto probe = [&](const Vec& u) {
        const double H = body.hamiltonian(c + u);
        // the dual side is measured through the squared support (4 H*),
        // which makes the round ball self-dual with R2 = R1 = 1
        const double hc = body.support(u) - c.dot(u);
        const double Hs = hc * hc;
        if (!(H > 0.0) || !std::isfinite(H) || !(Hs > 0.0) || !std::isfinite(Hs))
            throw std::invalid_argument("dual_estimate: degenerate body");
        h_max = std::max(h_max, H);
        h_min = std::min(h_min, H);
        s_max = std::max(s_max, Hs);
        s_min = std::min(s_min, Hs);
    };
    for (int i = 0; i < d; ++i) {
        probe(Vec::Unit(d, i));
        probe(-Vec::Unit(d, i));
    }
    for (int s = 0; s < samples; ++s) {
        Vec u(d);
        for (int i = 0; i < d; ++i) u(i) = gauss(rng);
        const double nrm = u.norm();
        if (nrm < 1e-12) continue;
        probe(u / nrm);
    }
    return {inflate * std::max(h_max, 1.0 / h_min), inflate * std::max(s_max, 1.0 / s_min)};
}

const BallParams* as_ball(const Body& b) {
    auto* p = dynamic_cast<const BallBody*>(&b);
    return p ? &p->params() : nullptr;
}

const EllipsoidParams* as_ellipsoid(const Body& b) {
    auto* p = dynamic_cast<const EllipsoidBody*>(&b);
    return p ? &p->params() : nullptr;
}

const LpBallParams* as_lp_ball(const Body& b) {
    auto* p = dynamic_cast<const LpBallBody*>(&b);
    return p ? &p->params() : nullptr;
}

std::vector<BodyPtr> product_factors(const Body& b) {
    auto* p = dynamic_cast<const ProductBody*>(&b);
    return p ? p->factors() : std::vector<BodyPtr>{};
}

std::pair<BodyPtr, Vec> translate_parts(const Body& b) {
    auto* p = dynamic_cast<const TranslateBody*>(&b);
    if (!p) return {nullptr, Vec()};
    return {p->base(), p->shift()};
}

}  // namespace coisocap
