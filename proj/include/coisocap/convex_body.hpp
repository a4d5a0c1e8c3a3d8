#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "coisocap/symplectic.hpp"

namespace coisocap {

/// Gradient value plus a smoothness flag.  At a point where the underlying
/// function is not differentiable the gradient is a designated subgradient
/// selection and smooth is false.
struct GradResult {
    Vec g;
    bool smooth = true;
};

enum class BodyKind { Ball, Ellipsoid, LpBall, Product, Translate };

/// A convex body in R^{2n} with evaluable Minkowski gauge, support
/// function and the Legendre transform of the squared gauge.
///
/// Conventions:
///  * gauge() is the Minkowski functional about the body's own center
///    (the translate variant evaluates its base on z - shift), so
///    gauge(z) <= 1 is always the membership test for the point set.
///  * support() is the set-level support function sup_{z in D} <z, w>.
///  * hamiltonian() = gauge^2 and legendre()/grad_legendre() are its exact
///    Legendre transform, so the Fenchel-Young identity holds for every
///    variant, centered or not.
class Body {
public:
    virtual ~Body() = default;

    virtual BodyKind kind() const = 0;
    virtual int dim() const = 0;

    virtual double gauge(const Vec& z) const = 0;
    virtual GradResult grad_gauge_sq(const Vec& z) const = 0;
    virtual double support(const Vec& w) const = 0;
    virtual GradResult grad_support(const Vec& w) const = 0;

    /// Center of homogeneity of gauge(); zero for every variant except
    /// translate (and products containing translates).
    virtual Vec center() const { return Vec::Zero(dim()); }

    virtual std::shared_ptr<const Body> scaled(double lambda) const = 0;

    double hamiltonian(const Vec& z) const;
    GradResult grad_hamiltonian(const Vec& z) const { return grad_gauge_sq(z); }

    /// Legendre transform of hamiltonian():  <c,w> + h_c(w)^2 / 4 with
    /// h_c = support - <c, .> the centered support function.
    double legendre(const Vec& w) const;
    GradResult grad_legendre(const Vec& w) const;

    /// Gauge of the point set about the origin (equals gauge() when the
    /// center is zero, otherwise computed by bisection on membership).
    /// Requires the origin in the interior of the set.
    double gauge_origin(const Vec& z) const;
};

using BodyPtr = std::shared_ptr<const Body>;

BodyPtr make_ball(double r, int dim);
/// Per-plane radii: plane i has radius radii[i] in both q_i and p_i.
BodyPtr make_ellipsoid(const std::vector<double>& plane_radii);
/// General ellipsoid {z : z^T Q z < 1}, Q symmetric positive definite.
BodyPtr make_ellipsoid_q(const Mat& Q);
/// Gauge ( sum_i |z_i / d_i|^p )^{1/p} with per-plane radii, p >= 2.
BodyPtr make_lp_ball(double p, const std::vector<double>& plane_radii);
/// Product under the interleaving identification: factor coordinates
/// (q^{(1)},..,q^{(m)}, p^{(1)},..,p^{(m)}).
BodyPtr make_product(std::vector<BodyPtr> factors);
BodyPtr make_translate(BodyPtr base, const Vec& shift);

/// Growth constants: |z|^2 / R1 <= H(z) <= R1 |z|^2, both about the
/// center, certified on a sampled direction grid and inflated by the given
/// safety factor.  R2 bounds the normalized dual 4 H* (the squared
/// centered support) the same way, so a round ball is self-dual with
/// R2 = R1 = 1.
struct DualEstimate {
    double R1;
    double R2;
};

DualEstimate dual_estimate(const Body& body, int samples = 4096, double inflate = 1.05,
                           std::uint64_t seed = 1234);

// Parameter access used by serialization and closed-form dispatch.
struct BallParams { double r; int dim; };
struct EllipsoidParams { std::vector<double> plane_radii; Mat Q; bool has_plane_radii; };
struct LpBallParams { double p; std::vector<double> plane_radii; };

const BallParams* as_ball(const Body& b);
const EllipsoidParams* as_ellipsoid(const Body& b);
const LpBallParams* as_lp_ball(const Body& b);
std::vector<BodyPtr> product_factors(const Body& b);   // empty if not a product
std::pair<BodyPtr, Vec> translate_parts(const Body& b);  // {nullptr, .} if not a translate

}  // namespace coisocap
