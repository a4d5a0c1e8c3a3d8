#pragma once

#include <functional>
#include <string>
#include <vector>

#include "coisocap/symplectic.hpp"

namespace coisocap {

struct SpectrumEntry {
    double action;
    std::string label;
    int multiplicity = 1;
};

/// Sorted multiset of positive chord actions with provenance labels.
struct Spectrum {
    std::vector<SpectrumEntry> entries;  // ascending by action

    bool empty() const { return entries.empty(); }
    double min_action() const;
};

/// All planar chord actions of the ellipsoid sum_i |z_i|^2 / r_i^2 < 1 up
/// to the bound: plane i carries a linear rotation, so chords confined to
/// plane i close up after full periods when the whole plane lies in the
/// coisotropic subspace (i <= k, action m pi r_i^2) and after half periods
/// when only the q_i axis does (i > k, action m pi r_i^2 / 2).
/// Multi-plane chords need simultaneous closing times, so the spectrum
/// minimum is always planar; rationally related radii add non-planar
/// values above it that are not listed.
Spectrum ellipsoid_spectrum(const std::vector<double>& plane_radii, const CoisoIndex& idx,
                            double bound);

/// min{ min_{i<=k} pi r_i^2, min_{i>k} pi r_i^2 / 2 }.
double ellipsoid_min_action(const std::vector<double>& plane_radii, const CoisoIndex& idx);

/// Closed piecewise-smooth boundary curve in the plane, star-shaped about
/// the origin, used for the planar (n = 1, k = 0) chord spectrum.
class PlanarCurve {
public:
    struct Segment {
        std::function<Eigen::Vector2d(double)> pos;  // u in [0, 1]
        std::function<Eigen::Vector2d(double)> vel;  // d pos / du
        bool on_axis = false;  // segment lies exactly on the q-axis
    };

    PlanarCurve() = default;
    explicit PlanarCurve(std::vector<Segment> segments);

    const std::vector<Segment>& segments() const { return segments_; }

    static PlanarCurve circle(double r);
    /// Closed polygon through the given vertices (last edge closes back).
    static PlanarCurve polygon(const std::vector<Eigen::Vector2d>& vertices);

    /// Enclosed area (positive regardless of orientation).
    double area() const;

    /// Every ray from the origin meets the curve exactly once; checked on
    /// a uniform fan of rays.
    bool star_shaped(int rays = 360) const;

    /// Resampled copy: each segment split into pieces sub-segments.
    PlanarCurve resampled(int pieces) const;

private:
    std::vector<Segment> segments_;
};

/// Actions of the leafwise chords of a planar star-shaped curve for the
/// Lagrangian boundary condition (n = 1, k = 0).  The curve is cut at its
/// q-axis contacts; every maximal off-axis arc, traversed in the clockwise
/// characteristic orientation, is one chord whose action is the area
/// enclosed between the arc and the axis (the closing segment along the
/// axis carries no action).  Contacts may be transversal crossings or
/// whole on-axis intervals; an isolated tangential touch without a sign
/// change is rejected with std::domain_error naming the location.
Spectrum planar_chord_actions(const PlanarCurve& curve, double bound, double axis_tol = 1e-10);

/// Smoothed staircase domain: unit half-disc cap glued to a box of size
/// 2N x N below the q-axis, with the cap blended to the axis over
/// [1-delta1, 1+delta2] and the four box corners rounded by a convex arc
/// of height eps/2.  delta defaults (negative arguments) are eps/10.
struct WDomain {
    PlanarCurve curve;
    double cap_action;     // area between the cap and the axis
    double bottom_action;  // area of the box route, 2N^2 - 4 * corner_area
    double corner_area;    // area of one rounded-corner cutout
    double cap_surplus;    // cap_action - pi/2, in (0, eps/2)
    double area;           // total enclosed area
    double N, eps, delta1, delta2;
};

WDomain w_domain_curve(double N, double eps, double delta1 = -1.0, double delta2 = -1.0);

}  // namespace coisocap
