#include "coisocap/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace coisocap {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// adaptive Simpson with absolute tolerance
double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// (1/2) (p qdot - q pdot): the action density of a planar arc
double action_density(const PlanarCurve::Segment& seg, double u) {
    const Eigen::Vector2d z = seg.pos(u), v = seg.vel(u);
    return 0.5 * (z.y() * v.x() - z.x() * v.y());
}

double segment_action(const PlanarCurve::Segment& seg, double u0, double u1) {
    return adaptive_simpson([&](double u) { return action_density(seg, u); }, u0, u1);
}

}  // namespace

double Spectrum::min_action() const {
    if (entries.empty()) throw std::domain_error("Spectrum::min_action: empty spectrum");
    return entries.front().action;
}

Spectrum ellipsoid_spectrum(const std::vector<double>& plane_radii, const CoisoIndex& idx,
                            double bound) {
    if (static_cast<int>(plane_radii.size()) != idx.n)
        throw std::invalid_argument("ellipsoid_spectrum: radii count must equal n");
    if (!(bound > 0)) throw std::invalid_argument("ellipsoid_spectrum: bound must be positive");
    Spectrum sp;
    for (int i = 0; i < idx.n; ++i) {
        const double r = plane_radii[i];
        if (!(r > 0)) throw std::invalid_argument("ellipsoid_spectrum: radii must be positive");
        const bool full_period = i < idx.k;  // whole plane in the coisotropic subspace
        const double quantum = full_period ? kPi * r * r : 0.5 * kPi * r * r;
        for (int m = 1; m * quantum <= bound; ++m) {
            std::ostringstream label;
            label << "plane " << (i + 1) << ", " << m << (full_period ? " turn" : " half-turn")
                  << (m > 1 ? "s" : "");
            sp.entries.push_back({m * quantum, label.str(), 1});
        }
    }
    std::stable_sort(sp.entries.begin(), sp.entries.end(),
                     [](const SpectrumEntry& a, const SpectrumEntry& b) {
                         return a.action < b.action;
                     });
    return sp;
}

double ellipsoid_min_action(const std::vector<double>& plane_radii, const CoisoIndex& idx) {
    if (static_cast<int>(plane_radii.size()) != idx.n)
        throw std::invalid_argument("ellipsoid_min_action: radii count must equal n");
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < idx.n; ++i) {
        const double r = plane_radii[i];
        if (!(r > 0)) throw std::invalid_argument("ellipsoid_min_action: radii must be positive");
        best = std::min(best, i < idx.k ? kPi * r * r : 0.5 * kPi * r * r);
    }
    return best;
}

PlanarCurve::PlanarCurve(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw std::invalid_argument("PlanarCurve: no segments");
}

PlanarCurve PlanarCurve::circle(double r) {
    if (!(r > 0)) throw std::invalid_argument("PlanarCurve::circle: radius must be positive");
    Segment seg;
    // clockwise, starting on the positive q-axis
    seg.pos = [r](double u) {
        return Eigen::Vector2d(r * std::cos(2 * kPi * u), -r * std::sin(2 * kPi * u));
    };
    seg.vel = [r](double u) {
        return Eigen::Vector2d(-2 * kPi * r * std::sin(2 * kPi * u),
                               -2 * kPi * r * std::cos(2 * kPi * u));
    };
    return PlanarCurve({seg});
}

PlanarCurve PlanarCurve::polygon(const std::vector<Eigen::Vector2d>& vertices) {
    if (vertices.size() < 3) throw std::invalid_argument("PlanarCurve::polygon: need >= 3 vertices");
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Eigen::Vector2d a = vertices[i];
        const Eigen::Vector2d b = vertices[(i + 1) % vertices.size()];
        Segment s;
        s.pos = [a, b](double u) { return Eigen::Vector2d(a + u * (b - a)); };
        s.vel = [a, b](double) { return Eigen::Vector2d(b - a); };
        s.on_axis = a.y() == 0.0 && b.y() == 0.0;
        segs.push_back(std::move(s));
    }
    return PlanarCurve(std::move(segs));
}

double PlanarCurve::area() const {
    double acc = 0.0;
    for (const auto& s : segments_) acc += segment_action(s, 0.0, 1.0);
    return std::abs(acc);
}

bool PlanarCurve::star_shaped(int rays) const {
    // dense polyline, then classic ray casting with angles offset from the
    // segment joints
    std::vector<Eigen::Vector2d> pts;
    const int per_seg = 2048;
    for (const auto& s : segments_)
        for (int i = 0; i < per_seg; ++i) pts.push_back(s.pos(double(i) / per_seg));
    const std::size_t P = pts.size();
    for (int r = 0; r < rays; ++r) {
        const double th = 2 * kPi * (r + 0.3819660112501051) / rays;
        const Eigen::Vector2d dir(std::cos(th), std::sin(th));
        const Eigen::Vector2d nrm(-dir.y(), dir.x());
        int hits = 0;
        for (std::size_t i = 0; i < P; ++i) {
            const Eigen::Vector2d a = pts[i], b = pts[(i + 1) % P];
            const double sa = nrm.dot(a), sb = nrm.dot(b);
            if ((sa > 0) == (sb > 0)) continue;
            const double t = sa / (sa - sb);
            if (dir.dot(a + t * (b - a)) > 0) ++hits;
        }
        if (hits != 1) return false;
    }
    return true;
}

PlanarCurve PlanarCurve::resampled(int pieces) const {
    if (pieces < 1) throw std::invalid_argument("PlanarCurve::resampled: pieces must be >= 1");
    std::vector<Segment> segs;
    for (const auto& s : segments_)
        for (int i = 0; i < pieces; ++i) {
            const double u0 = double(i) / pieces, du = 1.0 / pieces;
            Segment t;
            t.pos = [s, u0, du](double u) { return s.pos(u0 + du * u); };
            t.vel = [s, u0, du](double u) { return Eigen::Vector2d(du * s.vel(u0 + du * u)); };
            t.on_axis = s.on_axis;
            segs.push_back(std::move(t));
        }
    return PlanarCurve(std::move(segs));
}

namespace {

struct Piece {
    int segment;
    double u0, u1;
    int sign;  // +1 above the axis, -1 below, 0 on it
};

// splits every off-axis segment at its transversal axis crossings and
// classifies the resulting pieces by the sign of p
std::vector<Piece> cut_at_axis(const PlanarCurve& curve, double axis_tol) {
    const auto& segs = curve.segments();
    std::vector<Piece> pieces;
    const int grid = 4096;
    for (int si = 0; si < static_cast<int>(segs.size()); ++si) {
        const auto& s = segs[si];
        if (s.on_axis) {
            pieces.push_back({si, 0.0, 1.0, 0});
            continue;
        }
        // locate sign changes of p on a dense grid, refine by bisection
        std::vector<double> cuts{0.0};
        double prev2 = 0.0;
        double pu = s.pos(0.0).y();
        double pmax = std::abs(pu);
        for (int i = 1; i <= grid; ++i) {
            const double u = double(i) / grid;
            const double pv = s.pos(u).y();
            pmax = std::max(pmax, std::abs(pv));
            if ((pu < 0) != (pv < 0) && (pu != 0.0 || pv != 0.0)) {
                double lo = double(i - 1) / grid, hi = u;
                double plo = pu;
                for (int it = 0; it < 100 && hi - lo > 1e-16; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double pm = s.pos(mid).y();
                    if ((pm < 0) == (plo < 0)) {
                        lo = mid;
                        plo = pm;
                    } else {
                        hi = mid;
                    }
                }
                cuts.push_back(0.5 * (lo + hi));
            }
            // interior tangential touch: |p| dips onto the axis and lifts
            // off on the same side
            if (i >= 2 && i < grid && std::abs(pu) <= axis_tol && std::abs(prev2) > axis_tol &&
                std::abs(pv) > axis_tol && (prev2 < 0) == (pv < 0)) {
                const auto z = s.pos(double(i - 1) / grid);
                throw std::domain_error("planar_chord_actions: tangential q-axis contact near (" +
                                        fmt(z.x()) + ", " + fmt(z.y()) + ")");
            }
            prev2 = pu;
            pu = pv;
        }
        cuts.push_back(1.0);
        std::sort(cuts.begin(), cuts.end());
        if (pmax <= axis_tol) {
            pieces.push_back({si, 0.0, 1.0, 0});
            continue;
        }
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            if (cuts[c + 1] - cuts[c] < 1e-14) continue;
            const double pm = s.pos(0.5 * (cuts[c] + cuts[c + 1])).y();
            pieces.push_back({si, cuts[c], cuts[c + 1], pm > 0 ? 1 : -1});
        }
    }
    return pieces;
}

}  // namespace

Spectrum planar_chord_actions(const PlanarCurve& curve, double bound, double axis_tol) {
    if (!(bound > 0)) throw std::invalid_argument("planar_chord_actions: bound must be positive");

    // orient clockwise so chord actions come out positive
    double total = 0.0;
    for (const auto& s : curve.segments()) total += segment_action(s, 0.0, 1.0);
    const bool flip = total < 0;

    std::vector<Piece> pieces = cut_at_axis(curve, axis_tol);
    if (flip) {
        std::reverse(pieces.begin(), pieces.end());
        for (auto& p : pieces) std::swap(p.u0, p.u1);  // traverse each piece backwards
    }

    // rotate so the walk starts where a chord begins: at a contact, or at a
    // transversal crossing junction; otherwise an arc could wrap the seam
    // and be counted twice
    std::size_t start_at = pieces.size();
    for (std::size_t j = 0; j < pieces.size(); ++j) {
        const Piece& prev = pieces[(j + pieces.size() - 1) % pieces.size()];
        if (pieces[j].sign == 0 || prev.sign == 0 || prev.sign != pieces[j].sign) {
            start_at = j;
            break;
        }
    }
    if (start_at == pieces.size())
        throw std::domain_error("planar_chord_actions: curve does not meet the q-axis");
    std::rotate(pieces.begin(), pieces.begin() + static_cast<std::ptrdiff_t>(start_at),
                pieces.end());

    const auto& segs = curve.segments();
    auto piece_action = [&](const Piece& p) {
        const double a = segment_action(segs[p.segment], std::min(p.u0, p.u1),
                                        std::max(p.u0, p.u1));
        return p.u1 >= p.u0 ? a : -a;
    };
    auto piece_endpoint = [&](const Piece& p, bool end) {
        return segs[p.segment].pos(end ? p.u1 : p.u0);
    };

    Spectrum sp;
    std::size_t i = 0;
    int arc_id = 0;
    while (i < pieces.size()) {
        if (pieces[i].sign == 0) {
            ++i;
            continue;
        }
        // merge consecutive same-sign pieces into one chord arc; a junction
        // with opposite signs and no contact between them is a transversal
        // crossing at a segment joint
        const int sgn = pieces[i].sign;
        double action = 0.0;
        bool first_piece = true;
        const Eigen::Vector2d start = piece_endpoint(pieces[i], false);
        Eigen::Vector2d stop = start;
        while (i < pieces.size() && pieces[i].sign == sgn) {
            if (!first_piece && std::abs(piece_endpoint(pieces[i], false).y()) <= axis_tol) {
                // same-sign pieces meeting on the axis: the curve touches
                // without crossing
                const auto z = piece_endpoint(pieces[i], false);
                throw std::domain_error(
                    "planar_chord_actions: tangential q-axis contact near (" + fmt(z.x()) + ", " +
                    fmt(z.y()) + ")");
            }
            action += piece_action(pieces[i]);
            stop = piece_endpoint(pieces[i], true);
            first_piece = false;
            ++i;
        }
        ++arc_id;
        if (action > 0 && action <= bound) {
            std::ostringstream label;
            label << "arc " << arc_id << (sgn > 0 ? " above" : " below") << " axis, q "
                  << fmt(start.x()) << " -> " << fmt(stop.x());
            sp.entries.push_back({action, label.str(), 1});
        }
    }
    std::stable_sort(sp.entries.begin(), sp.entries.end(),
                     [](const SpectrumEntry& a, const SpectrumEntry& b) {
                         return a.action < b.action;
                     });
    return sp;
}

namespace {

// quintic with prescribed value/slope/curvature at both ends, evaluated in
// the normalized variable u = (t - t0) / L
struct Quintic {
    double c[6];
    double t0, L;

    double value(double t) const {
        const double u = (t - t0) / L;
        double v = 0.0;
        for (int i = 5; i >= 0; --i) v = v * u + c[i];
        return v;
    }
    double deriv(double t) const {
        const double u = (t - t0) / L;
        double v = 0.0;
        for (int i = 5; i >= 1; --i) v = v * u + i * c[i];
        return v / L;
    }
    double integral() const {  // over [t0, t0 + L]
        double acc = 0.0;
        for (int i = 0; i < 6; ++i) acc += c[i] / (i + 1);
        return acc * L;
    }
};

Quintic hermite_quintic(double t0, double t1, double v0, double s0, double c0, double v1,
                        double s1, double c1) {
    Quintic q;
    q.t0 = t0;
    q.L = t1 - t0;
    const double L = q.L;
    q.c[0] = v0;
    q.c[1] = s0 * L;
    q.c[2] = 0.5 * c0 * L * L;
    // solve the 3x3 system for the remaining coefficients
    const double r0 = v1 - (q.c[0] + q.c[1] + q.c[2]);
    const double r1 = s1 * L - (q.c[1] + 2 * q.c[2]);
    const double r2 = c1 * L * L - 2 * q.c[2];
    q.c[3] = 10 * r0 - 4 * r1 + 0.5 * r2;
    q.c[4] = -15 * r0 + 7 * r1 - r2;
    q.c[5] = 6 * r0 - 3 * r1 + 0.5 * r2;
    return q;
}

}  // namespace

WDomain w_domain_curve(double N, double eps, double delta1, double delta2) {
    if (!(N > 2)) throw std::invalid_argument("w_domain_curve: need N > 2");
    if (!(eps > 0) || eps > 0.01)
        throw std::invalid_argument("w_domain_curve: need 0 < eps <= 1/100");
    if (delta1 <= 0) delta1 = eps / 10;
    if (delta2 <= 0) delta2 = eps / 10;
    if (delta1 >= 0.05 || delta2 >= 0.05)
        throw std::invalid_argument("w_domain_curve: deltas must be small");
    const double t0 = 1 - delta1, t1 = 1 + delta2, e2 = 0.5 * eps;
    if (t1 >= N - e2) throw std::invalid_argument("w_domain_curve: cap overlaps the box corner");

    // cap blend in the squared profile: G matches 1 - t^2 to second order
    // at t0 and vanishes to second order at t1, so sqrt(G) dominates the
    // circle on [t0, 1] and meets the axis flatly
    const Quintic G = hermite_quintic(t0, t1, 1 - t0 * t0, -2 * t0, -2.0, 0.0, 0.0, 0.0);
    {
        const int checks = 4096;
        for (int i = 0; i <= checks; ++i) {
            const double t = t0 + (t1 - t0) * i / checks;
            const double g = G.value(t);
            if (t <= 1.0 && g < (1 - t * t) - 1e-12)
                throw std::invalid_argument("w_domain_curve: cap fails to dominate the circle");
            if (i < checks && g <= 0.0)
                throw std::invalid_argument("w_domain_curve: cap profile not positive");
            if (i > 0 && i < checks && G.deriv(t) >= 0.0)
                throw std::invalid_argument("w_domain_curve: cap profile not decreasing");
        }
    }

    auto cap_y = [t0, t1, G](double x) {
        const double ax = std::abs(x);
        if (ax <= t0) return std::sqrt(std::max(1 - ax * ax, 0.0));
        if (ax >= t1) return 0.0;
        return std::sqrt(std::max(G.value(ax), 0.0));
    };
    auto cap_dy = [t0, t1, G, cap_y](double x) {
        const double ax = std::abs(x), sg = x >= 0 ? 1.0 : -1.0;
        if (ax >= t1) return 0.0;
        if (ax <= t0) {
            const double y = std::sqrt(std::max(1 - ax * ax, 1e-300));
            return -sg * ax / y;
        }
        const double g = G.value(ax);
        if (g <= 0) return 0.0;
        return sg * G.deriv(ax) / (2 * std::sqrt(g));
    };

    // corner arc: convex, height eps/2, support eps/2, flat where it meets
    // the straight edges of the box
    auto h = [e2](double t) {
        if (t >= e2) return 0.0;
        const double u = 1 - t / e2;
        return e2 * u * u;
    };
    auto dh = [e2](double t) {
        if (t >= e2) return 0.0;
        return -2 * (1 - t / e2);
    };
    const double corner_area = e2 * e2 / 3.0;

    // areas: circle part in closed form, blend by quadrature
    const double circle_part = 0.5 * (t0 * std::sqrt(1 - t0 * t0) + std::asin(t0));
    const double blend_part =
        adaptive_simpson([&](double t) { return std::sqrt(std::max(G.value(t), 0.0)); }, t0, t1);
    const double cap_action = 2.0 * (circle_part + blend_part);
    const double cap_surplus = cap_action - 0.5 * kPi;
    if (!(cap_surplus > 0) || !(cap_surplus < e2))
        throw std::invalid_argument("w_domain_curve: cap area surplus outside (0, eps/2)");

    using Seg = PlanarCurve::Segment;
    std::vector<Seg> segs;
    auto line = [&](Eigen::Vector2d a, Eigen::Vector2d b, bool on_axis) {
        Seg s;
        s.pos = [a, b](double u) { return Eigen::Vector2d(a + u * (b - a)); };
        s.vel = [a, b](double) { return Eigen::Vector2d(b - a); };
        s.on_axis = on_axis;
        segs.push_back(std::move(s));
    };
    auto graph = [&](double x0, double x1, auto yfun, auto dyfun) {
        Seg s;
        const double dx = x1 - x0;
        s.pos = [x0, dx, yfun](double u) {
            const double x = x0 + dx * u;
            return Eigen::Vector2d(x, yfun(x));
        };
        s.vel = [x0, dx, dyfun](double u) {
            const double x = x0 + dx * u;
            return Eigen::Vector2d(dx, dx * dyfun(x));
        };
        segs.push_back(std::move(s));
    };

    // clockwise walk: cap left to right, then around the box
    graph(-t1, t1, cap_y, cap_dy);
    line({t1, 0}, {N - e2, 0}, true);
    graph(N - e2, N, [&](double x) { return -h(N - x); }, [&](double x) { return dh(N - x); });
    line({N, -e2}, {N, -N + e2}, false);
    graph(N, N - e2, [&](double x) { return -N + h(N - x); },
          [&](double x) { return -dh(N - x); });
    line({N - e2, -N}, {-N + e2, -N}, false);
    graph(-N + e2, -N, [&](double x) { return -N + h(x + N); },
          [&](double x) { return dh(x + N); });
    line({-N, -N + e2}, {-N, -e2}, false);
    graph(-N, -N + e2, [&](double x) { return -h(x + N); }, [&](double x) { return -dh(x + N); });
    line({-N + e2, 0}, {-t1, 0}, true);

    WDomain dom;
    dom.curve = PlanarCurve(std::move(segs));
    dom.cap_action = cap_action;
    dom.bottom_action = 2 * N * N - 4 * corner_area;
    dom.corner_area = corner_area;
    dom.cap_surplus = cap_surplus;
    dom.area = dom.cap_action + dom.bottom_action;
    dom.N = N;
    dom.eps = eps;
    dom.delta1 = delta1;
    dom.delta2 = delta2;
    return dom;
}

}  // namespace coisocap
