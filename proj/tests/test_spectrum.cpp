#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "coisocap/spectrum.hpp"
#include "doctest.h"

using namespace coisocap;

namespace {

constexpr double kPi = 3.14159265358979323846;

// shooting oracle: integrate zdot = J grad H(z) on the ellipsoid with a
// classical fourth-order Runge-Kutta scheme and measure the return defect
// of the claimed chord at its claimed action (= time of flight)
struct EllipsoidFlow {
    std::vector<double> radii;
    int n;

    Vec field(const Vec& z) const {
        Vec g(2 * n);
        for (int i = 0; i < n; ++i) {
            const double w = 2.0 / (radii[i] * radii[i]);
            g(i) = w * z(n + i);    // J grad H: q part from p
            g(n + i) = -w * z(i);   // p part from -q
        }
        return g;
    }
    Vec integrate(Vec z, double T, int steps) const {
        const double h = T / steps;
        for (int s = 0; s < steps; ++s) {
            const Vec k1 = field(z);
            const Vec k2 = field(z + 0.5 * h * k1);
            const Vec k3 = field(z + 0.5 * h * k2);
            const Vec k4 = field(z + h * k3);
            z += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        }
        return z;
    }
};

}  // namespace

TEST_CASE("ellipsoid spectrum: frozen small cases") {
    const CoisoIndex idx(2, 1);
    const Spectrum sp = ellipsoid_spectrum({1.0, 1.0}, idx, 4.0);
    // plane 2 contributes half-period chords pi/2, pi, ...; plane 1
    // full-period chords pi, 2pi, ...; bound 4 keeps three entries
    REQUIRE(sp.entries.size() == 3);
    CHECK(sp.entries[0].action == doctest::Approx(kPi / 2));
    CHECK(sp.entries[1].action == doctest::Approx(kPi));
    CHECK(sp.entries[2].action == doctest::Approx(kPi));
    CHECK(sp.min_action() == doctest::Approx(kPi / 2));

    CHECK(ellipsoid_spectrum({1.0}, CoisoIndex(1, 1), 10.0).min_action() ==
          doctest::Approx(kPi));
    CHECK(ellipsoid_spectrum({1.0}, CoisoIndex(1, 0), 10.0).min_action() ==
          doctest::Approx(kPi / 2));
}

TEST_CASE("ellipsoid minimum action") {
    CHECK(ellipsoid_min_action({1.0, 2.0}, CoisoIndex(2, 1)) == doctest::Approx(kPi));
    CHECK(ellipsoid_min_action({1.0, 1.0, 1.0}, CoisoIndex(3, 2)) == doctest::Approx(kPi / 2));
    CHECK(ellipsoid_min_action({1.0, 1.0}, CoisoIndex(2, 2)) == doctest::Approx(kPi));
    CHECK(ellipsoid_min_action({2.0}, CoisoIndex(1, 0)) == doctest::Approx(2 * kPi));
    CHECK_THROWS_AS(ellipsoid_min_action({1.0}, CoisoIndex(2, 1)), std::invalid_argument);
    CHECK_THROWS_AS(ellipsoid_min_action({-1.0, 1.0}, CoisoIndex(2, 1)), std::invalid_argument);
}

TEST_CASE("spectrum is sorted and respects the bound") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> radius(0.5, 2.0);
    for (int t = 0; t < 10; ++t) {
        const int n = 2 + int(rng() % 2);
        const int k = int(rng() % (n + 1));
        std::vector<double> radii(n);
        for (auto& r : radii) r = radius(rng);
        const double bound = 8.0;
        const Spectrum sp = ellipsoid_spectrum(radii, CoisoIndex(n, k), bound);
        REQUIRE(!sp.entries.empty());
        for (std::size_t i = 0; i < sp.entries.size(); ++i) {
            CHECK(sp.entries[i].action > 0.0);
            CHECK(sp.entries[i].action <= bound);
            if (i > 0) CHECK(sp.entries[i].action >= sp.entries[i - 1].action);
        }
        CHECK(sp.min_action() ==
              doctest::Approx(ellipsoid_min_action(radii, CoisoIndex(n, k))));
    }
}

TEST_CASE("every listed action is realized by a shooting solution") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> radius(0.6, 1.8);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 2, k = int(rng() % (n + 1));
        const CoisoIndex idx(n, k);
        EllipsoidFlow flow{{radius(rng), radius(rng)}, n};
        const double bound = 6.0;
        const Spectrum sp = ellipsoid_spectrum(flow.radii, idx, bound);
        for (const auto& entry : sp.entries) {
            // label encodes "plane i, ..."; start on that plane's q-axis
            const int plane = entry.label[6] - '1';
            REQUIRE(plane >= 0);
            REQUIRE(plane < n);
            Vec z0 = Vec::Zero(2 * n);
            z0(plane) = flow.radii[plane];
            const Vec zT = flow.integrate(z0, entry.action, 20000);
            double residual;
            if (plane < k) {
                residual = (zT - z0).lpNorm<Eigen::Infinity>();  // closed orbit
            } else {
                // return to the coisotropic subspace, displaced along the leaf
                residual = std::abs(zT(n + plane));
                for (int j = 0; j < 2 * n; ++j)
                    if (j != plane && j != n + plane) residual = std::max(residual, std::abs(zT(j)));
            }
            CHECK(residual <= 1e-6);
        }
    }
}

TEST_CASE("planar chords of the circle are the two half-discs") {
    const Spectrum sp = planar_chord_actions(PlanarCurve::circle(1.0), 10.0);
    REQUIRE(sp.entries.size() == 2);
    CHECK(sp.entries[0].action == doctest::Approx(kPi / 2).epsilon(1e-10));
    CHECK(sp.entries[1].action == doctest::Approx(kPi / 2).epsilon(1e-10));

    // conformality: radius r scales the arc actions by r^2
    const Spectrum sp2 = planar_chord_actions(PlanarCurve::circle(1.7), 10.0);
    CHECK(sp2.entries[0].action == doctest::Approx(1.7 * 1.7 * kPi / 2).epsilon(1e-10));
}

TEST_CASE("planar chords are invariant under reparameterization") {
    const PlanarCurve curve = PlanarCurve::circle(1.3);
    const Spectrum a = planar_chord_actions(curve, 10.0);
    const Spectrum b = planar_chord_actions(curve.resampled(3), 10.0);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        CHECK(std::abs(a.entries[i].action - b.entries[i].action) < 1e-6);
}

TEST_CASE("polygon chords and orientation independence") {
    // counterclockwise square: the splitter re-orients it internally
    const std::vector<Eigen::Vector2d> sq{{1.5, -1}, {1.5, 1}, {-1.5, 1}, {-1.5, -1}};
    const Spectrum sp = planar_chord_actions(PlanarCurve::polygon(sq), 10.0);
    REQUIRE(sp.entries.size() == 2);
    CHECK(sp.entries[0].action == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(sp.entries[1].action == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("tangential contact is rejected with a location") {
    // kite dipping to the axis at (1, 0) from above: same sign on both
    // sides of the touch
    const std::vector<Eigen::Vector2d> kite{{2, 1}, {1, 0.0}, {0.5, 1}, {-1, 1.2}, {-1, -1}, {1.5, -1}};
    // reorder clockwise starting below
    CHECK_THROWS_AS(planar_chord_actions(PlanarCurve::polygon(kite), 10.0), std::domain_error);
    try {
        planar_chord_actions(PlanarCurve::polygon(kite), 10.0);
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("tangential") != std::string::npos);
        CHECK(std::string(e.what()).find("(") != std::string::npos);
    }
}

TEST_CASE("staircase domain: areas obey the smoothing inequalities") {
    for (double eps : {0.01, 0.005, 0.0025}) {
        const WDomain dom = w_domain_curve(3.0, eps);
        CHECK(dom.cap_surplus > 0.0);
        CHECK(dom.cap_surplus < eps / 2);
        CHECK(4 * dom.corner_area < eps * eps);
        CHECK(dom.bottom_action == doctest::Approx(2 * 9.0 - 4 * dom.corner_area));
        CHECK(dom.bottom_action > 2 * 9.0 - eps);
        // curve area agrees with the closed-form bookkeeping
        CHECK(dom.curve.area() == doctest::Approx(dom.area).epsilon(1e-9));
    }
}

TEST_CASE("staircase domain is star-shaped about the origin") {
    const WDomain dom = w_domain_curve(3.0, 0.01);
    CHECK(dom.curve.star_shaped(360));
}

TEST_CASE("staircase spectrum has exactly the cap and the bottom chord") {
    const WDomain dom = w_domain_curve(3.0, 0.01);
    const Spectrum sp = planar_chord_actions(dom.curve, 100.0);
    REQUIRE(sp.entries.size() == 2);
    CHECK(sp.entries[0].action == doctest::Approx(dom.cap_action).epsilon(1e-8));
    CHECK(sp.entries[1].action == doctest::Approx(dom.bottom_action).epsilon(1e-8));
    // the two actions bracket the cap between pi/2 and the box scale
    CHECK(sp.entries[0].action > kPi / 2);
    CHECK(sp.entries[0].action < kPi / 2 + 0.01 / 2 + 0.01 * 0.01);
    CHECK(sp.entries[1].action > 2 * 9.0 - 0.01);
}

TEST_CASE("cap action decreases toward pi/2 as the smoothing tightens") {
    double prev = 1e300;
    for (double eps : {0.01, 0.005, 0.0025}) {
        const WDomain dom = w_domain_curve(3.0, eps);
        CHECK(dom.cap_action < prev);
        CHECK(dom.cap_action > kPi / 2);
        prev = dom.cap_action;
    }
}

TEST_CASE("staircase parameter validation") {
    CHECK_THROWS_AS(w_domain_curve(1.5, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(w_domain_curve(3.0, 0.02), std::invalid_argument);
    CHECK_THROWS_AS(w_domain_curve(3.0, -0.01), std::invalid_argument);
    CHECK_THROWS_AS(w_domain_curve(3.0, 0.01, 0.1, 0.1), std::invalid_argument);
}
