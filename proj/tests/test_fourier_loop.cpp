#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "coisocap/fourier_loop.hpp"
#include "doctest.h"

using namespace coisocap;

namespace {

constexpr double kPi = 3.14159265358979323846;

// independent oracle: composite trapezoid of (1/2) <-J xdot, x>
double action_by_quadrature(const FourierLoop& loop, int nodes) {
    double acc = 0.0;
    for (int j = 0; j <= nodes; ++j) {
        const double t = double(j) / nodes;
        const double w = (j == 0 || j == nodes) ? 0.5 : 1.0;
        acc += w * (-apply_J(loop.velocity(t))).dot(loop.evaluate(t));
    }
    return 0.5 * acc / nodes;
}

FourierLoop random_loop(const CoisoIndex& idx, int M, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    FourierLoop loop(idx, M);
    for (int m = -M; m <= M; ++m) {
        const double decay = m == 0 ? 1.0 : 1.0 / double(m * m);
        Vec a(idx.dim_v0()), b(idx.dim_v1());
        for (int i = 0; i < a.size(); ++i) a(i) = decay * g(rng);
        for (int i = 0; i < b.size(); ++i) b(i) = decay * g(rng);
        loop.set_a(m, a);
        loop.set_b(m, b);
    }
    return loop;
}

}  // namespace

TEST_CASE("single half-period mode endpoints") {
    const CoisoIndex idx(2, 1);
    FourierLoop loop(idx, 4);
    Vec a(1);
    a << 1.0;
    loop.set_a(1, a);
    const Vec v = embed(a, Subspace::V0, idx);
    CHECK((loop.evaluate(0.0) - v).lpNorm<Eigen::Infinity>() < 1e-15);
    CHECK((loop.evaluate(1.0) + v).lpNorm<Eigen::Infinity>() < 1e-15);  // e^{pi J} = -1
}

TEST_CASE("single full-period mode has period one") {
    const CoisoIndex idx(2, 1);
    FourierLoop loop(idx, 4);
    Vec b(2);
    b << 0.3, -1.1;
    loop.set_b(1, b);
    CHECK((loop.evaluate(1.0) - loop.evaluate(0.0)).lpNorm<Eigen::Infinity>() < 1e-14);
    CHECK((loop.evaluate(0.0) - embed(b, Subspace::V1, idx)).lpNorm<Eigen::Infinity>() < 1e-15);
}

TEST_CASE("velocity matches finite differences of evaluate") {
    std::mt19937_64 rng(2);
    const CoisoIndex idx(3, 1);
    const FourierLoop loop = random_loop(idx, 6, rng);
    const double h = 1e-6;
    for (double t : {0.1, 0.37, 0.5, 0.93}) {
        const Vec fd = (loop.evaluate(t + h) - loop.evaluate(t - h)) / (2 * h);
        CHECK((fd - loop.velocity(t)).lpNorm<Eigen::Infinity>() < 1e-7);
    }
}

TEST_CASE("boundary conditions hold identically") {
    std::mt19937_64 rng(3);
    for (const auto& [n, k] : std::vector<std::pair<int, int>>{{1, 0}, {2, 1}, {3, 3}}) {
        const CoisoIndex idx(n, k);
        for (int t = 0; t < 20; ++t) {
            const FourierLoop loop = random_loop(idx, 8, rng);
            const Vec x0 = loop.evaluate(0.0), x1 = loop.evaluate(1.0);
            CHECK((x0 - project(x0, Subspace::Rnk, idx)).lpNorm<Eigen::Infinity>() < 1e-12);
            CHECK((x1 - project(x1, Subspace::Rnk, idx)).lpNorm<Eigen::Infinity>() < 1e-12);
            CHECK(leaf_equivalent(x1, x0, idx, 1e-12));
        }
    }
}

TEST_CASE("action of the pure modes (frozen from the quadrature oracle)") {
    const CoisoIndex idx(2, 1);
    {
        FourierLoop loop(idx, 2);
        Vec a(1);
        a << 1.0;
        loop.set_a(1, a);
        // oracle value: (1/2) int <-J xdot, x> = pi/2 for the unit
        // half-period mode
        CHECK(action_by_quadrature(loop, 2048) == doctest::Approx(kPi / 2).epsilon(1e-12));
        CHECK(loop.action() == doctest::Approx(kPi / 2).epsilon(1e-14));
    }
    {
        FourierLoop loop(idx, 2);
        Vec b(2);
        b << 1.0, 0.0;
        loop.set_b(1, b);
        // oracle value: pi for the unit full-period mode
        CHECK(action_by_quadrature(loop, 2048) == doctest::Approx(kPi).epsilon(1e-12));
        CHECK(loop.action() == doctest::Approx(kPi).epsilon(1e-14));
    }
    CHECK(FourierLoop(idx, 2).action() == 0.0);
}

TEST_CASE("closed-form action equals quadrature on random loops") {
    std::mt19937_64 rng(5);
    for (const auto& [n, k] : std::vector<std::pair<int, int>>{{1, 0}, {2, 1}, {2, 2}, {3, 2}}) {
        const CoisoIndex idx(n, k);
        for (int t = 0; t < 10; ++t) {
            const FourierLoop loop = random_loop(idx, 32, rng);
            const double closed = loop.action();
            const double quad = action_by_quadrature(loop, 2048);
            CHECK(std::abs(closed - quad) < 1e-8 * std::max(1.0, std::abs(closed)));
        }
    }
}

TEST_CASE("action is additive across a- and b-modes (orthogonality)") {
    const CoisoIndex idx(2, 1);
    FourierLoop la(idx, 3), lb(idx, 3), both(idx, 3);
    Vec a(1), b(2);
    a << 0.8;
    b << -0.4, 0.9;
    la.set_a(2, a);
    lb.set_b(1, b);
    both.set_a(2, a);
    both.set_b(1, b);
    CHECK(both.action() == doctest::Approx(la.action() + lb.action()).epsilon(1e-12));
    const auto na = la.h_half_split(), nb = lb.h_half_split(), nboth = both.h_half_split();
    CHECK(nboth.plus * nboth.plus ==
          doctest::Approx(na.plus * na.plus + nb.plus * nb.plus).epsilon(1e-12));
}

TEST_CASE("norm split: frozen values and the action identity") {
    const CoisoIndex idx(2, 1);
    {
        FourierLoop loop(idx, 2);
        Vec a(1);
        a << 1.0;
        loop.set_a(1, a);
        const auto s = loop.h_half_split();
        CHECK(s.plus * s.plus == doctest::Approx(kPi).epsilon(1e-14));
        CHECK(s.zero == 0.0);
        CHECK(s.minus == 0.0);
    }
    {
        // constant loop in the coisotropic subspace
        FourierLoop loop(idx, 2);
        Vec a0(1), b0(2);
        a0 << 2.0;
        b0 << 1.0, -2.0;
        loop.set_a(0, a0);
        loop.set_b(0, b0);
        const auto s = loop.h_half_split();
        CHECK(s.zero == doctest::Approx(3.0).epsilon(1e-14));  // |(2,1,-2)| = 3
        CHECK(s.plus == 0.0);
        CHECK(s.minus == 0.0);
    }
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        const FourierLoop loop = random_loop(CoisoIndex(3, 1), 8, rng);
        const auto s = loop.h_half_split();
        CHECK(std::abs(loop.action() - 0.5 * (s.plus * s.plus - s.minus * s.minus)) < 1e-10);
    }
}

TEST_CASE("zero-mean gauge strips the constants and keeps the action") {
    std::mt19937_64 rng(11);
    const CoisoIndex idx(2, 1);
    for (int t = 0; t < 20; ++t) {
        const FourierLoop loop = random_loop(idx, 6, rng);
        const FourierLoop zl = loop.zero_mean_gauge();
        CHECK(zl.a(0).norm() == 0.0);
        CHECK(zl.b(0).norm() == 0.0);
        CHECK(zl.h_half_split().zero == 0.0);
        // action invariance, via the independent quadrature as well
        CHECK(zl.action() == doctest::Approx(loop.action()).epsilon(1e-12));
        CHECK(action_by_quadrature(zl, 1024) ==
              doctest::Approx(action_by_quadrature(loop, 1024)).epsilon(1e-10));
        // ... and a loop already in the gauge is unchanged
        const FourierLoop again = zl.zero_mean_gauge();
        CHECK((again.packed() - zl.packed()).lpNorm<Eigen::Infinity>() == 0.0);
    }
}

TEST_CASE("packed round-trip") {
    std::mt19937_64 rng(13);
    const CoisoIndex idx(3, 2);
    const FourierLoop loop = random_loop(idx, 5, rng).zero_mean_gauge();
    const Vec c = loop.packed();
    CHECK(c.size() == FourierLoop::packed_size(idx, 5));
    const FourierLoop back = FourierLoop::from_packed(idx, 5, c);
    for (int m = -5; m <= 5; ++m) {
        CHECK((back.a(m) - loop.a(m)).lpNorm<Eigen::Infinity>() == 0.0);
        CHECK((back.b(m) - loop.b(m)).lpNorm<Eigen::Infinity>() == 0.0);
    }
}

TEST_CASE("grid engine matches the per-point evaluation") {
    std::mt19937_64 rng(17);
    const CoisoIndex idx(2, 1);
    const int M = 6, N = 64;
    const FourierLoop loop = random_loop(idx, M, rng).zero_mean_gauge();
    const Vec c = loop.packed();
    const LoopGrid grid(idx, M, N);
    const Mat V = grid.neg_J_velocity(c);
    for (int j = 0; j <= N; ++j) {
        const double t = double(j) / N;
        const Vec ref = -apply_J(loop.velocity(t));
        CHECK((V.row(j).transpose() - ref).lpNorm<Eigen::Infinity>() < 1e-12);
    }
    CHECK(grid.action(c) == doctest::Approx(loop.action()).epsilon(1e-13));
}

TEST_CASE("grid adjoint is the exact transpose of the velocity map") {
    std::mt19937_64 rng(19);
    std::normal_distribution<double> g(0.0, 1.0);
    const CoisoIndex idx(2, 2);
    const LoopGrid grid(idx, 4, 32);
    const int P = grid.packed_size();
    Vec c(P), d(P);
    for (int i = 0; i < P; ++i) {
        c(i) = g(rng);
        d(i) = g(rng);
    }
    Mat G(grid.intervals() + 1, idx.dim());
    for (int r = 0; r < G.rows(); ++r)
        for (int s = 0; s < G.cols(); ++s) G(r, s) = g(rng);
    // <G, V(d)> == <adjoint(G), d> by linearity of the synthesis
    const double lhs = (G.array() * grid.neg_J_velocity(d).array()).sum();
    const double rhs = grid.neg_J_velocity_adjoint(G).dot(d);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    // action gradient consistency
    const double h = 1e-7;
    const Vec gA = grid.action_gradient(c);
    for (int i = 0; i < std::min<int>(P, 6); ++i) {
        Vec cp = c, cm = c;
        cp(i) += h;
        cm(i) -= h;
        CHECK(gA(i) ==
              doctest::Approx((grid.action(cp) - grid.action(cm)) / (2 * h)).epsilon(1e-6));
    }
}
