#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "coisocap/symplectic.hpp"
#include "doctest.h"

using namespace coisocap;

namespace {

Vec random_vec(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = g(rng);
    return v;
}

Mat random_symmetric(std::mt19937_64& rng, int d) {
    Mat B = Mat::NullaryExpr(d, d, [&]() {
        std::normal_distribution<double> g(0.0, 1.0);
        return g(rng);
    });
    return 0.5 * (B + B.transpose());
}

// independent oracle: orthonormal bases of the four subspaces via
// Gram-Schmidt on the coordinate generators
Mat subspace_basis(Subspace which, const CoisoIndex& idx) {
    const int d = subspace_dim(which, idx);
    Mat gen(idx.dim(), d);
    for (int i = 0; i < d; ++i) {
        Vec e = Vec::Zero(d);
        e(i) = 1.0;
        gen.col(i) = embed(e, which, idx);
    }
    // Gram-Schmidt
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < i; ++j) gen.col(i) -= gen.col(j).dot(gen.col(i)) * gen.col(j);
        gen.col(i).normalize();
    }
    return gen;
}

}  // namespace

TEST_CASE("CoisoIndex validation and dimensions") {
    CHECK_THROWS_AS(CoisoIndex(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(CoisoIndex(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(CoisoIndex(2, -1), std::invalid_argument);
    const CoisoIndex idx(3, 1);
    CHECK(idx.dim_v0() == 2);
    CHECK(idx.dim_v1() == 2);
    CHECK(idx.dim_rnk() == 4);
    CHECK(idx.dim_v0() + idx.dim_v1() == idx.dim_rnk());
}

TEST_CASE("omega0 on the standard basis") {
    const int n = 3;
    // omega0(e_i, e_{n+i}) = 1
    for (int i = 0; i < n; ++i)
        CHECK(omega0(Vec::Unit(2 * n, i), Vec::Unit(2 * n, n + i)) == doctest::Approx(1.0));
    // isotropic q-plane
    CHECK(omega0(Vec::Unit(2 * n, 0), Vec::Unit(2 * n, 1)) == doctest::Approx(0.0));
    // antisymmetry at a point
    std::mt19937_64 rng(7);
    const Vec u = random_vec(rng, 2 * n);
    CHECK(omega0(u, u) == doctest::Approx(0.0));
    CHECK_THROWS_AS(omega0(Vec::Zero(4), Vec::Zero(6)), std::invalid_argument);
}

TEST_CASE("omega0 bilinear and antisymmetric on random pairs") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 100; ++t) {
        const Vec u = random_vec(rng, 8), v = random_vec(rng, 8), w = random_vec(rng, 8);
        CHECK(omega0(u, v) == doctest::Approx(-omega0(v, u)).epsilon(1e-12));
        CHECK(omega0(u + w, v) == doctest::Approx(omega0(u, v) + omega0(w, v)).epsilon(1e-12));
    }
}

TEST_CASE("omega0 sign convention: omega0(u, v) + <J u, v> = 0") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 1000; ++t) {
        const Vec u = random_vec(rng, 6), v = random_vec(rng, 6);
        CHECK(std::abs(omega0(u, v) + apply_J(u).dot(v)) < 1e-12 * (1 + u.norm() * v.norm()));
    }
}

TEST_CASE("apply_J maps (q, p) to (p, -q)") {
    const int n = 2;
    CHECK((apply_J(Vec::Unit(2 * n, 0)) + Vec::Unit(2 * n, n)).norm() == doctest::Approx(0.0));
    CHECK((apply_J(Vec::Unit(2 * n, n)) - Vec::Unit(2 * n, 0)).norm() == doctest::Approx(0.0));
    std::mt19937_64 rng(11);
    const Vec v = random_vec(rng, 2 * n);
    CHECK((apply_J(apply_J(v)) + v).norm() == doctest::Approx(0.0));
}

TEST_CASE("leaf equivalence") {
    const CoisoIndex idx(3, 1);
    Vec x = Vec::Zero(6);
    x(0) = 0.7;
    x(3) = -0.2;  // q1, p1: inside the coisotropic subspace
    CHECK(leaf_equivalent(x, x, idx, 1e-12));

    Vec y = x;
    y(1) += 1.5;  // q2 is a leaf direction
    CHECK(leaf_equivalent(x, y, idx, 1e-12));

    Vec z = x;
    z(3) += 0.3;  // p1 lies in V1, not V0
    CHECK_FALSE(leaf_equivalent(x, z, idx, 1e-9));

    Vec w = x;
    w(4) = 0.1;  // p2 leaves the coisotropic subspace entirely
    CHECK_FALSE(leaf_equivalent(x, w, idx, 1e-9));
}

TEST_CASE("projections split the identity and respect orthogonality") {
    std::mt19937_64 rng(5);
    for (const auto& [n, k] : std::vector<std::pair<int, int>>{{1, 0}, {2, 1}, {3, 0}, {3, 3}}) {
        const CoisoIndex idx(n, k);
        for (int t = 0; t < 50; ++t) {
            const Vec v = random_vec(rng, idx.dim());
            const Vec r = project(v, Subspace::Rnk, idx);
            const Vec v0 = project(v, Subspace::V0, idx);
            const Vec v1 = project(v, Subspace::V1, idx);
            const Vec jv = project(v, Subspace::JV0, idx);
            CHECK((r - v0 - v1).lpNorm<Eigen::Infinity>() < 1e-14);
            CHECK((v - r - jv).lpNorm<Eigen::Infinity>() < 1e-14);
            CHECK(std::abs(v0.dot(v1)) < 1e-12);
            CHECK(std::abs(v0.dot(jv)) < 1e-12);
            CHECK(std::abs(v1.dot(jv)) < 1e-12);
            // Pythagoras across the orthogonal splitting
            CHECK(r.squaredNorm() + jv.squaredNorm() ==
                  doctest::Approx(v.squaredNorm()).epsilon(1e-12));
        }
    }
}

TEST_CASE("projection agrees with the Gram-Schmidt oracle") {
    std::mt19937_64 rng(17);
    const CoisoIndex idx(3, 2);
    for (Subspace which :
         {Subspace::Rnk, Subspace::V0, Subspace::V1, Subspace::JV0}) {
        const Mat B = subspace_basis(which, idx);
        for (int t = 0; t < 20; ++t) {
            const Vec v = random_vec(rng, idx.dim());
            const Vec oracle = B * (B.transpose() * v);
            CHECK((project(v, which, idx) - oracle).lpNorm<Eigen::Infinity>() < 1e-12);
        }
    }
}

TEST_CASE("basis vectors project onto themselves") {
    const CoisoIndex idx(3, 1);
    const int n = 3, k = 1;
    // q_{k+1} is a V0 basis vector
    CHECK((project(Vec::Unit(6, k), Subspace::V0, idx) - Vec::Unit(6, k)).norm() ==
          doctest::Approx(0.0));
    // p_1 is a V1 basis vector for k >= 1
    CHECK((project(Vec::Unit(6, n), Subspace::V1, idx) - Vec::Unit(6, n)).norm() ==
          doctest::Approx(0.0));
}

TEST_CASE("subgroup sample matrices fix the coisotropic subspace") {
    std::mt19937_64 rng(23);
    for (const auto& [n, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 0}, {3, 2}, {4, 2}}) {
        const CoisoIndex idx(n, k);
        const Mat B = random_symmetric(rng, n - k);
        const Mat M = sp2nk_sample(idx, B);
        CHECK(is_symplectic(M, 1e-10));
        CHECK(in_sp2nk(M, idx));
        for (int i = 0; i < idx.dim_rnk(); ++i) {
            Vec e = Vec::Zero(idx.dim_rnk());
            e(i) = 1.0;
            const Vec z = embed(e, Subspace::Rnk, idx);
            CHECK((M * z - z).lpNorm<Eigen::Infinity>() < 1e-12);
        }
    }
}

TEST_CASE("sp2nk_sample with B = 0 is the identity") {
    const CoisoIndex idx(3, 1);
    CHECK((sp2nk_sample(idx, Mat::Zero(2, 2)) - Mat::Identity(6, 6)).norm() ==
          doctest::Approx(0.0));
}

TEST_CASE("sp2nk_sample rejects non-symmetric blocks") {
    const CoisoIndex idx(3, 1);
    Mat B(2, 2);
    B << 0, 1, 0, 0;
    CHECK_THROWS_AS(sp2nk_sample(idx, B), std::invalid_argument);
}

TEST_CASE("membership separates the three classes") {
    const CoisoIndex idx(2, 1);
    CHECK(sp2nk_membership(Mat::Identity(4, 4), idx) == SpMembership::InSubgroup);

    // identity-plus-asymmetric-block is not symplectic at all; a matrix of
    // the right block shape with a non-symmetric block cannot stay in the
    // group
    Mat M = Mat::Identity(4, 4);
    M(1, 3) = 0.5;  // would need the transposed entry as well when n-k > 1
    const CoisoIndex idx31(3, 1);
    Mat M6 = Mat::Identity(6, 6);
    M6(1, 5) = 0.25;  // B not symmetric: B(0,1) = 0.25, B(1,0) = 0
    CHECK(sp2nk_membership(M6, idx31) == SpMembership::NotSymplectic);
    M6(2, 4) = 0.25;  // symmetrized block restores membership
    CHECK(sp2nk_membership(M6, idx31) == SpMembership::InSubgroup);

    // a symplectic rotation moves the coisotropic subspace
    Mat R = Mat::Zero(4, 4);
    const double c = std::cos(0.3), s = std::sin(0.3);
    R << c, 0, s, 0, 0, 1, 0, 0, -s, 0, c, 0, 0, 0, 0, 1;
    CHECK(is_symplectic(R, 1e-10));
    CHECK(sp2nk_membership(R, idx) == SpMembership::SymplecticOutside);
}

TEST_CASE("convex combinations stay in the subgroup") {
    std::mt19937_64 rng(31);
    const CoisoIndex idx(4, 1);
    for (int t = 0; t < 20; ++t) {
        const Mat A0 = sp2nk_sample(idx, random_symmetric(rng, 3));
        const Mat A1 = sp2nk_sample(idx, random_symmetric(rng, 3));
        for (double w : {0.0, 0.25, 0.5, 1.0}) {
            const Mat M = w * A0 + (1 - w) * A1;
            CHECK(in_sp2nk(M, idx));
        }
    }
}

TEST_CASE("embed and extract are mutually inverse on components") {
    std::mt19937_64 rng(37);
    const CoisoIndex idx(3, 2);
    for (Subspace which : {Subspace::Rnk, Subspace::V0, Subspace::V1, Subspace::JV0}) {
        const Vec comps = random_vec(rng, subspace_dim(which, idx));
        CHECK((extract(embed(comps, which, idx), which, idx) - comps).norm() ==
              doctest::Approx(0.0));
    }
}
