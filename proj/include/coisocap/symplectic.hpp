#pragma once

#include <Eigen/Dense>

namespace coisocap {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Index pair (n, k), 0 <= k <= n, fixing the coisotropic subspace of
/// R^{2n} spanned by all position coordinates q_1..q_n and the first k
/// momentum coordinates p_1..p_k.  Coordinates are ordered
/// (q_1..q_n, p_1..p_n) throughout.
///
/// Three subspaces recur everywhere:
///   V0  = span{q_{k+1}..q_n}          (leaf directions, dim n-k)
///   V1  = span{q_1..q_k, p_1..p_k}    (symplectic part, dim 2k)
///   Rnk = V0 + V1                     (the coisotropic subspace, dim n+k)
/// and R^{2n} = J V0 (+) Rnk orthogonally.
struct CoisoIndex {
    int n;
    int k;

    CoisoIndex(int n_, int k_);

    int dim() const { return 2 * n; }
    int dim_v0() const { return n - k; }
    int dim_v1() const { return 2 * k; }
    int dim_rnk() const { return n + k; }
};

enum class Subspace { Rnk, V0, V1, JV0 };

/// Membership classification for the subgroup of symplectic matrices
/// fixing the coisotropic subspace pointwise.
enum class SpMembership { InSubgroup, SymplecticOutside, NotSymplectic };

/// Standard symplectic form, omega0(u, v) = <-J u, v>.  With this sign a
/// clockwise unit circle in a (q_i, p_i) plane has action +pi.
double omega0(const Vec& u, const Vec& v);

/// Standard complex structure: (q, p) |-> (p, -q).  Satisfies J^2 = -I.
Vec apply_J(const Vec& v);

/// True iff x and y both lie in the coisotropic subspace (within tol) and
/// x - y lies in the leaf directions V0 (within tol).
bool leaf_equivalent(const Vec& x, const Vec& y, const CoisoIndex& idx, double tol = 1e-9);

/// Orthogonal projection onto one of the four canonical subspaces.
Vec project(const Vec& v, Subspace which, const CoisoIndex& idx);

int subspace_dim(Subspace which, const CoisoIndex& idx);

/// Embeds component coordinates of a subspace into a full phase-space
/// vector.  Component order: V0 = (q_{k+1}..q_n); V1 = (q_1..q_k, p_1..p_k);
/// Rnk = (q_1..q_n, p_1..p_k); JV0 = (p_{k+1}..p_n).
Vec embed(const Vec& comps, Subspace which, const CoisoIndex& idx);

/// Adjoint of embed: reads the subspace components out of a full vector.
Vec extract(const Vec& full, Subspace which, const CoisoIndex& idx);

/// M^T J M = J within tol.
bool is_symplectic(const Mat& M, double tol = 1e-10);

/// Classifies M against the subgroup of Sp(2n) fixing the coisotropic
/// subspace pointwise.  Members are exactly the matrices equal to the
/// identity except for a symmetric (n-k)x(n-k) block coupling the
/// leaf momenta p_{k+1}..p_n into the leaf positions q_{k+1}..q_n.
SpMembership sp2nk_membership(const Mat& M, const CoisoIndex& idx, double tol = 1e-9);

/// Convenience: sp2nk_membership(...) == InSubgroup.
bool in_sp2nk(const Mat& M, const CoisoIndex& idx, double tol = 1e-9);

/// Builds the subgroup element with the given symmetric block B.
/// B = 0 yields the identity; the result fixes every vector of the
/// coisotropic subspace.  Throws std::invalid_argument if B is not
/// symmetric (n-k)x(n-k).
Mat sp2nk_sample(const CoisoIndex& idx, const Mat& B);

}  // namespace coisocap
