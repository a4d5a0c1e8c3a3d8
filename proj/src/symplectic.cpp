#include "coisocap/symplectic.hpp"

#include <stdexcept>
#include <string>

namespace coisocap {

CoisoIndex::CoisoIndex(int n_, int k_) : n(n_), k(k_) {
    if (n < 1) throw std::invalid_argument("CoisoIndex: n must be >= 1");
    if (k < 0 || k > n) throw std::invalid_argument("CoisoIndex: need 0 <= k <= n");
}

static void check_dim(const Vec& v, const Vec& w) {
    if (v.size() != w.size())
        throw std::invalid_argument("omega0: dimension mismatch (" + std::to_string(v.size()) +
                                    " vs " + std::to_string(w.size()) + ")");
    if (v.size() % 2 != 0) throw std::invalid_argument("omega0: odd dimension");
}

double omega0(const Vec& u, const Vec& v) {
    check_dim(u, v);
    const Eigen::Index n = u.size() / 2;
    // <-Ju, v> = sum_i u_qi v_pi - u_pi v_qi
    return u.head(n).dot(v.tail(n)) - u.tail(n).dot(v.head(n));
}

Vec apply_J(const Vec& v) {
    if (v.size() % 2 != 0) throw std::invalid_argument("apply_J: odd dimension");
    const Eigen::Index n = v.size() / 2;
    Vec out(v.size());
    out.head(n) = v.tail(n);
    out.tail(n) = -v.head(n);
    return out;
}

Vec project(const Vec& v, Subspace which, const CoisoIndex& idx) {
    if (v.size() != idx.dim()) throw std::invalid_argument("project: dimension mismatch");
    const int n = idx.n, k = idx.k;
    Vec out = Vec::Zero(v.size());
    switch (which) {
        case Subspace::Rnk:
            out.head(n) = v.head(n);
            out.segment(n, k) = v.segment(n, k);
            break;
        case Subspace::V0:
            out.segment(k, n - k) = v.segment(k, n - k);
            break;
        case Subspace::V1:
            out.head(k) = v.head(k);
            out.segment(n, k) = v.segment(n, k);
            break;
        case Subspace::JV0:
            out.segment(n + k, n - k) = v.segment(n + k, n - k);
            break;
    }
    return out;
}

int subspace_dim(Subspace which, const CoisoIndex& idx) {
    switch (which) {
        case Subspace::Rnk: return idx.dim_rnk();
        case Subspace::V0: return idx.dim_v0();
        case Subspace::V1: return idx.dim_v1();
        case Subspace::JV0: return idx.dim_v0();
    }
    return 0;
}

Vec embed(const Vec& comps, Subspace which, const CoisoIndex& idx) {
    if (comps.size() != subspace_dim(which, idx))
        throw std::invalid_argument("embed: component size mismatch");
    const int n = idx.n, k = idx.k;
    Vec out = Vec::Zero(idx.dim());
    switch (which) {
        case Subspace::Rnk:
            out.head(n) = comps.head(n);
            out.segment(n, k) = comps.tail(k);
            break;
        case Subspace::V0:
            out.segment(k, n - k) = comps;
            break;
        case Subspace::V1:
            out.head(k) = comps.head(k);
            out.segment(n, k) = comps.tail(k);
            break;
        case Subspace::JV0:
            out.segment(n + k, n - k) = comps;
            break;
    }
    return out;
}

Vec extract(const Vec& full, Subspace which, const CoisoIndex& idx) {
    if (full.size() != idx.dim()) throw std::invalid_argument("extract: dimension mismatch");
    const int n = idx.n, k = idx.k;
    Vec out(subspace_dim(which, idx));
    switch (which) {
        case Subspace::Rnk:
            out.head(n) = full.head(n);
            out.tail(k) = full.segment(n, k);
            break;
        case Subspace::V0:
            out = full.segment(k, n - k);
            break;
        case Subspace::V1:
            out.head(k) = full.head(k);
            out.tail(k) = full.segment(n, k);
            break;
        case Subspace::JV0:
            out = full.segment(n + k, n - k);
            break;
    }
    return out;
}

bool leaf_equivalent(const Vec& x, const Vec& y, const CoisoIndex& idx, double tol) {
    if (x.size() != idx.dim() || y.size() != idx.dim()) return false;
    if ((x - project(x, Subspace::Rnk, idx)).lpNorm<Eigen::Infinity>() > tol) return false;
    if ((y - project(y, Subspace::Rnk, idx)).lpNorm<Eigen::Infinity>() > tol) return false;
    const Vec d = x - y;
    return (d - project(d, Subspace::V0, idx)).lpNorm<Eigen::Infinity>() <= tol;
}

bool is_symplectic(const Mat& M, double tol) {
    if (M.rows() != M.cols() || M.rows() % 2 != 0) return false;
    const Eigen::Index n = M.rows() / 2;
    Mat J = Mat::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = Mat::Identity(n, n);
    J.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    // columns of J here give J e_qi = -e_pi, J e_pi = e_qi
    return (M.transpose() * J * M - J).lpNorm<Eigen::Infinity>() <= tol;
}

SpMembership sp2nk_membership(const Mat& M, const CoisoIndex& idx, double tol) {
    if (M.rows() != idx.dim() || M.cols() != idx.dim())
        throw std::invalid_argument("sp2nk_membership: dimension mismatch");
    if (!is_symplectic(M, std::max(tol, 1e-10))) return SpMembership::NotSymplectic;
    const int n = idx.n, k = idx.k;
    Mat B = M.block(k, n + k, n - k, n - k);
    if ((B - B.transpose()).lpNorm<Eigen::Infinity>() > tol) return SpMembership::SymplecticOutside;
    Mat ref = sp2nk_sample(idx, Mat(0.5 * (B + B.transpose())));
    return (M - ref).lpNorm<Eigen::Infinity>() <= tol ? SpMembership::InSubgroup
                                                      : SpMembership::SymplecticOutside;
}

bool in_sp2nk(const Mat& M, const CoisoIndex& idx, double tol) {
    return sp2nk_membership(M, idx, tol) == SpMembership::InSubgroup;
}

Mat sp2nk_sample(const CoisoIndex& idx, const Mat& B) {
    const int n = idx.n, k = idx.k;
    if (B.rows() != n - k || B.cols() != n - k)
        throw std::invalid_argument("sp2nk_sample: B must be (n-k)x(n-k)");
    if ((B - B.transpose()).lpNorm<Eigen::Infinity>() > 1e-12)
        throw std::invalid_argument("sp2nk_sample: B must be symmetric");
    Mat M = Mat::Identity(2 * n, 2 * n);
    // leaf momenta feed into leaf positions through the symmetric block
    M.block(k, n + k, n - k, n - k) = B;
    return M;
}

}  // namespace coisocap
