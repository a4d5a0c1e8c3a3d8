#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coisocap/clarke_dual.hpp"
#include "coisocap/convex_body.hpp"

namespace coisocap {

/// Index chain l_j = max(l_{j-1} - n_j, 0) for a product splitting
/// dims = (n_1..n_m); returns (l_0..l_{m-1}).
std::vector<int> product_index_chain(int l0, const std::vector<int>& dims);

/// Effective per-factor index k_i = min(n_i, l_{i-1}).
std::vector<int> product_effective_indices(int l0, const std::vector<int>& dims);

/// Capacity of a product from per-factor evaluators: the minimum over
/// factors of the factor capacity at its effective index.  Each factor is
/// the pair (n_i, evaluator taking k_i).  The same value applies to the
/// product of the factor boundaries.
double product_capacity(const std::vector<std::pair<int, std::function<double(int)>>>& factors,
                        int l0);

/// pi r^2 for kk = 1, pi r^2 / 2 for kk = 0.
double disc_capacity(double r, int kk);

/// Reference constants for k < n: the unit ball, the half-cylinder
/// staircase domain and the bounded cylinder slab all have capacity pi/2.
struct NontrivialityConstants {
    double ball;
    double w_domain;
    double u_domain;
};
NontrivialityConstants nontriviality_constants(const CoisoIndex& idx);

/// Closed-form capacity when one is known: balls, per-plane ellipsoids,
/// products of such (via the index chain), and their translates along the
/// coisotropic subspace.  Returns nullopt when only the dual solver
/// applies.
std::optional<double> closed_form_capacity(const Body& body, const CoisoIndex& idx);

struct AxiomCheck {
    std::string name;
    double measured;  // the quantity under test (ratio or margin)
    double lo, hi;    // admissible interval
    bool pass;
    std::string detail;
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;
    bool all_pass;
};

using CapacityFn =
    std::function<double(BodyPtr, const CoisoIndex&, const SolverOptions&)>;

/// Runs the solver on the body and on its scaled, translated and enlarged
/// variants, and reports the relative violation of monotonicity,
/// conformality and translation invariance.  Solver failures are recorded
/// per case and the harness continues.  A custom evaluator can replace the
/// solver (used by negative-control tests).
AxiomReport axiom_harness(BodyPtr body, const CoisoIndex& idx, const SolverOptions& opts,
                          const CapacityFn& eval = {});

}  // namespace coisocap
