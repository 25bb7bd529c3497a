#pragma once

#include "proxplast/state.hpp"

namespace proxplast {

/// Optimality residuals of a state, measured against the three conditions
/// that characterize a solution: force balance, stress admissibility, and
/// zero complementarity gap between dissipation and plastic work. The gap
/// g_l = dissipation(eps_p_l) - sigma_l : eps_p_l is nonnegative whenever
/// sigma_l is admissible (Fenchel-Young), and all three families vanish
/// exactly at a solution.
struct KktReport {
    double force_residual_norm = 0.0;
    std::vector<double> flow_feasibility;    ///< distance of sigma_l to Y_l
    std::vector<double> complementarity_gap; ///< dissipation - plastic work
    double max_feasibility = 0.0;
    double max_gap = 0.0; ///< max of |g_l|
    double tol = 0.0;
    bool pass = false;
};

/// Evaluate the three residual families at (du, eps_p); passes iff all are
/// within tol. The subdifferential flow rule is tested through the
/// equivalent pair (admissibility, zero gap), which avoids enumerating the
/// set-valued subdifferential at kinks.
KktReport kkt_check(const Model& m, const IterateState& s, double tol);

/// Check that zeta satisfies the resolvent characterization of the prox at
/// (x, beta): (x - zeta) / beta is admissible and the subgradient inequality
/// holds against `probes` sampled directions. Used as a certificate for the
/// prox and as a negative control in tests.
bool subgradient_certificate(const YieldCriterion& c, const SymTensor3& x, double beta,
                             const SymTensor3& zeta, int probes = 1000);

/// subgradient_certificate applied to the prox output itself.
bool resolvent_equivalence_test(const YieldCriterion& c, const SymTensor3& x, double beta);

struct BruteForceOptions {
    double alpha_scale = 0.1;          ///< fraction of 1 / trace bound
    long long iterations = 1000000;    ///< fixed-length plain iteration
};

/// Reference solver for tiny instances (num_dofs + 6 * num_points <= 30):
/// plain proximal gradient with a deliberately small step, run long, sharing
/// only the tensor algebra and the prox with the main solver. Refuses larger
/// instances.
IterateState brute_force_solve(const Model& m, const BruteForceOptions& opt = {});

} // namespace proxplast
