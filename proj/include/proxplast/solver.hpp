#pragma once

#include <string>
#include <utility>

#include "proxplast/state.hpp"
#include "proxplast/verify.hpp"

namespace proxplast {

enum class SolveMode { plain, accelerated, accelerated_restart };

struct SolverConfig {
    SolveMode mode = SolveMode::accelerated_restart;
    /// Explicit step length; 0 means alpha_scale / lipschitz_upper_bound.
    double alpha = 0.0;
    /// Fraction of 1/L used when alpha == 0; must lie in (0, 1].
    double alpha_scale = 1.0;
    /// Relative factor for the default termination tolerances.
    double tol = 1e-8;
    /// Absolute overrides; 0 derives tol * (||q|| * alpha + 1).
    double tol_du = 0.0;
    double tol_eps = 0.0;
    long long max_iters = 200000;
    int threads = 1; ///< 0 = all hardware threads
    /// Objective values below this flag the problem as unbounded.
    double objective_floor = -1e18;
    /// Cadence of the unbounded-ray check; 0 disables it.
    long long collapse_check_interval = 500;
    bool record_history = true;
};

/// FISTA momentum bookkeeping: t_0 = 1, t_{k+1} = (1 + sqrt(1+4 t_k^2)) / 2,
/// momentum weight (t_k - 1) / t_{k+1} in [0, 1).
struct AccelerationState {
    double t = 1.0;
    int restarts = 0;
};

/// Function-value restart: if the objective rose, reset t to 1 and count a
/// restart (the caller re-anchors the extrapolated point at the latest
/// iterate); otherwise advance t by the momentum recurrence. Returns whether
/// a restart fired.
bool restart_check(double prev_objective, double new_objective, AccelerationState& acc);

struct IterationRecord {
    long long iter = 0;
    double objective = 0.0;
    double residual_norm = 0.0;
    double step_du = 0.0;
    double step_eps = 0.0;
    bool restarted = false;
};

struct ConvergenceReport {
    std::string termination; ///< "converged", "max_iters", or "collapse"
    bool converged = false;
    bool collapsed = false;
    long long iterations = 0;
    int restarts = 0;
    double alpha = 0.0;
    double lipschitz = 0.0;
    double tol_du = 0.0;
    double tol_eps = 0.0;
    std::vector<IterationRecord> history;
    KktReport kkt; ///< at the returned state, tol = 100 x solver tolerance
};

/// Step length for a config on a model; computes the Lipschitz bound when no
/// explicit alpha is given. L_out receives the bound used (0 if bypassed).
double resolve_alpha(const Model& m, const SolverConfig& cfg, double* L_out = nullptr);

/// One proximal gradient step from s: refresh caches if stale, then
///   du'    = du - alpha * residual
///   eps_p' = prox of (eps_p_l + weight_l * alpha * sigma_l) per point,
/// both updates reading the same incumbent stress. The returned state is
/// refreshed.
IterateState pg_step(const Model& m, const IterateState& s, double alpha, int threads = 1);

/// pg_step with the step length resolved from the config.
IterateState pg_step(const Model& m, const IterateState& s, const SolverConfig& cfg);

/// Run the iteration from `init` until both step norms fall within
/// tolerance, max_iters is hit, or the problem is flagged unbounded.
/// Accelerated modes step from the extrapolated point; the restart mode
/// additionally applies restart_check each iteration. Returns the final (or
/// best, if not converged) iterate and the report.
std::pair<IterateState, ConvergenceReport> solve(const Model& m, IterateState init,
                                                 const SolverConfig& cfg);

/// solve() starting from the zero state.
std::pair<IterateState, ConvergenceReport> solve(const Model& m, const SolverConfig& cfg);

} // namespace proxplast
