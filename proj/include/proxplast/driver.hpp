#pragma once

#include "proxplast/solver.hpp"

namespace proxplast {

/// One quasi-static load step: either a factor on the reference pattern or
/// an explicit load vector. Nonpositive overrides inherit the run config.
struct LoadStep {
    double lambda = 1.0;
    std::vector<double> explicit_load; ///< overrides lambda * q_ref when nonempty
    double tol = 0.0;
    long long max_iters = 0;
};

/// Ordered load program over the analysis interval. Factors must increase
/// strictly unless the path is declared nonmonotone (unloading).
struct LoadPath {
    std::vector<LoadStep> steps;
    bool allow_nonmonotone = false;
};

/// Tolerances a converged step must meet before its stresses are committed
/// as the next step's initial state. The force threshold is relative:
/// force_residual <= force_rel * (1 + ||q||).
struct CommitTolerances {
    double force_rel = 1e-6;
    double feasibility = 1e-8;
    double gap = 1e-8;
};

struct StepRecord {
    double lambda = 0.0;
    bool converged = false;
    bool collapsed = false;
    std::vector<double> du;      ///< increment of this step
    std::vector<double> total_u; ///< accumulated displacement
    std::vector<SymTensor3> eps_p;
    std::vector<SymTensor3> total_eps_p;
    std::vector<SymTensor3> sigma;  ///< committed stress (sigma0 of the next step)
    std::vector<SymTensor3> sigma0; ///< stress at the start of this step
    long long iterations = 0;
    int restarts = 0;
    double warm_start_scale = 0.0;
    KktReport kkt;
    ConvergenceReport report;
};

struct PathRecord {
    std::vector<StepRecord> steps;
    bool truncated = false;
    int failed_step = -1; ///< 0-based index of the failing step
    double failed_lambda = 0.0;
    std::string failure; ///< "", "collapse", "non_converged", or "kkt"
};

/// Run the load program: per step, scale the load, solve warm-started from
/// the previous increments, gate on the commit tolerances, then commit the
/// stresses and accumulate the history. Stops and marks the record truncated
/// at the first collapsed, non-converged, or unverifiable step.
PathRecord run_path(const Model& m, const LoadPath& path, const SolverConfig& cfg,
                    const CommitTolerances& commit = {});

/// Direct linear elastic solve sum_l w_l stiffness * u = q - initial-stress
/// forces, by dense Cholesky. Cross-check and warm-start utility only.
std::vector<double> elastic_reference(const Model& m, const std::vector<double>& q);

} // namespace proxplast
