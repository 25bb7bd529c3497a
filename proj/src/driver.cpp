#include "proxplast/driver.hpp"

#include <algorithm>
#include <cmath>

#include "proxplast/log.hpp"

namespace proxplast {

namespace {

inline double slot_weight(int comp) { return comp < 3 ? 1.0 : 2.0; }

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

bool commit_gate(const KktReport& kkt, const CommitTolerances& commit, double q_norm) {
    return kkt.force_residual_norm <= commit.force_rel * (1.0 + q_norm) &&
           kkt.max_feasibility <= commit.feasibility && kkt.max_gap <= commit.gap;
}

} // namespace

PathRecord run_path(const Model& m, const LoadPath& path, const SolverConfig& cfg,
                    const CommitTolerances& commit) {
    if (path.steps.empty()) throw InputError("run_path: the load path is empty");
    if (!path.allow_nonmonotone) {
        for (std::size_t i = 1; i < path.steps.size(); ++i)
            if (!(path.steps[i].lambda > path.steps[i - 1].lambda))
                throw InputError("run_path: load factors must increase strictly "
                                 "(declare the path nonmonotone to allow unloading)");
    }
    for (const LoadStep& step : path.steps)
        if (!step.explicit_load.empty() &&
            static_cast<int>(step.explicit_load.size()) != m.num_dofs)
            throw InputError("run_path: explicit step load length does not match the dof count");

    const std::vector<double> q_ref = m.load;
    Model working = m;

    PathRecord record;
    std::vector<double> total_u(static_cast<std::size_t>(m.num_dofs), 0.0);
    std::vector<SymTensor3> total_eps_p(m.points.size());
    IterateState prev_increment;
    double prev_dlambda = 0.0;
    bool have_prev = false;

    for (std::size_t i = 0; i < path.steps.size(); ++i) {
        const LoadStep& step = path.steps[i];
        if (step.explicit_load.empty()) {
            working.load.resize(q_ref.size());
            for (std::size_t j = 0; j < q_ref.size(); ++j) working.load[j] = step.lambda * q_ref[j];
        } else {
            working.load = step.explicit_load;
        }

        SolverConfig step_cfg = cfg;
        if (step.tol > 0.0) step_cfg.tol = step.tol;
        if (step.max_iters > 0) step_cfg.max_iters = step.max_iters;

        // Continuation warm start: previous increments scaled by the load
        // factor ratio; the history starts unloaded, so the first ratio uses
        // lambda_0 = 0.
        IterateState init = zero_state(working);
        double warm_scale = 0.0;
        if (have_prev && step.explicit_load.empty()) {
            const double dlambda = step.lambda - (i > 0 ? path.steps[i - 1].lambda : 0.0);
            if (std::abs(prev_dlambda) > 1e-300) {
                warm_scale = dlambda / prev_dlambda;
                for (std::size_t j = 0; j < init.du.size(); ++j)
                    init.du[j] = warm_scale * prev_increment.du[j];
                for (std::size_t l = 0; l < init.eps_p.size(); ++l)
                    init.eps_p[l] = warm_scale * prev_increment.eps_p[l];
            }
        } else if (have_prev && !step.explicit_load.empty()) {
            warm_scale = 1.0;
            init.du = prev_increment.du;
            init.eps_p = prev_increment.eps_p;
        }

        IterateState state;
        ConvergenceReport report;
        {
            auto result = solve(working, std::move(init), step_cfg);
            state = std::move(result.first);
            report = std::move(result.second);
        }

        // Verify before committing; a converged-looking step that misses the
        // commit tolerances is re-solved tighter from where it stopped.
        const double q_norm = norm2(working.load);
        KktReport kkt = kkt_check(working, state, commit.feasibility);
        int retries = 0;
        while (report.converged && !commit_gate(kkt, commit, q_norm) && retries < 2) {
            ++retries;
            SolverConfig tight = step_cfg;
            tight.tol = step_cfg.tol * std::pow(0.01, retries);
            log_message(LogLevel::info,
                        "step %zu: commit tolerances missed, re-solving at tol %.1e", i + 1, tight.tol);
            auto result = solve(working, std::move(state), tight);
            state = std::move(result.first);
            report = std::move(result.second);
            kkt = kkt_check(working, state, commit.feasibility);
        }

        StepRecord rec;
        rec.lambda = step.lambda;
        rec.converged = report.converged;
        rec.collapsed = report.collapsed;
        rec.iterations = report.iterations;
        rec.restarts = report.restarts;
        rec.warm_start_scale = warm_scale;
        rec.du = state.du;
        rec.eps_p = state.eps_p;
        rec.sigma = state.sigma;
        rec.sigma0.resize(working.points.size());
        for (std::size_t l = 0; l < working.points.size(); ++l) rec.sigma0[l] = working.points[l].sigma0;
        rec.kkt = kkt;
        rec.report = std::move(report);

        const bool verified = rec.converged && commit_gate(kkt, commit, q_norm);
        if (!verified) {
            rec.total_u = total_u;
            rec.total_eps_p = total_eps_p;
            record.truncated = true;
            record.failed_step = static_cast<int>(i);
            record.failed_lambda = step.lambda;
            record.failure = rec.collapsed ? "collapse" : (rec.converged ? "kkt" : "non_converged");
            record.steps.push_back(std::move(rec));
            log_message(LogLevel::info, "path truncated at step %zu (lambda %.6g): %s", i + 1,
                        step.lambda, record.failure.c_str());
            return record;
        }

        // Commit: the converged stress becomes the next step's known stress.
        for (std::size_t l = 0; l < working.points.size(); ++l)
            working.points[l].sigma0 = state.sigma[l];
        for (std::size_t j = 0; j < total_u.size(); ++j) total_u[j] += state.du[j];
        for (std::size_t l = 0; l < total_eps_p.size(); ++l) total_eps_p[l] += state.eps_p[l];
        rec.total_u = total_u;
        rec.total_eps_p = total_eps_p;

        prev_increment = std::move(state);
        prev_dlambda = step.lambda - (i > 0 ? path.steps[i - 1].lambda : 0.0);
        have_prev = true;

        log_message(LogLevel::info, "step %zu: lambda %.6g converged in %lld iterations", i + 1,
                    step.lambda, rec.iterations);
        record.steps.push_back(std::move(rec));
    }
    return record;
}

std::vector<double> elastic_reference(const Model& m, const std::vector<double>& q) {
    if (static_cast<int>(q.size()) != m.num_dofs)
        throw InputError("elastic_reference: load length does not match the dof count");
    const std::size_t d = static_cast<std::size_t>(m.num_dofs);

    // Dense stiffness: K = sum_l weight_l B*_l C_l B_l, plus the
    // initial-stress forces moved to the right-hand side.
    std::vector<double> K(d * d, 0.0);
    std::vector<double> rhs = q;
    for (const IntegrationPoint& p : m.points) {
        std::vector<int> dofs;
        for (const BEntry& entry : p.b)
            if (std::find(dofs.begin(), dofs.end(), entry.dof) == dofs.end()) dofs.push_back(entry.dof);
        std::vector<SymTensor3> columns(dofs.size());
        for (std::size_t a = 0; a < dofs.size(); ++a) {
            SymTensor3 col;
            for (const BEntry& entry : p.b)
                if (entry.dof == dofs[a]) col[entry.comp] += entry.coeff;
            columns[a] = col;
        }
        for (std::size_t a = 0; a < dofs.size(); ++a) {
            const SymTensor3 s = p.elastic.apply(columns[a]);
            for (std::size_t bidx = 0; bidx < dofs.size(); ++bidx)
                K[static_cast<std::size_t>(dofs[bidx]) * d + static_cast<std::size_t>(dofs[a])] +=
                    p.weight * ddot(s, columns[bidx]);
            rhs[static_cast<std::size_t>(dofs[a])] -= p.weight * ddot(p.sigma0, columns[a]);
        }
    }

    // Cholesky factorization in place; the stiffness is symmetric positive
    // definite for a properly supported structure.
    double diag_scale = 0.0;
    for (std::size_t i = 0; i < d; ++i) diag_scale = std::max(diag_scale, std::abs(K[i * d + i]));
    for (std::size_t jcol = 0; jcol < d; ++jcol) {
        double pivot = K[jcol * d + jcol];
        for (std::size_t kk = 0; kk < jcol; ++kk) pivot -= K[jcol * d + kk] * K[jcol * d + kk];
        if (!(pivot > 1e-14 * std::max(diag_scale, 1.0)))
            throw InputError("elastic_reference: singular stiffness matrix");
        const double Ljj = std::sqrt(pivot);
        K[jcol * d + jcol] = Ljj;
        for (std::size_t irow = jcol + 1; irow < d; ++irow) {
            double sum = K[irow * d + jcol];
            for (std::size_t kk = 0; kk < jcol; ++kk) sum -= K[irow * d + kk] * K[jcol * d + kk];
            K[irow * d + jcol] = sum / Ljj;
        }
    }
    std::vector<double> y(d);
    for (std::size_t i = 0; i < d; ++i) {
        double sum = rhs[i];
        for (std::size_t kk = 0; kk < i; ++kk) sum -= K[i * d + kk] * y[kk];
        y[i] = sum / K[i * d + i];
    }
    std::vector<double> u(d);
    for (std::size_t ii = d; ii-- > 0;) {
        double sum = y[ii];
        for (std::size_t kk = ii + 1; kk < d; ++kk) sum -= K[kk * d + ii] * u[kk];
        u[ii] = sum / K[ii * d + ii];
    }
    return u;
}

} // namespace proxplast
