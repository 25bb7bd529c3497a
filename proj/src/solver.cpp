#include "proxplast/solver.hpp"

#include <algorithm>
#include <cmath>

#include "proxplast/log.hpp"
#include "proxplast/parallel.hpp"

namespace proxplast {

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double max_step_eps(const std::vector<SymTensor3>& a, const std::vector<SymTensor3>& b) {
    double m = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) m = std::max(m, frobenius_norm(a[l] - b[l]));
    return m;
}

// Unboundedness certificate along a drift direction (v_u, v_p): the smooth
// energy is quadratic, so the objective is affine along any direction in the
// null space of the quadratic form. If additionally the asymptotic slope
// (initial-stress work + dissipation rate - external work rate) is negative,
// the objective is unbounded below: the load exceeds what the yield sets can
// sustain.
bool unbounded_ray(const Model& m, const std::vector<double>& v_u,
                   const std::vector<SymTensor3>& v_p, double quad_scale, double slope_scale) {
    double n2 = 0.0;
    for (double x : v_u) n2 += x * x;
    for (const SymTensor3& t : v_p) n2 += ddot(t, t);
    const double n = std::sqrt(n2);
    if (!(n > 1e-300)) return false;

    double quad = 0.0;
    double slope = 0.0;
    for (int l = 0; l < m.num_points(); ++l) {
        const IntegrationPoint& p = m.points[static_cast<std::size_t>(l)];
        SymTensor3 e = -1.0 / n * v_p[static_cast<std::size_t>(l)];
        for (const BEntry& entry : p.b)
            e[entry.comp] += entry.coeff / n * v_u[static_cast<std::size_t>(entry.dof)];
        quad += p.weight * ddot(p.elastic.apply(e), e);
        slope += p.weight * ddot(p.sigma0, e);
        slope += p.weight * dissipation(p.criterion, 1.0 / n * v_p[static_cast<std::size_t>(l)]);
    }
    for (int i = 0; i < m.num_dofs; ++i)
        slope -= m.load[static_cast<std::size_t>(i)] * v_u[static_cast<std::size_t>(i)] / n;

    return quad <= 1e-8 * quad_scale && slope <= -1e-8 * slope_scale;
}

} // namespace

bool restart_check(double prev_objective, double new_objective, AccelerationState& acc) {
    if (new_objective > prev_objective) {
        acc.t = 1.0;
        acc.restarts += 1;
        return true;
    }
    acc.t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * acc.t * acc.t));
    return false;
}

double resolve_alpha(const Model& m, const SolverConfig& cfg, double* L_out) {
    if (L_out != nullptr) *L_out = 0.0;
    if (cfg.alpha > 0.0) return cfg.alpha;
    if (!(cfg.alpha_scale > 0.0 && cfg.alpha_scale <= 1.0))
        throw InputError("solver: alpha_scale must lie in (0, 1]");
    const double L = lipschitz_upper_bound(m);
    if (L_out != nullptr) *L_out = L;
    return cfg.alpha_scale / L;
}

IterateState pg_step(const Model& m, const IterateState& s, double alpha, int threads) {
    if (!(alpha > 0.0)) throw InputError("pg_step: step length must be > 0");
    IterateState scratch;
    const IterateState* base = &s;
    if (!s.fresh) {
        scratch = s;
        refresh(m, scratch, threads);
        base = &scratch;
    }

    IterateState next;
    next.du.resize(static_cast<std::size_t>(m.num_dofs));
    next.eps_p.resize(m.points.size());
    for (int i = 0; i < m.num_dofs; ++i)
        next.du[static_cast<std::size_t>(i)] =
            base->du[static_cast<std::size_t>(i)] - alpha * base->residual[static_cast<std::size_t>(i)];
    parallel_for(m.num_points(), threads, [&](int begin, int end) {
        for (int l = begin; l < end; ++l) {
            const IntegrationPoint& p = m.points[static_cast<std::size_t>(l)];
            const double beta = p.weight * alpha;
            next.eps_p[static_cast<std::size_t>(l)] = prox_dissipation(
                p.criterion, base->eps_p[static_cast<std::size_t>(l)] + beta * base->sigma[static_cast<std::size_t>(l)],
                beta);
        }
    });
    refresh(m, next, threads);
    return next;
}

IterateState pg_step(const Model& m, const IterateState& s, const SolverConfig& cfg) {
    return pg_step(m, s, resolve_alpha(m, cfg), cfg.threads);
}

std::pair<IterateState, ConvergenceReport> solve(const Model& m, IterateState init,
                                                 const SolverConfig& cfg) {
    if (static_cast<int>(init.du.size()) != m.num_dofs ||
        static_cast<int>(init.eps_p.size()) != m.num_points())
        throw InputError("solve: initial state dimensions do not match the model");

    ConvergenceReport report;
    const double alpha = resolve_alpha(m, cfg, &report.lipschitz);
    report.alpha = alpha;

    const double q_norm = norm2(m.load);
    const double scale = q_norm * alpha + 1.0;
    const double tol_du = cfg.tol_du > 0.0 ? cfg.tol_du : cfg.tol * scale;
    const double tol_eps = cfg.tol_eps > 0.0 ? cfg.tol_eps : cfg.tol * scale;
    report.tol_du = tol_du;
    report.tol_eps = tol_eps;

    const double quad_scale = std::max(1.0, report.lipschitz > 0.0 ? report.lipschitz : 1.0 / alpha);
    const double slope_scale = 1.0 + q_norm;

    IterateState x = std::move(init);
    refresh(m, x, cfg.threads);
    IterateState v = x;
    IterateState best = x;
    IterateState snap = x;

    AccelerationState acc;
    bool converged = false;
    bool collapsed = false;
    // A small step only certifies a small error once the geometric tail
    // step * rho / (1 - rho) is within tolerance, with the contraction ratio
    // rho measured from two consecutive momentum-free steps. Accelerated
    // modes reset the extrapolation and take two plain probe steps to
    // measure it; plain mode reads it off the running step norms.
    int probe_stage = 0;
    double probe_s1 = -1.0;
    double prev_step_sum = -1.0;
    const auto tail_ok = [&](double s_prev, double step_du, double step_eps) {
        const double s_now = step_du + step_eps;
        if (s_now == 0.0) return true;
        if (s_prev <= 0.0 || s_now >= s_prev) return false;
        const double rho = s_now / s_prev;
        const double factor = rho / (1.0 - rho);
        return step_du * factor <= tol_du && step_eps * factor <= tol_eps;
    };
    long long k = 0;

    for (; k < cfg.max_iters; ++k) {
        IterateState* base = &x;
        if (cfg.mode != SolveMode::plain) {
            if (!v.fresh) refresh(m, v, cfg.threads);
            base = &v;
        }
        IterateState xn = pg_step(m, *base, alpha, cfg.threads);

        const double step_du = [&] {
            double s = 0.0;
            for (std::size_t i = 0; i < xn.du.size(); ++i) {
                const double d = xn.du[i] - x.du[i];
                s += d * d;
            }
            return std::sqrt(s);
        }();
        const double step_eps = max_step_eps(xn.eps_p, x.eps_p);

        bool restarted = false;
        if (cfg.mode == SolveMode::accelerated_restart) {
            const double t_old = acc.t;
            restarted = restart_check(x.objective, xn.objective, acc);
            if (restarted) {
                v = xn; // re-anchor the extrapolation at the latest iterate
            } else {
                const double omega = (t_old - 1.0) / acc.t;
                v.du.resize(xn.du.size());
                v.eps_p.resize(xn.eps_p.size());
                for (std::size_t i = 0; i < xn.du.size(); ++i)
                    v.du[i] = xn.du[i] + omega * (xn.du[i] - x.du[i]);
                for (std::size_t l = 0; l < xn.eps_p.size(); ++l)
                    v.eps_p[l] = xn.eps_p[l] + omega * (xn.eps_p[l] - x.eps_p[l]);
                v.fresh = false;
            }
        } else if (cfg.mode == SolveMode::accelerated) {
            const double t_old = acc.t;
            acc.t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_old * t_old));
            const double omega = (t_old - 1.0) / acc.t;
            v.du.resize(xn.du.size());
            v.eps_p.resize(xn.eps_p.size());
            for (std::size_t i = 0; i < xn.du.size(); ++i)
                v.du[i] = xn.du[i] + omega * (xn.du[i] - x.du[i]);
            for (std::size_t l = 0; l < xn.eps_p.size(); ++l)
                v.eps_p[l] = xn.eps_p[l] + omega * (xn.eps_p[l] - x.eps_p[l]);
            v.fresh = false;
        }

        if (cfg.record_history)
            report.history.push_back({k, xn.objective, norm2(xn.residual), step_du, step_eps, restarted});
        if (log_enabled(LogLevel::debug) && k % 1000 == 0)
            log_message(LogLevel::debug, "iter %lld objective %.12e residual %.3e step (%.3e, %.3e)",
                        k, xn.objective, norm2(xn.residual), step_du, step_eps);

        x = std::move(xn);
        if (x.objective < best.objective) best = x;

        const bool small = step_du <= tol_du && step_eps <= tol_eps;
        if (cfg.mode == SolveMode::plain) {
            if (small && tail_ok(prev_step_sum, step_du, step_eps)) {
                converged = true;
                ++k;
                break;
            }
        } else if (probe_stage == 0) {
            if (small) {
                probe_stage = 1;
                acc.t = 1.0;
                v = x;
            }
        } else if (probe_stage == 1) {
            if (small) {
                probe_stage = 2;
                probe_s1 = step_du + step_eps;
                acc.t = 1.0;
                v = x;
            } else {
                probe_stage = 0;
            }
        } else {
            if (small && tail_ok(probe_s1, step_du, step_eps)) {
                converged = true;
                ++k;
                break;
            }
            probe_stage = 0;
        }
        prev_step_sum = step_du + step_eps;
        if (x.objective <= cfg.objective_floor) {
            collapsed = true;
            ++k;
            break;
        }
        if (cfg.collapse_check_interval > 0 && k > 0 && k % cfg.collapse_check_interval == 0 &&
            step_du > 10.0 * tol_du) {
            std::vector<double> v_u(x.du.size());
            std::vector<SymTensor3> v_p(x.eps_p.size());
            for (std::size_t i = 0; i < x.du.size(); ++i) v_u[i] = x.du[i] - snap.du[i];
            for (std::size_t l = 0; l < x.eps_p.size(); ++l) v_p[l] = x.eps_p[l] - snap.eps_p[l];
            if (unbounded_ray(m, v_u, v_p, quad_scale, slope_scale)) {
                collapsed = true;
                ++k;
                break;
            }
            snap = x;
        }
    }

    report.iterations = k;
    report.restarts = acc.restarts;
    report.converged = converged;
    report.collapsed = collapsed;
    if (converged) {
        report.termination = "converged";
    } else if (collapsed) {
        report.termination = "collapse";
        log_message(LogLevel::info, "solver: objective unbounded below, plastic collapse suspected");
    } else {
        report.termination = "max_iters";
        x = best; // return the best iterate seen
    }

    report.kkt = kkt_check(m, x, 100.0 * std::max(tol_du, tol_eps));
    log_message(LogLevel::info,
                "solver: %s after %lld iterations (%d restarts), objective %.12e, kkt force %.3e",
                report.termination.c_str(), report.iterations, report.restarts, x.objective,
                report.kkt.force_residual_norm);
    return {std::move(x), std::move(report)};
}

std::pair<IterateState, ConvergenceReport> solve(const Model& m, const SolverConfig& cfg) {
    return solve(m, zero_state(m), cfg);
}

} // namespace proxplast
