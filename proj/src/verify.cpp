#include "proxplast/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace proxplast {

namespace {

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    double next_unit() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
    }
};

// Probe directions inside the finite domain of the dissipation function.
SymTensor3 domain_probe(const YieldCriterion& c, SplitMix64& rng, double span) {
    switch (c.type()) {
        case YieldCriterion::Type::Elastic:
            return SymTensor3::zero();
        case YieldCriterion::Type::TrussBox:
            return SymTensor3::axial(span * rng.next_unit());
        case YieldCriterion::Type::VonMises: {
            SymTensor3 e;
            for (int i = 0; i < 6; ++i) e[i] = span * rng.next_unit();
            return deviator(e);
        }
    }
    return SymTensor3::zero();
}

inline double slot_weight(int comp) { return comp < 3 ? 1.0 : 2.0; }

} // namespace

KktReport kkt_check(const Model& m, const IterateState& s, double tol) {
    IterateState state = s;
    refresh(m, state, 1);

    KktReport report;
    report.tol = tol;
    double f2 = 0.0;
    for (double r : state.residual) f2 += r * r;
    report.force_residual_norm = std::sqrt(f2);

    report.flow_feasibility.resize(m.points.size());
    report.complementarity_gap.resize(m.points.size());
    for (int l = 0; l < m.num_points(); ++l) {
        const IntegrationPoint& p = m.points[static_cast<std::size_t>(l)];
        const SymTensor3& sigma = state.sigma[static_cast<std::size_t>(l)];
        const SymTensor3& eps_p = state.eps_p[static_cast<std::size_t>(l)];
        const double feas = feasibility_distance(p.criterion, sigma);
        const double gap = dissipation(p.criterion, eps_p) - ddot(sigma, eps_p);
        report.flow_feasibility[static_cast<std::size_t>(l)] = feas;
        report.complementarity_gap[static_cast<std::size_t>(l)] = gap;
        report.max_feasibility = std::max(report.max_feasibility, feas);
        report.max_gap = std::max(report.max_gap, std::abs(gap));
    }

    report.pass = report.force_residual_norm <= tol && report.max_feasibility <= tol &&
                  report.max_gap <= tol;
    return report;
}

bool subgradient_certificate(const YieldCriterion& c, const SymTensor3& x, double beta,
                             const SymTensor3& zeta, int probes) {
    if (!(beta > 0.0)) throw InputError("subgradient_certificate: beta must be > 0");
    // zeta = prox(x) iff (x - zeta) / beta is an admissible stress lying in
    // the subdifferential of the dissipation at zeta, tested through the
    // subgradient inequality over sampled domain directions.
    const SymTensor3 g = 1.0 / beta * (x - zeta);
    if (!membership(c, g, 1e-10)) return false;
    const double d_zeta = dissipation(c, zeta);
    if (!std::isfinite(d_zeta)) return false;

    const double span = 2.0 * (frobenius_norm(x) + frobenius_norm(zeta) + 1.0);
    const double slack = 1e-9 * (1.0 + std::abs(d_zeta) + frobenius_norm(g) * span);
    SplitMix64 rng(0x5eedbeefULL);
    for (int i = 0; i < probes; ++i) {
        const SymTensor3 e = domain_probe(c, rng, span);
        const double lhs = dissipation(c, e);
        if (!std::isfinite(lhs)) continue;
        if (lhs < d_zeta + ddot(g, e - zeta) - slack) return false;
    }
    return true;
}

bool resolvent_equivalence_test(const YieldCriterion& c, const SymTensor3& x, double beta) {
    return subgradient_certificate(c, x, beta, prox_dissipation(c, x, beta));
}

IterateState brute_force_solve(const Model& m, const BruteForceOptions& opt) {
    const int joint_dim = m.num_dofs + 6 * m.num_points();
    if (joint_dim > 30)
        throw InputError("brute_force_solve: instance too large (" + std::to_string(joint_dim) +
                         " joint unknowns, limit 30)");

    // Step length from a locally computed trace bound, so this path shares
    // nothing with the main solver beyond the tensor algebra and the prox.
    double tr = 0.0;
    for (const IntegrationPoint& p : m.points) {
        for (int cdx = 0; cdx < 6; ++cdx) {
            SymTensor3 e;
            e[cdx] = 1.0;
            tr += p.weight * ddot(p.elastic.apply(e), e) / slot_weight(cdx);
        }
        std::vector<int> dofs;
        for (const BEntry& entry : p.b)
            if (std::find(dofs.begin(), dofs.end(), entry.dof) == dofs.end()) dofs.push_back(entry.dof);
        for (int dof : dofs) {
            SymTensor3 col;
            for (const BEntry& entry : p.b)
                if (entry.dof == dof) col[entry.comp] += entry.coeff;
            tr += p.weight * ddot(p.elastic.apply(col), col);
        }
    }
    const double alpha = opt.alpha_scale / tr;

    std::vector<double> du(static_cast<std::size_t>(m.num_dofs), 0.0);
    std::vector<SymTensor3> eps_p(m.points.size());
    std::vector<SymTensor3> sigma(m.points.size());
    std::vector<double> r(static_cast<std::size_t>(m.num_dofs));
    int quiet = 0;

    for (long long k = 0; k < opt.iterations; ++k) {
        for (int l = 0; l < m.num_points(); ++l) {
            const IntegrationPoint& p = m.points[static_cast<std::size_t>(l)];
            SymTensor3 e = -eps_p[static_cast<std::size_t>(l)];
            for (const BEntry& entry : p.b)
                e[entry.comp] += entry.coeff * du[static_cast<std::size_t>(entry.dof)];
            sigma[static_cast<std::size_t>(l)] = p.sigma0 + p.elastic.apply(e);
        }
        for (int i = 0; i < m.num_dofs; ++i) r[static_cast<std::size_t>(i)] = -m.load[static_cast<std::size_t>(i)];
        for (int l = 0; l < m.num_points(); ++l) {
            const IntegrationPoint& p = m.points[static_cast<std::size_t>(l)];
            for (const BEntry& entry : p.b)
                r[static_cast<std::size_t>(entry.dof)] +=
                    p.weight * slot_weight(entry.comp) * entry.coeff * sigma[static_cast<std::size_t>(l)][entry.comp];
        }

        double step2 = 0.0;
        double du_norm2 = 0.0;
        for (int i = 0; i < m.num_dofs; ++i) {
            const double d = alpha * r[static_cast<std::size_t>(i)];
            du[static_cast<std::size_t>(i)] -= d;
            step2 += d * d;
            du_norm2 += du[static_cast<std::size_t>(i)] * du[static_cast<std::size_t>(i)];
        }
        double eps_step = 0.0;
        for (int l = 0; l < m.num_points(); ++l) {
            const IntegrationPoint& p = m.points[static_cast<std::size_t>(l)];
            const double beta = p.weight * alpha;
            const SymTensor3 next = prox_dissipation(
                p.criterion, eps_p[static_cast<std::size_t>(l)] + beta * sigma[static_cast<std::size_t>(l)], beta);
            eps_step = std::max(eps_step, frobenius_norm(next - eps_p[static_cast<std::size_t>(l)]));
            eps_p[static_cast<std::size_t>(l)] = next;
        }

        const double floor = 1e-15 * (1.0 + std::sqrt(du_norm2));
        if (std::sqrt(step2) < floor && eps_step < floor) {
            if (++quiet >= 10) break;
        } else {
            quiet = 0;
        }
    }

    IterateState out;
    out.du = std::move(du);
    out.eps_p = std::move(eps_p);
    refresh(m, out, 1);
    return out;
}

} // namespace proxplast
