#include "proxplast/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "proxplast/log.hpp"

namespace proxplast {

namespace {

// ddot weight of a component slot: off-diagonals count twice.
inline double slot_weight(int comp) { return comp < 3 ? 1.0 : 2.0; }

// Small deterministic generator for power-iteration start vectors.
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

// Joint (du, eps_p) vector used by the power iteration.
struct JointVec {
    std::vector<double> du;
    std::vector<SymTensor3> eps;
};

double joint_dot(const JointVec& a, const JointVec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.du.size(); ++i) s += a.du[i] * b.du[i];
    for (std::size_t l = 0; l < a.eps.size(); ++l) s += ddot(a.eps[l], b.eps[l]);
    return s;
}

// Hessian-vector product of the smooth energy: constant in the state.
void hessian_apply(const Model& m, const JointVec& in, JointVec& out) {
    std::fill(out.du.begin(), out.du.end(), 0.0);
    for (int l = 0; l < m.num_points(); ++l) {
        const IntegrationPoint& p = m.points[l];
        SymTensor3 e = -in.eps[static_cast<std::size_t>(l)];
        for (const BEntry& entry : p.b) e[entry.comp] += entry.coeff * in.du[static_cast<std::size_t>(entry.dof)];
        const SymTensor3 t = p.elastic.apply(e);
        out.eps[static_cast<std::size_t>(l)] = -p.weight * t;
        for (const BEntry& entry : p.b)
            out.du[static_cast<std::size_t>(entry.dof)] += p.weight * slot_weight(entry.comp) * entry.coeff * t[entry.comp];
    }
}

} // namespace

void finalize_model(Model& m) {
    if (m.num_dofs <= 0) throw InputError("model: no free degrees of freedom");
    if (m.points.empty()) throw InputError("model: no integration points");
    if (static_cast<int>(m.load.size()) != m.num_dofs)
        throw InputError("model: load vector length does not match the dof count");

    std::vector<bool> touched(static_cast<std::size_t>(m.num_dofs), false);
    for (const IntegrationPoint& p : m.points) {
        if (!(p.weight > 0.0)) throw InputError("model: integration weight must be > 0");
        for (const BEntry& entry : p.b) {
            if (entry.comp < 0 || entry.comp >= 6) throw InputError("model: strain component index out of range");
            if (entry.dof < 0 || entry.dof >= m.num_dofs) throw InputError("model: dof index out of range");
            if (entry.coeff != 0.0) touched[static_cast<std::size_t>(entry.dof)] = true;
        }
    }
    for (int i = 0; i < m.num_dofs; ++i)
        if (!touched[static_cast<std::size_t>(i)])
            throw InputError("model: free dof " + std::to_string(i) + " carries no stiffness");

    m.adjoint.assign(static_cast<std::size_t>(m.num_dofs), {});
    for (int l = 0; l < m.num_points(); ++l) {
        const IntegrationPoint& p = m.points[l];
        for (const BEntry& entry : p.b)
            m.adjoint[static_cast<std::size_t>(entry.dof)].push_back(
                {l, entry.comp, p.weight * slot_weight(entry.comp) * entry.coeff});
    }
}

SymTensor3 apply_b(const Model& m, int l, const std::vector<double>& du) {
    if (l < 0 || l >= m.num_points()) throw std::out_of_range("apply_b: point index out of range");
    if (static_cast<int>(du.size()) != m.num_dofs) throw InputError("apply_b: displacement length mismatch");
    SymTensor3 e;
    for (const BEntry& entry : m.points[static_cast<std::size_t>(l)].b)
        e[entry.comp] += entry.coeff * du[static_cast<std::size_t>(entry.dof)];
    return e;
}

std::vector<double> apply_b_adjoint(const Model& m, int l, const SymTensor3& s) {
    if (l < 0 || l >= m.num_points()) throw std::out_of_range("apply_b_adjoint: point index out of range");
    std::vector<double> out(static_cast<std::size_t>(m.num_dofs), 0.0);
    for (const BEntry& entry : m.points[static_cast<std::size_t>(l)].b)
        out[static_cast<std::size_t>(entry.dof)] += slot_weight(entry.comp) * entry.coeff * s[entry.comp];
    return out;
}

double hessian_trace_bound(const Model& m) {
    double tr = 0.0;
    for (const IntegrationPoint& p : m.points) {
        // Tensor-block diagonal: unit directions under the ddot metric.
        for (int c = 0; c < 6; ++c) {
            SymTensor3 e;
            e[c] = 1.0;
            tr += p.weight * ddot(p.elastic.apply(e), e) / slot_weight(c);
        }
        // Displacement-block diagonal, one column of B at a time.
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
    return tr;
}

double lipschitz_upper_bound(const Model& m) {
    const std::size_t d = static_cast<std::size_t>(m.num_dofs);
    const std::size_t np = m.points.size();
    JointVec v{std::vector<double>(d), std::vector<SymTensor3>(np)};
    JointVec w{std::vector<double>(d, 0.0), std::vector<SymTensor3>(np)};

    SplitMix64 rng(0x70726f78ULL);
    for (double& x : v.du) x = rng.next_unit();
    for (SymTensor3& t : v.eps)
        for (int c = 0; c < 6; ++c) t[c] = rng.next_unit();

    // The trace dominates every eigenvalue, so it both serves as the
    // fallback and caps the inflated Rayleigh estimate.
    const double tr = hessian_trace_bound(m);
    double rayleigh = 0.0;
    for (int iter = 0; iter < 10000; ++iter) {
        const double nv = std::sqrt(joint_dot(v, v));
        if (nv == 0.0) break;
        for (double& x : v.du) x /= nv;
        for (SymTensor3& t : v.eps) t *= 1.0 / nv;
        hessian_apply(m, v, w);
        const double r = joint_dot(v, w);
        if (iter > 0 && std::abs(r - rayleigh) <= 1e-6 * std::abs(r)) {
            const double bound = std::min(1.01 * r, tr);
            log_message(LogLevel::debug, "lipschitz bound %.6e after %d power steps", bound, iter + 1);
            return bound;
        }
        rayleigh = r;
        std::swap(v, w);
    }
    log_message(LogLevel::debug, "power iteration did not settle; trace bound %.6e", tr);
    return tr;
}

double point_energy(const IntegrationPoint& p, const SymTensor3& eps_e) {
    const SymTensor3 s = p.elastic.apply(eps_e);
    return p.weight * (0.5 * ddot(s, eps_e) + ddot(p.sigma0, eps_e));
}

double smooth_energy(const Model& m, const std::vector<double>& du,
                     const std::vector<SymTensor3>& eps_p) {
    double w = 0.0;
    for (int l = 0; l < m.num_points(); ++l)
        w += point_energy(m.points[static_cast<std::size_t>(l)],
                          apply_b(m, l, du) - eps_p[static_cast<std::size_t>(l)]);
    return w;
}

void smooth_energy_gradient(const Model& m, const std::vector<double>& du,
                            const std::vector<SymTensor3>& eps_p,
                            std::vector<double>& grad_du,
                            std::vector<SymTensor3>& grad_eps_p) {
    grad_du.assign(static_cast<std::size_t>(m.num_dofs), 0.0);
    grad_eps_p.assign(m.points.size(), SymTensor3::zero());
    for (int l = 0; l < m.num_points(); ++l) {
        const IntegrationPoint& p = m.points[static_cast<std::size_t>(l)];
        const SymTensor3 e = apply_b(m, l, du) - eps_p[static_cast<std::size_t>(l)];
        const SymTensor3 sigma = p.sigma0 + p.elastic.apply(e);
        grad_eps_p[static_cast<std::size_t>(l)] = -p.weight * sigma;
        for (const BEntry& entry : p.b)
            grad_du[static_cast<std::size_t>(entry.dof)] +=
                p.weight * slot_weight(entry.comp) * entry.coeff * sigma[entry.comp];
    }
}

} // namespace proxplast
