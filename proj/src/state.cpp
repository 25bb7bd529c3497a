#include "proxplast/state.hpp"

#include <cmath>

#include "proxplast/parallel.hpp"

namespace proxplast {

IterateState zero_state(const Model& m) {
    IterateState s;
    s.du.assign(static_cast<std::size_t>(m.num_dofs), 0.0);
    s.eps_p.assign(m.points.size(), SymTensor3::zero());
    return s;
}

void refresh(const Model& m, IterateState& s, int threads) {
    const int np = m.num_points();
    if (static_cast<int>(s.du.size()) != m.num_dofs || static_cast<int>(s.eps_p.size()) != np)
        throw InputError("state: dimensions do not match the model");

    s.eps_e.resize(static_cast<std::size_t>(np));
    s.sigma.resize(static_cast<std::size_t>(np));
    s.residual.assign(static_cast<std::size_t>(m.num_dofs), 0.0);

    // Compatibility and constitutive law, independently per point.
    std::vector<double> energy(static_cast<std::size_t>(np), 0.0);
    std::vector<double> dis(static_cast<std::size_t>(np), 0.0);
    parallel_for(np, threads, [&](int begin, int end) {
        for (int l = begin; l < end; ++l) {
            const IntegrationPoint& p = m.points[static_cast<std::size_t>(l)];
            SymTensor3 e = -s.eps_p[static_cast<std::size_t>(l)];
            for (const BEntry& entry : p.b)
                e[entry.comp] += entry.coeff * s.du[static_cast<std::size_t>(entry.dof)];
            s.eps_e[static_cast<std::size_t>(l)] = e;
            s.sigma[static_cast<std::size_t>(l)] = p.sigma0 + p.elastic.apply(e);
            energy[static_cast<std::size_t>(l)] = point_energy(p, e);
            dis[static_cast<std::size_t>(l)] =
                p.weight * dissipation(p.criterion, s.eps_p[static_cast<std::size_t>(l)]);
        }
    });

    // Force balance, one row per dof in a fixed contribution order.
    parallel_for(m.num_dofs, threads, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            double r = -m.load[static_cast<std::size_t>(i)];
            for (const Model::AdjointEntry& a : m.adjoint[static_cast<std::size_t>(i)])
                r += a.coeff * s.sigma[static_cast<std::size_t>(a.point)][a.comp];
            s.residual[static_cast<std::size_t>(i)] = r;
        }
    });

    double obj = 0.0;
    for (int l = 0; l < np; ++l) obj += energy[static_cast<std::size_t>(l)];
    for (int l = 0; l < np; ++l) obj += dis[static_cast<std::size_t>(l)];
    for (int i = 0; i < m.num_dofs; ++i)
        obj -= m.load[static_cast<std::size_t>(i)] * s.du[static_cast<std::size_t>(i)];
    s.objective = obj;
    s.fresh = true;
}

double objective(const Model& m, const IterateState& s) {
    if (static_cast<int>(s.du.size()) != m.num_dofs ||
        static_cast<int>(s.eps_p.size()) != m.num_points())
        throw InputError("objective: dimensions do not match the model");
    double obj = 0.0;
    for (int l = 0; l < m.num_points(); ++l) {
        const IntegrationPoint& p = m.points[static_cast<std::size_t>(l)];
        obj += point_energy(p, apply_b(m, l, s.du) - s.eps_p[static_cast<std::size_t>(l)]);
    }
    for (int l = 0; l < m.num_points(); ++l) {
        const IntegrationPoint& p = m.points[static_cast<std::size_t>(l)];
        obj += p.weight * dissipation(p.criterion, s.eps_p[static_cast<std::size_t>(l)]);
    }
    for (int i = 0; i < m.num_dofs; ++i)
        obj -= m.load[static_cast<std::size_t>(i)] * s.du[static_cast<std::size_t>(i)];
    return obj;
}

} // namespace proxplast
