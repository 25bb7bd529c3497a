#include "proxplast/assemble.hpp"

#include <cmath>
#include <string>

namespace proxplast {

namespace {

// Number the free dofs (2 per node, supported ones removed) and stash the
// mapping in the model. Throws on out-of-range or duplicate supports.
void number_dofs(Model& m, std::size_t num_nodes, const std::vector<Support>& supports) {
    if (supports.empty()) throw InputError("assemble: a structure needs at least one support");
    std::vector<std::array<bool, 2>> fixed(num_nodes, {false, false});
    for (const Support& s : supports) {
        if (s.node < 0 || static_cast<std::size_t>(s.node) >= num_nodes)
            throw InputError("assemble: support node " + std::to_string(s.node) + " out of range");
        if (s.dof < 0 || s.dof > 1) throw InputError("assemble: support dof must be 0 (x) or 1 (y)");
        if (fixed[static_cast<std::size_t>(s.node)][static_cast<std::size_t>(s.dof)])
            throw InputError("assemble: duplicate support on node " + std::to_string(s.node));
        fixed[static_cast<std::size_t>(s.node)][static_cast<std::size_t>(s.dof)] = true;
    }
    m.node_dofs.assign(num_nodes, {-1, -1});
    int next = 0;
    for (std::size_t n = 0; n < num_nodes; ++n)
        for (int d = 0; d < 2; ++d)
            if (!fixed[n][static_cast<std::size_t>(d)]) m.node_dofs[n][static_cast<std::size_t>(d)] = next++;
    m.num_dofs = next;
}

void place_loads(Model& m, const std::vector<NodalLoad>& loads) {
    m.load.assign(static_cast<std::size_t>(m.num_dofs), 0.0);
    for (const NodalLoad& f : loads) {
        if (f.node < 0 || static_cast<std::size_t>(f.node) >= m.nodes.size())
            throw InputError("assemble: load node " + std::to_string(f.node) + " out of range");
        if (f.dof < 0 || f.dof > 1) throw InputError("assemble: load dof must be 0 (x) or 1 (y)");
        const int dof = m.node_dofs[static_cast<std::size_t>(f.node)][static_cast<std::size_t>(f.dof)];
        if (dof < 0)
            throw InputError("assemble: load applied to supported dof of node " + std::to_string(f.node));
        m.load[static_cast<std::size_t>(dof)] += f.value;
    }
}

void push_entry(std::vector<BEntry>& b, int comp, int dof, double coeff) {
    if (dof >= 0 && coeff != 0.0) b.push_back({comp, dof, coeff});
}

} // namespace

Model assemble_truss(const std::vector<std::array<double, 2>>& nodes,
                     const std::vector<Bar>& bars,
                     const std::vector<Support>& supports,
                     const std::vector<NodalLoad>& loads) {
    if (bars.empty()) throw InputError("assemble_truss: at least one bar is required");
    Model m;
    m.family = "truss";
    m.nodes = nodes;
    number_dofs(m, nodes.size(), supports);

    for (std::size_t e = 0; e < bars.size(); ++e) {
        const Bar& bar = bars[e];
        if (bar.node_i < 0 || static_cast<std::size_t>(bar.node_i) >= nodes.size() ||
            bar.node_j < 0 || static_cast<std::size_t>(bar.node_j) >= nodes.size())
            throw InputError("assemble_truss: bar " + std::to_string(e) + " references a missing node");
        if (!(bar.area > 0.0)) throw InputError("assemble_truss: bar " + std::to_string(e) + " area must be > 0");
        const double dx = nodes[static_cast<std::size_t>(bar.node_j)][0] - nodes[static_cast<std::size_t>(bar.node_i)][0];
        const double dy = nodes[static_cast<std::size_t>(bar.node_j)][1] - nodes[static_cast<std::size_t>(bar.node_i)][1];
        const double length = std::hypot(dx, dy);
        if (!(length > 0.0)) throw InputError("assemble_truss: bar " + std::to_string(e) + " has zero length");
        const double cx = dx / length;
        const double cy = dy / length;

        IntegrationPoint p;
        p.weight = bar.area * length;
        p.elastic = Elasticity::uniaxial(bar.youngs);
        p.criterion = bar.criterion;
        const auto& di = m.node_dofs[static_cast<std::size_t>(bar.node_i)];
        const auto& dj = m.node_dofs[static_cast<std::size_t>(bar.node_j)];
        push_entry(p.b, SymTensor3::XX, di[0], -cx / length);
        push_entry(p.b, SymTensor3::XX, di[1], -cy / length);
        push_entry(p.b, SymTensor3::XX, dj[0], cx / length);
        push_entry(p.b, SymTensor3::XX, dj[1], cy / length);
        m.points.push_back(std::move(p));
        m.connectivity.push_back({bar.node_i, bar.node_j});
    }

    place_loads(m, loads);
    finalize_model(m);
    return m;
}

Model assemble_cst2d(const std::vector<std::array<double, 2>>& nodes,
                     const std::vector<Triangle>& triangles,
                     double thickness,
                     const std::vector<Support>& supports,
                     const std::vector<NodalLoad>& loads,
                     bool plane_strain) {
    if (triangles.empty()) throw InputError("assemble_cst2d: at least one triangle is required");
    if (!(thickness > 0.0)) throw InputError("assemble_cst2d: thickness must be > 0");
    if (!plane_strain) throw InputError("assemble_cst2d: only plane-strain kinematics are supported");
    Model m;
    m.family = "cst2d";
    m.nodes = nodes;
    number_dofs(m, nodes.size(), supports);

    for (std::size_t e = 0; e < triangles.size(); ++e) {
        const Triangle& tri = triangles[e];
        const int n[3] = {tri.node_i, tri.node_j, tri.node_k};
        for (int v = 0; v < 3; ++v)
            if (n[v] < 0 || static_cast<std::size_t>(n[v]) >= nodes.size())
                throw InputError("assemble_cst2d: triangle " + std::to_string(e) + " references a missing node");
        const double x[3] = {nodes[static_cast<std::size_t>(n[0])][0], nodes[static_cast<std::size_t>(n[1])][0],
                             nodes[static_cast<std::size_t>(n[2])][0]};
        const double y[3] = {nodes[static_cast<std::size_t>(n[0])][1], nodes[static_cast<std::size_t>(n[1])][1],
                             nodes[static_cast<std::size_t>(n[2])][1]};
        const double twice_area = (x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]);
        if (!(twice_area > 0.0))
            throw InputError("assemble_cst2d: triangle " + std::to_string(e) +
                             " is degenerate or negatively oriented");
        const double area = 0.5 * twice_area;

        // Constant shape-function gradients: dN_v/dx = bg[v], dN_v/dy = cg[v].
        double bg[3], cg[3];
        for (int v = 0; v < 3; ++v) {
            const int vj = (v + 1) % 3;
            const int vk = (v + 2) % 3;
            bg[v] = (y[vj] - y[vk]) / twice_area;
            cg[v] = (x[vk] - x[vj]) / twice_area;
        }

        IntegrationPoint p;
        p.weight = area * thickness;
        p.elastic = Elasticity::isotropic(tri.youngs, tri.poisson);
        p.criterion = tri.criterion;
        for (int v = 0; v < 3; ++v) {
            const auto& dn = m.node_dofs[static_cast<std::size_t>(n[v])];
            push_entry(p.b, SymTensor3::XX, dn[0], bg[v]);
            push_entry(p.b, SymTensor3::YY, dn[1], cg[v]);
            // Tensor shear component: half the engineering shear.
            push_entry(p.b, SymTensor3::XY, dn[0], 0.5 * cg[v]);
            push_entry(p.b, SymTensor3::XY, dn[1], 0.5 * bg[v]);
        }
        m.points.push_back(std::move(p));
        m.connectivity.push_back({n[0], n[1], n[2]});
    }

    place_loads(m, loads);
    finalize_model(m);
    return m;
}

} // namespace proxplast
