#pragma once

#include "proxplast/model.hpp"

namespace proxplast {

/// A pinned nodal direction: dof 0 is x, dof 1 is y.
struct Support {
    int node = 0;
    int dof = 0;
};

/// A nodal force entry of the reference load pattern.
struct NodalLoad {
    int node = 0;
    int dof = 0;
    double value = 0.0;
};

/// Two-node bar element.
struct Bar {
    int node_i = 0;
    int node_j = 0;
    double youngs = 1.0;
    double area = 1.0;
    YieldCriterion criterion = YieldCriterion::elastic();
};

/// Three-node triangle with an isotropic material.
struct Triangle {
    int node_i = 0;
    int node_j = 0;
    int node_k = 0;
    double youngs = 1.0;
    double poisson = 0.0;
    YieldCriterion criterion = YieldCriterion::elastic();
};

/// Assemble a planar truss: one integration point per bar, axial strain row
/// from the direction cosines over the length, weight = area * length.
Model assemble_truss(const std::vector<std::array<double, 2>>& nodes,
                     const std::vector<Bar>& bars,
                     const std::vector<Support>& supports,
                     const std::vector<NodalLoad>& loads);

/// Assemble constant-strain triangles under plane-strain kinematics: one
/// integration point per triangle, weight = area * thickness, in-plane
/// strain rows embedded into the 6-component tensor layout with zero
/// out-of-plane components.
Model assemble_cst2d(const std::vector<std::array<double, 2>>& nodes,
                     const std::vector<Triangle>& triangles,
                     double thickness,
                     const std::vector<Support>& supports,
                     const std::vector<NodalLoad>& loads,
                     bool plane_strain = true);

} // namespace proxplast
