#pragma once

#include <array>
#include <string>
#include <vector>

#include "proxplast/tensor.hpp"
#include "proxplast/yield.hpp"

namespace proxplast {

/// One sparse entry of the strain-displacement map of an integration point:
/// strain component `comp` accumulates `coeff * du[dof]`.
struct BEntry {
    int comp = 0;
    int dof = 0;
    double coeff = 0.0;
};

/// Per-Gauss-point constant data: quadrature weight times element volume,
/// elasticity tensor, sparse strain-displacement rows, the stress at the
/// start of the increment, and the yield criterion.
struct IntegrationPoint {
    double weight = 0.0;
    Elasticity elastic;
    std::vector<BEntry> b;
    SymTensor3 sigma0;
    YieldCriterion criterion;
};

/// Assembled discrete structure. Immutable during a solve; the incremental
/// driver swaps sigma0 wholesale at load-step boundaries and scales `load`.
struct Model {
    int num_dofs = 0;
    std::vector<IntegrationPoint> points;
    std::vector<double> load; ///< current load vector q, length num_dofs

    // Assembly provenance, kept for output and state dumps.
    std::string family; ///< "truss" or "cst2d"
    std::vector<std::array<double, 2>> nodes;
    std::vector<std::vector<int>> connectivity;
    /// Free-dof index per (node, direction); -1 where supported.
    std::vector<std::array<int, 2>> node_dofs;

    /// Transposed strain-displacement map: for each dof, the fixed-order
    /// list of (point, component, coefficient) triplets whose stresses feed
    /// that row of the force balance. Coefficients absorb the point weight
    /// and the off-diagonal double count, so the residual assembly is a
    /// plain dot product per dof regardless of thread count.
    struct AdjointEntry {
        int point = 0;
        int comp = 0;
        double coeff = 0.0;
    };
    std::vector<std::vector<AdjointEntry>> adjoint;

    int num_points() const { return static_cast<int>(points.size()); }
};

/// Validate invariants (positive weights, index ranges, no untouched free
/// dof) and build the dof-major adjoint map. Must be called once after the
/// points and load vector are in place; the assemblers do this themselves.
void finalize_model(Model& m);

/// B_l du: strain produced at point l by the displacement vector du.
SymTensor3 apply_b(const Model& m, int l, const std::vector<double>& du);

/// B*_l s: adjoint of apply_b under the ddot pairing, as a dense vector.
/// Satisfies ddot(apply_b(du), s) == dot(du, apply_b_adjoint(s)).
std::vector<double> apply_b_adjoint(const Model& m, int l, const SymTensor3& s);

/// Upper bound on the largest eigenvalue of the (constant) Hessian of the
/// smooth incremental energy over the joint (du, eps_p) variable, by power
/// iteration on the Hessian-vector product in the ddot metric. Stops when
/// the Rayleigh quotient settles to 1e-6 relative and inflates the result
/// by 1.01; falls back to the trace bound if 10000 steps do not settle.
double lipschitz_upper_bound(const Model& m);

/// Trace of the joint Hessian in the ddot metric; always >= its largest
/// eigenvalue.
double hessian_trace_bound(const Model& m);

/// Stored-energy increment of a single point given its elastic strain
/// increment: weight * (1/2 C e : e + sigma0 : e).
double point_energy(const IntegrationPoint& p, const SymTensor3& eps_e);

/// Sum of the smooth per-point energies at (du, eps_p). Excludes dissipation
/// and the external work term.
double smooth_energy(const Model& m, const std::vector<double>& du,
                     const std::vector<SymTensor3>& eps_p);

/// Gradient of smooth_energy: du block and per-point tensor block (in the
/// ddot pairing). Used by the finite-difference checks.
void smooth_energy_gradient(const Model& m, const std::vector<double>& du,
                            const std::vector<SymTensor3>& eps_p,
                            std::vector<double>& grad_du,
                            std::vector<SymTensor3>& grad_eps_p);

} // namespace proxplast
