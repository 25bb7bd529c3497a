#pragma once

#include <limits>
#include <vector>

#include "proxplast/model.hpp"

namespace proxplast {

/// Solver unknowns (du, eps_p) plus the derived per-point caches. When
/// `fresh` is set the caches satisfy, exactly as computed,
///   eps_e[l] = B_l du - eps_p[l]
///   sigma[l] = sigma0[l] + C_l eps_e[l]
///   residual = sum_l weight_l B*_l sigma[l] - q
/// and `objective` holds the total incremental potential energy.
struct IterateState {
    std::vector<double> du;
    std::vector<SymTensor3> eps_p;

    std::vector<SymTensor3> eps_e;
    std::vector<SymTensor3> sigma;
    std::vector<double> residual;
    double objective = std::numeric_limits<double>::quiet_NaN();
    bool fresh = false;
};

/// State with zero unknowns, sized for the model. Caches are not computed.
IterateState zero_state(const Model& m);

/// Recompute all caches and the objective from (du, eps_p). Per-point work
/// runs on `threads` workers; the result is identical for any thread count.
void refresh(const Model& m, IterateState& s, int threads = 1);

/// Total incremental potential energy at (du, eps_p): smooth energy plus
/// weighted dissipation minus external work. +infinity if any dissipation
/// term is infinite. Does not require or use the caches.
double objective(const Model& m, const IterateState& s);

} // namespace proxplast
