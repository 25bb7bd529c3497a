#pragma once

#include <limits>

#include "proxplast/tensor.hpp"

namespace proxplast {

/// Value of the dissipation (support) function. IEEE +infinity marks
/// arguments outside the finite domain.
using DissipationValue = double;

inline constexpr double infinite_dissipation = std::numeric_limits<double>::infinity();

/// Admissible stress set of an integration point. Three variants:
///  - Elastic:  the whole tensor space; no yielding, the prox maps plastic
///              strain increments to zero.
///  - TrussBox: |sigma_11| <= R for 1-D bar points, R the yield stress.
///  - VonMises: ||dev sigma||_F <= kappa.
/// Each set is nonempty, closed, convex and contains the zero stress.
class YieldCriterion {
  public:
    enum class Type { Elastic, TrussBox, VonMises };

    YieldCriterion() = default;

    static YieldCriterion elastic() { return YieldCriterion(Type::Elastic, 0.0); }

    static YieldCriterion truss_box(double R) {
        if (!(R > 0.0)) throw InputError("yield: truss_box yield stress R must be > 0");
        return YieldCriterion(Type::TrussBox, R);
    }

    static YieldCriterion von_mises(double kappa) {
        if (!(kappa > 0.0)) throw InputError("yield: von_mises radius kappa must be > 0");
        return YieldCriterion(Type::VonMises, kappa);
    }

    Type type() const { return type_; }
    /// R for TrussBox, kappa for VonMises, unused for Elastic.
    double limit() const { return limit_; }

  private:
    YieldCriterion(Type t, double lim) : type_(t), limit_(lim) {}
    Type type_ = Type::Elastic;
    double limit_ = 0.0;
};

/// True iff s lies in the admissible set within absolute tolerance tol on
/// the defining inequality.
bool membership(const YieldCriterion& c, const SymTensor3& s, double tol);

/// Euclidean distance from s to the admissible set (0 inside).
double feasibility_distance(const YieldCriterion& c, const SymTensor3& s);

/// Euclidean projection of x onto the scaled set beta * Y. Unique since Y is
/// closed and convex. Requires beta > 0.
SymTensor3 project_scaled(const YieldCriterion& c, const SymTensor3& x, double beta);

/// Support function of Y: the plastic work per unit strain increment.
/// TrussBox: R |e_11|. VonMises: kappa ||e||_F on (near-)deviatoric
/// arguments, +infinity otherwise. Elastic: indicator of {0}.
DissipationValue dissipation(const YieldCriterion& c, const SymTensor3& e);

/// Proximal operator of beta * dissipation, evaluated through the Moreau
/// identity x = prox(x) + projection of x onto beta * Y. Total and
/// single-valued for every input. Requires beta > 0.
SymTensor3 prox_dissipation(const YieldCriterion& c, const SymTensor3& x, double beta);

} // namespace proxplast
