#include "proxplast/yield.hpp"

#include <algorithm>

namespace proxplast {

bool membership(const YieldCriterion& c, const SymTensor3& s, double tol) {
    if (tol < 0.0) throw InputError("membership: tolerance must be >= 0");
    switch (c.type()) {
        case YieldCriterion::Type::Elastic:
            return true;
        case YieldCriterion::Type::TrussBox:
            return std::abs(s[SymTensor3::XX]) <= c.limit() + tol;
        case YieldCriterion::Type::VonMises:
            return frobenius_norm(deviator(s)) <= c.limit() + tol;
    }
    return false;
}

double feasibility_distance(const YieldCriterion& c, const SymTensor3& s) {
    switch (c.type()) {
        case YieldCriterion::Type::Elastic:
            return 0.0;
        case YieldCriterion::Type::TrussBox:
            return std::max(0.0, std::abs(s[SymTensor3::XX]) - c.limit());
        case YieldCriterion::Type::VonMises:
            return std::max(0.0, frobenius_norm(deviator(s)) - c.limit());
    }
    return 0.0;
}

SymTensor3 project_scaled(const YieldCriterion& c, const SymTensor3& x, double beta) {
    if (!(beta > 0.0)) throw InputError("project_scaled: beta must be > 0");
    switch (c.type()) {
        case YieldCriterion::Type::Elastic:
            return x;
        case YieldCriterion::Type::TrussBox: {
            SymTensor3 y = x;
            y[SymTensor3::XX] = std::clamp(x[SymTensor3::XX], -beta * c.limit(), beta * c.limit());
            return y;
        }
        case YieldCriterion::Type::VonMises: {
            const SymTensor3 dev = deviator(x);
            const double n = frobenius_norm(dev);
            const double r = beta * c.limit();
            if (n <= r) return x;
            return volumetric(x) + (r / n) * dev;
        }
    }
    return x;
}

DissipationValue dissipation(const YieldCriterion& c, const SymTensor3& e) {
    switch (c.type()) {
        case YieldCriterion::Type::Elastic:
            return frobenius_norm(e) == 0.0 ? 0.0 : infinite_dissipation;
        case YieldCriterion::Type::TrussBox:
            return c.limit() * std::abs(e[SymTensor3::XX]);
        case YieldCriterion::Type::VonMises: {
            const double n = frobenius_norm(e);
            if (std::abs(trace(e)) > 1e-9 * n) return infinite_dissipation;
            return c.limit() * n;
        }
    }
    return 0.0;
}

SymTensor3 prox_dissipation(const YieldCriterion& c, const SymTensor3& x, double beta) {
    if (!(beta > 0.0)) throw InputError("prox_dissipation: beta must be > 0");
    // Moreau identity: prox of the support function is x minus the projection
    // onto the scaled set. For VonMises the subtraction is carried out on the
    // deviator directly, so near-threshold outputs keep relative accuracy and
    // an exactly zero trace; the result equals x - project_scaled(x, beta).
    if (c.type() == YieldCriterion::Type::VonMises) {
        const SymTensor3 dev = deviator(x);
        const double n = frobenius_norm(dev);
        const double r = beta * c.limit();
        if (n <= r) return SymTensor3::zero();
        return (1.0 - r / n) * dev;
    }
    return x - project_scaled(c, x, beta);
}

} // namespace proxplast
