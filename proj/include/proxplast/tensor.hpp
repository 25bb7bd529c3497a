#pragma once

#include <array>
#include <cmath>

#include "proxplast/errors.hpp"

namespace proxplast {

/// Symmetric second-order tensor in three dimensions, stored as the six
/// independent components (11, 22, 33, 23, 13, 12).
///
/// No engineering-shear scaling is applied to the stored values. Products
/// and norms double-count the off-diagonal slots, so ddot() and
/// frobenius_norm() equal the full 3x3 definitions. Strains and stresses
/// share this type; the components are unit-agnostic.
struct SymTensor3 {
    std::array<double, 6> v{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};

    static constexpr int XX = 0;
    static constexpr int YY = 1;
    static constexpr int ZZ = 2;
    static constexpr int YZ = 3;
    static constexpr int XZ = 4;
    static constexpr int XY = 5;

    static SymTensor3 zero() { return {}; }
    static SymTensor3 identity() { return {{1.0, 1.0, 1.0, 0.0, 0.0, 0.0}}; }
    static SymTensor3 diag(double a, double b, double c) { return {{a, b, c, 0.0, 0.0, 0.0}}; }
    /// Tensor whose only nonzero entry is the 11 slot; bar points live here.
    static SymTensor3 axial(double a) { return {{a, 0.0, 0.0, 0.0, 0.0, 0.0}}; }

    double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

    SymTensor3& operator+=(const SymTensor3& o) {
        for (int i = 0; i < 6; ++i) v[i] += o.v[i];
        return *this;
    }
    SymTensor3& operator-=(const SymTensor3& o) {
        for (int i = 0; i < 6; ++i) v[i] -= o.v[i];
        return *this;
    }
    SymTensor3& operator*=(double s) {
        for (int i = 0; i < 6; ++i) v[i] *= s;
        return *this;
    }
};

inline SymTensor3 operator+(SymTensor3 a, const SymTensor3& b) { return a += b; }
inline SymTensor3 operator-(SymTensor3 a, const SymTensor3& b) { return a -= b; }
inline SymTensor3 operator*(double s, SymTensor3 a) { return a *= s; }
inline SymTensor3 operator*(SymTensor3 a, double s) { return a *= s; }
inline SymTensor3 operator-(SymTensor3 a) { return a *= -1.0; }

inline double trace(const SymTensor3& a) { return a[0] + a[1] + a[2]; }

/// Double dot product A : B = sum_ij A_ij B_ij; off-diagonals count twice.
inline double ddot(const SymTensor3& a, const SymTensor3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] +
           2.0 * (a[3] * b[3] + a[4] * b[4] + a[5] * b[5]);
}

inline double frobenius_norm(const SymTensor3& a) { return std::sqrt(ddot(a, a)); }

/// Volumetric part (tr A / 3) I.
inline SymTensor3 volumetric(const SymTensor3& a) {
    const double p = trace(a) / 3.0;
    return SymTensor3::diag(p, p, p);
}

/// Deviatoric part A - (tr A / 3) I.
inline SymTensor3 deviator(const SymTensor3& a) {
    const double p = trace(a) / 3.0;
    SymTensor3 d = a;
    d[0] -= p;
    d[1] -= p;
    d[2] -= p;
    return d;
}

/// Elasticity tensor. Isotropic (E, nu) for continuum points; degenerates to
/// the scalar Young modulus acting on the axial slot for 1-D bar points.
/// Positive definite as a quadratic form on the active subspace by
/// construction of the admitted parameter ranges.
class Elasticity {
  public:
    enum class Kind { Uniaxial, Isotropic };

    Elasticity() = default;

    static Elasticity uniaxial(double E) {
        if (!(E > 0.0)) throw InputError("elasticity: Young modulus must be > 0");
        Elasticity c;
        c.kind_ = Kind::Uniaxial;
        c.E_ = E;
        return c;
    }

    static Elasticity isotropic(double E, double nu) {
        if (!(E > 0.0)) throw InputError("elasticity: Young modulus must be > 0");
        if (!(nu > -1.0 && nu < 0.5)) throw InputError("elasticity: Poisson ratio must lie in (-1, 0.5)");
        Elasticity c;
        c.kind_ = Kind::Isotropic;
        c.E_ = E;
        c.nu_ = nu;
        c.lambda_ = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        c.mu_ = E / (2.0 * (1.0 + nu));
        return c;
    }

    Kind kind() const { return kind_; }
    double youngs() const { return E_; }
    double poisson() const { return nu_; }

    /// C : e, the Lame form lambda tr(e) I + 2 mu e, or E e11 on the axial
    /// slot for bar points.
    SymTensor3 apply(const SymTensor3& e) const {
        if (kind_ == Kind::Uniaxial) return SymTensor3::axial(E_ * e[0]);
        const double lt = lambda_ * trace(e);
        SymTensor3 s;
        s[0] = lt + 2.0 * mu_ * e[0];
        s[1] = lt + 2.0 * mu_ * e[1];
        s[2] = lt + 2.0 * mu_ * e[2];
        s[3] = 2.0 * mu_ * e[3];
        s[4] = 2.0 * mu_ * e[4];
        s[5] = 2.0 * mu_ * e[5];
        return s;
    }

  private:
    Kind kind_ = Kind::Uniaxial;
    double E_ = 1.0;
    double nu_ = 0.0;
    double lambda_ = 0.0;
    double mu_ = 0.5;
};

/// C : e, free-function form matching the other tensor operations.
inline SymTensor3 apply_elasticity(const Elasticity& c, const SymTensor3& e) { return c.apply(e); }

} // namespace proxplast
