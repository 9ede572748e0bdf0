#ifndef ISOPHOTE_LORENTZ_HPP
#define ISOPHOTE_LORENTZ_HPP

// Vector algebra of Minkowski 3-space with signature (-,+,+). Component 0 is
// the time-like axis. All functions are templated on the scalar so the same
// code runs on doubles and on truncated Taylor series.

#include <Eigen/Core>

#include <cmath>
#include <string_view>

#include "isophote/error.hpp"

namespace isophote {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

using MVec3 = Vec3<double>;

inline constexpr double kDefaultCausalEps = 1e-9;

/// Minkowski inner product -x0*y0 + x1*y1 + x2*y2.
template <typename Scalar>
Scalar mdot(const Vec3<Scalar>& x, const Vec3<Scalar>& y) {
  return -(x[0] * y[0]) + x[1] * y[1] + x[2] * y[2];
}

/// Lorentzian cross product with e1 x e2 = -e3, e2 x e3 = e1, e3 x e1 = -e2.
/// The result is Minkowski-orthogonal to both factors.
template <typename Scalar>
Vec3<Scalar> mcross(const Vec3<Scalar>& x, const Vec3<Scalar>& y) {
  Vec3<Scalar> r;
  r[0] = x[1] * y[2] - x[2] * y[1];
  r[1] = x[0] * y[2] - x[2] * y[0];
  r[2] = x[1] * y[0] - x[0] * y[1];
  return r;
}

template <typename Scalar>
Vec3<Scalar> scaled(const Vec3<Scalar>& v, const Scalar& k) {
  return Vec3<Scalar>(v[0] * k, v[1] * k, v[2] * k);
}

enum class CausalClass { Spacelike, Timelike, Lightlike };

std::string_view to_string(CausalClass c);

/// Band used to call a vector lightlike: eps * (1 + (max |component|)^2).
double causal_threshold(const MVec3& v, double eps);

/// The zero vector is spacelike by convention.
CausalClass causal_class(const MVec3& v, double eps = kDefaultCausalEps);

/// Sign of mdot(v,v) for a vector of known non-lightlike class: +1 or -1.
inline double metric_sign(CausalClass c) {
  return c == CausalClass::Timelike ? -1.0 : 1.0;
}

/// |mdot(v,v)|^(1/2). Zero for lightlike vectors.
inline double mnorm(const MVec3& v) { return std::sqrt(std::abs(mdot(v, v))); }

/// Rescales v so that |mdot(v,v)| = 1. Throws LightlikeInput when v is
/// inside the lightlike band.
MVec3 normalize(const MVec3& v, double eps = kDefaultCausalEps);

enum class AngleKind { Cosh, Cos, Sinh, TimeconeCosh };

std::string_view to_string(AngleKind k);

struct AngleInvariant {
  AngleKind kind;
  double c;  // signed mdot(N, d)
};

/// Dispatches the angle kind for two unit non-lightlike vectors and returns
/// the signed invariant mdot(n, d). For two spacelike vectors the span is
/// timelike iff the Minkowski Gram determinant is negative.
AngleInvariant angle_invariant(const MVec3& n, const MVec3& d,
                               double eps = kDefaultCausalEps);

/// Signed angle recovered from the invariant under a declared kind:
/// Cos -> acos(c), Sinh -> asinh(c), Cosh/TimeconeCosh -> acosh(|c|).
/// Throws AngleRangeError when c is outside the inverse's domain.
double angle_from_invariant(AngleKind kind, double c);

/// Inverse of angle_from_invariant for the boundary conversion angle -> c.
double invariant_from_angle(AngleKind kind, double angle);

}  // namespace isophote

#endif  // ISOPHOTE_LORENTZ_HPP
