#ifndef ISOPHOTE_CURVE_HPP
#define ISOPHOTE_CURVE_HPP

// Arclength parameterization, the Frenet apparatus of a free curve and the
// Darboux apparatus of a curve on a timelike surface.
//
// Derivatives along a curve come from evaluating the symbolic coordinate
// trees at a Taylor-series argument, so every frame quantity and its
// arclength derivative is exact up to rounding.

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "isophote/expr.hpp"
#include "isophote/lorentz.hpp"
#include "isophote/surface.hpp"
#include "isophote/taylor.hpp"

namespace isophote {

inline constexpr double kDefaultCurvatureFloor = 1e-8;

enum class CurveKind { Space, Surface };

/// Local expansion of a curve at one parameter value: position and, for
/// curves on a surface, the unnormalized surface normal along the curve.
struct CurveJet {
  double t = 0.0;
  Vec3<Jet> position;
  std::optional<Vec3<Jet>> normal_raw;
};

class CurveSpec {
 public:
  static CurveSpec space(std::array<Expr, 3> coords, double t_min, double t_max);
  static CurveSpec on_surface(SurfacePtr surface, Expr u, Expr v, double t_min, double t_max);

  CurveKind kind() const { return kind_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  const SurfacePtr& surface() const { return surface_; }
  const Expr& u_expr() const { return u_; }
  const Expr& v_expr() const { return v_; }
  const Expr& coord(int i) const { return coords_.at(static_cast<std::size_t>(i)); }

  /// Parameter-space point (u(t), v(t)); surface curves only.
  std::array<double, 2> uv(double t) const;
  MVec3 position(double t) const;
  MVec3 velocity(double t) const;
  CurveJet jet(double t) const;

 private:
  template <typename S>
  Vec3<S> position_at(const S& t, std::optional<Vec3<S>>* normal) const;

  CurveKind kind_ = CurveKind::Space;
  std::array<Expr, 3> coords_;
  Expr u_;
  Expr v_;
  SurfacePtr surface_;
  double t_min_ = 0.0;
  double t_max_ = 1.0;
};

/// Adaptive 7/15-point Gauss-Kronrod quadrature.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double abs_tol = 1e-15);

/// Table of s(t) on a uniform t grid with exact inversion t(s).
class ArclengthTable {
 public:
  ArclengthTable(std::function<double(double)> speed, std::vector<double> t, std::vector<double> s);

  double length() const { return s_.back(); }
  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }
  const std::vector<double>& t_nodes() const { return t_; }
  const std::vector<double>& s_nodes() const { return s_; }

  double s_of_t(double t) const;
  /// Cubic Hermite guess (slopes 1/speed) polished by Newton on s(t) - s.
  double t_of_s(double s) const;

 private:
  std::function<double(double)> speed_;
  std::vector<double> t_;
  std::vector<double> s_;
};

/// s(t) = integral of sqrt|<a',a'>| dt. Throws LightlikeTangent naming the t
/// at which the tangent enters the lightlike band, and CausalClassChange if
/// the tangent's class flips between samples.
ArclengthTable reparameterize_arclength(const CurveSpec& curve, int n_samples = 256,
                                        double eps = kDefaultCausalEps);

/// n stations at the centres of n equal arclength cells.
std::vector<double> uniform_stations(const ArclengthTable& table, int n);

struct FrenetSample {
  double s = 0.0;
  double t = 0.0;
  MVec3 position = MVec3::Zero();
  MVec3 tangent = MVec3::Zero();
  MVec3 normal = MVec3::Zero();
  MVec3 binormal = MVec3::Zero();
  double kappa = 0.0;
  double tau = 0.0;
  double kappa_ds = 0.0;
  double tau_ds = 0.0;
  CausalClass curve_class = CausalClass::Spacelike;
  int epsilon = 1;             // causal sign of n for spacelike curves
  bool frame_defined = false;  // false when kappa <= floor or n is null
};

struct DarbouxSample {
  double s = 0.0;
  double t = 0.0;
  MVec3 position = MVec3::Zero();
  MVec3 T = MVec3::Zero();
  MVec3 B = MVec3::Zero();
  MVec3 N = MVec3::Zero();
  double k_g = 0.0;
  double k_n = 0.0;
  double tau_g = 0.0;
  double k_g_ds = 0.0;
  double k_n_ds = 0.0;
  double tau_g_ds = 0.0;
  CausalClass curve_class = CausalClass::Spacelike;
  /// Angle between N and the principal normal; NaN where kappa vanishes.
  double phi = std::numeric_limits<double>::quiet_NaN();
};

/// Frenet data from a local expansion. B = mcross(n, t) orientation.
FrenetSample frenet_from_jet(const CurveJet& jet, double s, double eps = kDefaultCausalEps,
                             double curvature_floor = kDefaultCurvatureFloor);

/// Darboux data from a local expansion carrying the surface normal.
DarbouxSample darboux_from_jet(const CurveJet& jet, double s, double eps = kDefaultCausalEps,
                               double curvature_floor = kDefaultCurvatureFloor);

std::vector<FrenetSample> frenet_apparatus(const CurveSpec& curve, const ArclengthTable& table,
                                           const std::vector<double>& stations,
                                           double eps = kDefaultCausalEps,
                                           double curvature_floor = kDefaultCurvatureFloor);

std::vector<DarbouxSample> darboux_apparatus(const CurveSpec& curve, const ArclengthTable& table,
                                             const std::vector<double>& stations,
                                             double eps = kDefaultCausalEps,
                                             double curvature_floor = kDefaultCurvatureFloor);

/// Throws CausalClassChange unless every sample has the class of the first.
void require_constant_class(const std::vector<DarbouxSample>& samples);

/// Curvature of a surface curve recovered from its Darboux scalars:
/// timelike curves kappa^2 = k_g^2 + k_n^2, spacelike |k_n^2 - k_g^2|.
double darboux_curvature(const DarbouxSample& sample);

/// Angle phi between N and n: (k_g, k_n) = kappa (sinh phi, cosh phi) for a
/// spacelike curve with spacelike principal normal, the roles swapped when
/// the principal normal is timelike, and kappa (cos phi, sin phi) for
/// timelike curves. Throws VanishingCurvature when kappa <= floor.
double normal_angle_phi(const DarbouxSample& sample, const FrenetSample& frenet,
                        double curvature_floor = kDefaultCurvatureFloor);

/// Analytic arclength derivative of phi from the scalar derivatives.
double normal_angle_phi_ds(const DarbouxSample& sample);

}  // namespace isophote

#endif  // ISOPHOTE_CURVE_HPP
