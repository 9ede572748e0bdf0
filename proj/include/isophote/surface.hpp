#ifndef ISOPHOTE_SURFACE_HPP
#define ISOPHOTE_SURFACE_HPP

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "isophote/expr.hpp"
#include "isophote/lorentz.hpp"

namespace isophote {

struct Interval {
  double min = 0.0;
  double max = 1.0;
  bool periodic = false;

  double length() const { return max - min; }
};

/// Parametric surface r(u,v) = (x0, x1, x2) over a rectangle. Symbolic
/// partial derivatives up to total order 3 are built once at construction.
class Surface {
 public:
  Surface(std::array<Expr, 3> coords, Interval u, Interval v);

  const Interval& u_domain() const { return u_; }
  const Interval& v_domain() const { return v_; }

  /// Symbolic partial d^(du+dv) x_coord / du^du dv^dv, du + dv <= 3.
  const Expr& partial(int coord, int du, int dv) const;

  template <typename S>
  Vec3<S> position(const S& u, const S& v) const {
    return eval3(0, 0, u, v);
  }
  template <typename S>
  Vec3<S> r_u(const S& u, const S& v) const {
    return eval3(1, 0, u, v);
  }
  template <typename S>
  Vec3<S> r_v(const S& u, const S& v) const {
    return eval3(0, 1, u, v);
  }

  /// Unnormalized normal mcross(r_u, r_v).
  template <typename S>
  Vec3<S> normal_raw(const S& u, const S& v) const {
    return mcross(r_u(u, v), r_v(u, v));
  }

  /// Raw normal with its parameter partials.
  template <typename S>
  struct NormalPartials {
    Vec3<S> n, n_u, n_v;
  };

  template <typename S>
  NormalPartials<S> normal_partials(const S& u, const S& v) const {
    const Vec3<S> ru = eval3(1, 0, u, v);
    const Vec3<S> rv = eval3(0, 1, u, v);
    const Vec3<S> ruu = eval3(2, 0, u, v);
    const Vec3<S> ruv = eval3(1, 1, u, v);
    const Vec3<S> rvv = eval3(0, 2, u, v);
    return {mcross(ru, rv), Vec3<S>(mcross(ruu, rv) + mcross(ru, ruv)),
            Vec3<S>(mcross(ruv, rv) + mcross(ru, rvv))};
  }

  bool in_domain(double u, double v, double slack = 0.0) const;

  /// Maps a periodic coordinate back into [min, max).
  double wrap_u(double u) const;
  double wrap_v(double v) const;

 private:
  template <typename S>
  Vec3<S> eval3(int du, int dv, const S& u, const S& v) const {
    Bindings<S> b;
    b.set(Var::U, u).set(Var::V, v);
    Vec3<S> r;
    for (int i = 0; i < 3; ++i) r[i] = evaluate(partial(i, du, dv), b);
    return r;
  }

  static int slot(int du, int dv);

  // partials_[coord][slot(du,dv)]
  std::array<std::array<Expr, 10>, 3> partials_;
  Interval u_;
  Interval v_;
};

using SurfacePtr = std::shared_ptr<const Surface>;

struct SurfaceNormal {
  MVec3 raw;
  MVec3 unit;
};

/// Raw and normalized normal at (u,v). Throws DegenerateParameterization when
/// r_u and r_v are parallel and LightlikeNormal when the normal is null.
SurfaceNormal surface_normal(const Surface& surface, double u, double v,
                             double eps = kDefaultCausalEps);

enum class SurfaceClass { Timelike, Spacelike, Mixed };

std::string_view to_string(SurfaceClass c);

struct SurfaceWitness {
  double u = 0.0;
  double v = 0.0;
  double normal_norm2 = 0.0;  // mdot(N_raw, N_raw) / |N_raw|^2_euclidean
  std::string label;          // timelike | lightlike | degenerate
};

struct SurfaceClassification {
  SurfaceClass surface_class = SurfaceClass::Timelike;
  int samples = 0;
  std::vector<SurfaceWitness> witnesses;  // samples whose normal is not spacelike
};

/// Samples the causal class of the normal on an nu x nv grid (endpoints
/// included unless the parameter is periodic).
SurfaceClassification classify_surface(const Surface& surface, int nu, int nv,
                                       double eps = kDefaultCausalEps);

/// g(u,v) = mdot(N_hat(u,v), d) for a fixed unit axis d.
class IsophoteField {
 public:
  IsophoteField(SurfacePtr surface, const MVec3& axis, double eps = kDefaultCausalEps);

  const Surface& surface() const { return *surface_; }
  const SurfacePtr& surface_ptr() const { return surface_; }
  const MVec3& axis() const { return axis_; }
  double eps() const { return eps_; }

  double value(double u, double v) const;

  /// Throws LightlikeNormal / DegenerateParameterization at bad points.
  void check_normal(double u, double v) const;

  struct Gradient {
    double g_u = 0.0;
    double g_v = 0.0;
  };
  Gradient gradient(double u, double v) const;

  template <typename S>
  struct Jet3 {
    S g, g_u, g_v;
  };

  /// g and its analytic partials, over any scalar type.
  template <typename S>
  Jet3<S> evaluate_with_gradient(const S& u, const S& v) const {
    using std::abs, std::sqrt;
    const auto np = surface_->normal_partials(u, v);
    const S q = mdot(np.n, np.n);
    const S nu = sqrt(abs(q));
    const Vec3<S> d{S(axis_[0]), S(axis_[1]), S(axis_[2])};
    const S nd = mdot(np.n, d);
    // g = <n,d>/nu, nu_x = sign(q) <n,n_x>/nu
    const S sign = value_of(q) < 0.0 ? S(-1.0) : S(1.0);
    const S nu_u = sign * mdot(np.n, np.n_u) / nu;
    const S nu_v = sign * mdot(np.n, np.n_v) / nu;
    Jet3<S> r;
    r.g = nd / nu;
    r.g_u = (mdot(np.n_u, d) * nu - nd * nu_u) / (nu * nu);
    r.g_v = (mdot(np.n_v, d) * nu - nd * nu_v) / (nu * nu);
    return r;
  }

 private:
  SurfacePtr surface_;
  MVec3 axis_;
  double eps_;
};

double isophote_scalar(const IsophoteField& field, double u, double v);
IsophoteField::Gradient isophote_gradient(const IsophoteField& field, double u, double v);

}  // namespace isophote

#endif  // ISOPHOTE_SURFACE_HPP
