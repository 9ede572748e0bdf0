#include "isophote/surface.hpp"

#include <cmath>
#include <string>

namespace isophote {

namespace {

// Order-3 partial slots: (0,0) (1,0) (0,1) (2,0) (1,1) (0,2) (3,0) (2,1) (1,2) (0,3)
constexpr int kSlot[4][4] = {
    {0, 2, 5, 9},
    {1, 4, 8, -1},
    {3, 7, -1, -1},
    {6, -1, -1, -1},
};

double wrap(double x, const Interval& d) {
  if (!d.periodic) return x;
  const double len = d.length();
  double r = std::fmod(x - d.min, len);
  if (r < 0.0) r += len;
  if (r >= len) r = 0.0;
  return d.min + r;
}

}  // namespace

int Surface::slot(int du, int dv) {
  if (du < 0 || dv < 0 || du + dv > 3)
    throw Error(ErrorCode::InvalidArgument, "surface partials are kept up to total order 3");
  return kSlot[du][dv];
}

Surface::Surface(std::array<Expr, 3> coords, Interval u, Interval v) : u_(u), v_(v) {
  if (!(u.max > u.min) || !(v.max > v.min))
    throw Error(ErrorCode::InvalidArgument, "surface domain must have max > min");
  for (int i = 0; i < 3; ++i) {
    if (coords[i].uses(Var::T) || coords[i].uses(Var::S))
      throw Error(ErrorCode::InvalidArgument, "surface coordinates may only use u and v");
    auto& p = partials_[i];
    p[slot(0, 0)] = coords[i];
    for (int order = 1; order <= 3; ++order) {
      for (int du = order; du >= 0; --du) {
        const int dv = order - du;
        // Build each partial from a lower one: prefer differentiating in u.
        if (du > 0)
          p[slot(du, dv)] = p[slot(du - 1, dv)].diff(Var::U);
        else
          p[slot(du, dv)] = p[slot(du, dv - 1)].diff(Var::V);
      }
    }
  }
}

const Expr& Surface::partial(int coord, int du, int dv) const {
  return partials_.at(static_cast<std::size_t>(coord))[static_cast<std::size_t>(slot(du, dv))];
}

bool Surface::in_domain(double u, double v, double slack) const {
  const bool uok = u_.periodic || (u >= u_.min - slack && u <= u_.max + slack);
  const bool vok = v_.periodic || (v >= v_.min - slack && v <= v_.max + slack);
  return uok && vok;
}

double Surface::wrap_u(double u) const { return wrap(u, u_); }
double Surface::wrap_v(double v) const { return wrap(v, v_); }

SurfaceNormal surface_normal(const Surface& surface, double u, double v, double eps) {
  const MVec3 ru = surface.r_u(u, v);
  const MVec3 rv = surface.r_v(u, v);
  const MVec3 raw = mcross(ru, rv);
  const double e2 = raw.squaredNorm();
  if (!(e2 > 1e-28 * ru.squaredNorm() * rv.squaredNorm()) || e2 == 0.0)
    throw Error(ErrorCode::DegenerateParameterization,
                "r_u and r_v are linearly dependent at (" + std::to_string(u) + ", " +
                    std::to_string(v) + ")");
  const double q = mdot(raw, raw);
  if (std::abs(q) <= eps * e2)
    throw Error(ErrorCode::LightlikeNormal, "lightlike normal at (" + std::to_string(u) + ", " +
                                                std::to_string(v) + ")");
  return {raw, raw / std::sqrt(std::abs(q))};
}

std::string_view to_string(SurfaceClass c) {
  switch (c) {
    case SurfaceClass::Timelike: return "timelike";
    case SurfaceClass::Spacelike: return "spacelike";
    case SurfaceClass::Mixed: return "mixed";
  }
  return "unknown";
}

SurfaceClassification classify_surface(const Surface& surface, int nu, int nv, double eps) {
  if (nu < 2 || nv < 2) throw Error(ErrorCode::InvalidArgument, "classification grid must be at least 2x2");
  const auto& ud = surface.u_domain();
  const auto& vd = surface.v_domain();
  const double du = ud.length() / (ud.periodic ? nu : nu - 1);
  const double dv = vd.length() / (vd.periodic ? nv : nv - 1);

  SurfaceClassification out;
  int spacelike_normals = 0;
  int timelike_normals = 0;
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      const double u = ud.min + i * du;
      const double v = vd.min + j * dv;
      ++out.samples;
      SurfaceWitness w{u, v, 0.0, ""};
      try {
        const SurfaceNormal n = surface_normal(surface, u, v, eps);
        w.normal_norm2 = mdot(n.raw, n.raw) / n.raw.squaredNorm();
        if (w.normal_norm2 > 0.0) {
          ++spacelike_normals;
          continue;
        }
        ++timelike_normals;
        w.label = "timelike";
      } catch (const Error& e) {
        w.label = e.code() == ErrorCode::LightlikeNormal ? "lightlike" : "degenerate";
      }
      out.witnesses.push_back(std::move(w));
    }
  }
  if (spacelike_normals == out.samples)
    out.surface_class = SurfaceClass::Timelike;
  else if (timelike_normals == out.samples)
    out.surface_class = SurfaceClass::Spacelike;
  else
    out.surface_class = SurfaceClass::Mixed;
  return out;
}

IsophoteField::IsophoteField(SurfacePtr surface, const MVec3& axis, double eps)
    : surface_(std::move(surface)), axis_(normalize(axis, eps)), eps_(eps) {}

void IsophoteField::check_normal(double u, double v) const {
  (void)surface_normal(*surface_, u, v, eps_);
}

double IsophoteField::value(double u, double v) const {
  const SurfaceNormal n = surface_normal(*surface_, u, v, eps_);
  return mdot(n.unit, axis_);
}

IsophoteField::Gradient IsophoteField::gradient(double u, double v) const {
  check_normal(u, v);
  const auto j = evaluate_with_gradient(u, v);
  return {j.g_u, j.g_v};
}

double isophote_scalar(const IsophoteField& field, double u, double v) {
  return field.value(u, v);
}

IsophoteField::Gradient isophote_gradient(const IsophoteField& field, double u, double v) {
  return field.gradient(u, v);
}

}  // namespace isophote
