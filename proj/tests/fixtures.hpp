#ifndef ISOPHOTE_TESTS_FIXTURES_HPP
#define ISOPHOTE_TESTS_FIXTURES_HPP

#include <cmath>
#include <functional>
#include <memory>
#include <string>

#include "isophote/io.hpp"
#include "isophote/isophote.hpp"

namespace fx {

using namespace isophote;

inline SurfacePtr make_surface(const char* x0, const char* x1, const char* x2, Interval u, Interval v) {
  return std::make_shared<const Surface>(std::array<Expr, 3>{Expr::parse(x0), Expr::parse(x1), Expr::parse(x2)}, u,
                                         v);
}

// Lorentzian cylinder (v, cos u, sin u).
inline SurfacePtr cylinder() {
  return make_surface("v", "cos(u)", "sin(u)", {0.0, 2 * M_PI, true}, {-1.0, 1.0, false});
}

// de Sitter sphere (sinh u, cosh u cos v, cosh u sin v).
inline SurfacePtr desitter() {
  return make_surface("sinh(u)", "cosh(u)*cos(v)", "cosh(u)*sin(v)", {-2.0, 2.0, false}, {0.0, 2 * M_PI, true});
}

inline CurveSpec on(const SurfacePtr& s, const char* u, const char* v, double t0, double t1) {
  return CurveSpec::on_surface(s, Expr::parse(u), Expr::parse(v), t0, t1);
}

inline CurveSpec space(const char* x0, const char* x1, const char* x2, double t0, double t1) {
  return CurveSpec::space({Expr::parse(x0), Expr::parse(x1), Expr::parse(x2)}, t0, t1);
}

inline CurveSpec latitude(double u0) {
  return on(desitter(), std::to_string(u0).c_str(), "t", 0.0, 2 * M_PI);
}
// Spacelike geodesic helix (t/2, cos t, sin t).
inline CurveSpec helix() { return on(cylinder(), "t", "t/2", 0.0, 6.0); }
// Timelike geodesic helix (2t, cos t, sin t).
inline CurveSpec timelike_helix() { return on(cylinder(), "t", "2*t", 0.0, 0.9); }
inline CurveSpec perturbed_latitude() { return on(desitter(), "0.5 + 0.3*sin(t)", "t", 0.0, 2 * M_PI); }

// Seeded isophote fixtures, one per axis case.
struct CaseFixture {
  const char* name;
  IsophoteCase isophote_case;
  SurfacePtr surface;
  MVec3 axis;
  double c;
};

inline std::vector<CaseFixture> six_cases() {
  const double w = std::atanh(0.6);
  const auto g1 = make_surface("u", "v", "(u^2 + 0.2*v^2)/2", {-0.25, 0.25}, {-0.25, 0.25});
  const auto g2 = make_surface("u", "v", "(0.2*u^2 + v^2)/2", {-0.25, 0.25}, {-0.25, 0.25});
  const MVec3 n0(0, 0, -1);
  const MVec3 ys(std::sinh(w), std::cosh(w), 0), yt(std::cosh(w), std::sinh(w), 0);
  return {
      {"C1a", IsophoteCase::C1a, desitter(), MVec3(0, 1, 0), 1.5},
      {"C1b", IsophoteCase::C1b, g1, MVec3(0.5 * n0 + std::sqrt(0.75) * ys), 0.5},
      {"C2", IsophoteCase::C2, desitter(), MVec3(1, 0, 0), -std::sinh(0.5)},
      {"C3a", IsophoteCase::C3a, desitter(), MVec3(0, 0, 1), 0.3},
      {"C3b", IsophoteCase::C3b, g2, MVec3(1.5 * n0 + std::sqrt(1.25) * yt), 1.5},
      {"C4", IsophoteCase::C4, g2, MVec3(0.3 * n0 + std::sqrt(1.09) * yt), 0.3},
  };
}

struct Sampled {
  ArclengthTable table;
  std::vector<double> s;
  std::vector<DarbouxSample> darboux;
  std::vector<FrenetSample> frenet;
};

inline Sampled sample(const CurveSpec& c, int n = 200) {
  ArclengthTable table = reparameterize_arclength(c);
  std::vector<double> s = uniform_stations(table, n);
  std::vector<DarbouxSample> d;
  if (c.kind() == CurveKind::Surface) d = darboux_apparatus(c, table, s);
  std::vector<FrenetSample> f = frenet_apparatus(c, table, s);
  return {std::move(table), std::move(s), std::move(d), std::move(f)};
}

inline double euclid(const MVec3& a, const MVec3& b) { return (a - b).norm(); }
inline double up_to_sign(const MVec3& a, const MVec3& b) { return std::min((a - b).norm(), (a + b).norm()); }

// Central difference of a vector-valued function.
inline MVec3 central(const std::function<MVec3(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

}  // namespace fx

#endif  // ISOPHOTE_TESTS_FIXTURES_HPP
