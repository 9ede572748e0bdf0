#include "isophote/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

namespace isophote {

namespace {

// Kronrod abscissae and weights; the Gauss rule uses the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Gk15 {
  double value;
  double error;
};

Gk15 gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kWgk[7];
  double g = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double x = h * kXgk[i];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    k += kWgk[i] * (f1 + f2);
    if (i % 2 == 1) g += kWg[i / 2] * (f1 + f2);
  }
  return {k * h, std::abs((k - g) * h)};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b, Gk15 whole,
                     double tol, int depth) {
  if (whole.error <= tol || depth >= 40) return whole.value;
  const double m = 0.5 * (a + b);
  const Gk15 left = gk15(f, a, m);
  const Gk15 right = gk15(f, m, b);
  return integrate_rec(f, a, m, left, 0.5 * tol, depth + 1) +
         integrate_rec(f, m, b, right, 0.5 * tol, depth + 1);
}

template <std::size_t N>
Vec3<Taylor<N>> differentiate(const Vec3<Taylor<N>>& v) {
  return Vec3<Taylor<N>>(differentiate(v[0]), differentiate(v[1]), differentiate(v[2]));
}

template <std::size_t N>
Vec3<Taylor<N>> divide(const Vec3<Taylor<N>>& v, const Taylor<N>& k) {
  return Vec3<Taylor<N>>(v[0] / k, v[1] / k, v[2] / k);
}

MVec3 values(const Vec3<Jet>& v) { return MVec3(v[0].value(), v[1].value(), v[2].value()); }

// Arclength derivative along a curve with parameter speed sigma.
struct ArclengthDerivative {
  Jet sigma;
  Jet operator()(const Jet& x) const { return differentiate(x) / sigma; }
  Vec3<Jet> operator()(const Vec3<Jet>& x) const { return divide(differentiate(x), sigma); }
};

struct TangentSeries {
  ArclengthDerivative ds;
  Vec3<Jet> T;
  CausalClass curve_class;
};

TangentSeries tangent_series(const CurveJet& jet, double eps) {
  const Vec3<Jet> vel = differentiate(jet.position);
  const MVec3 v0 = values(vel);
  const CausalClass cls = causal_class(v0, eps);
  if (cls == CausalClass::Lightlike)
    throw Error(ErrorCode::LightlikeTangent, "lightlike tangent at t = " + std::to_string(jet.t));
  const Jet q = mdot(vel, vel);
  ArclengthDerivative ds{sqrt(abs(q))};
  return {ds, ds(jet.position), cls};
}

std::string format_t(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

}  // namespace

CurveSpec CurveSpec::space(std::array<Expr, 3> coords, double t_min, double t_max) {
  if (!(t_max > t_min)) throw Error(ErrorCode::InvalidArgument, "curve interval must have max > min");
  for (const auto& e : coords)
    if (e.uses(Var::U) || e.uses(Var::V) || e.uses(Var::S))
      throw Error(ErrorCode::InvalidArgument, "space curve coordinates may only use t");
  CurveSpec c;
  c.kind_ = CurveKind::Space;
  c.coords_ = std::move(coords);
  c.t_min_ = t_min;
  c.t_max_ = t_max;
  return c;
}

CurveSpec CurveSpec::on_surface(SurfacePtr surface, Expr u, Expr v, double t_min, double t_max) {
  if (!surface) throw Error(ErrorCode::InvalidArgument, "surface curve needs a surface");
  if (!(t_max > t_min)) throw Error(ErrorCode::InvalidArgument, "curve interval must have max > min");
  for (const Expr* e : {&u, &v})
    if (e->uses(Var::U) || e->uses(Var::V) || e->uses(Var::S))
      throw Error(ErrorCode::InvalidArgument, "u(t) and v(t) may only use t");
  CurveSpec c;
  c.kind_ = CurveKind::Surface;
  c.u_ = std::move(u);
  c.v_ = std::move(v);
  c.surface_ = std::move(surface);
  c.t_min_ = t_min;
  c.t_max_ = t_max;
  return c;
}

template <typename S>
Vec3<S> CurveSpec::position_at(const S& t, std::optional<Vec3<S>>* normal) const {
  Bindings<S> b;
  b.set(Var::T, t);
  if (kind_ == CurveKind::Space) {
    return Vec3<S>(evaluate(coords_[0], b), evaluate(coords_[1], b), evaluate(coords_[2], b));
  }
  const S u = evaluate(u_, b);
  const S v = evaluate(v_, b);
  if (normal != nullptr) *normal = surface_->normal_raw(u, v);
  return surface_->position(u, v);
}

std::array<double, 2> CurveSpec::uv(double t) const {
  if (kind_ != CurveKind::Surface)
    throw Error(ErrorCode::InvalidArgument, "space curves have no parameter-space trace");
  return {evaluate(u_, 0.0, 0.0, t), evaluate(v_, 0.0, 0.0, t)};
}

MVec3 CurveSpec::position(double t) const { return position_at<double>(t, nullptr); }

MVec3 CurveSpec::velocity(double t) const {
  using T2 = Taylor<2>;
  const Vec3<T2> p = position_at<T2>(T2::variable(t), nullptr);
  return MVec3(p[0].c[1], p[1].c[1], p[2].c[1]);
}

CurveJet CurveSpec::jet(double t) const {
  CurveJet j;
  j.t = t;
  if (kind_ == CurveKind::Surface) {
    std::optional<Vec3<Jet>> n;
    j.position = position_at<Jet>(Jet::variable(t), &n);
    j.normal_raw = std::move(n);
  } else {
    j.position = position_at<Jet>(Jet::variable(t), nullptr);
  }
  return j;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_tol) {
  if (a == b) return 0.0;
  const Gk15 whole = gk15(f, a, b);
  const double tol = std::max(abs_tol, rel_tol * std::abs(whole.value));
  return integrate_rec(f, a, b, whole, tol, 0);
}

ArclengthTable::ArclengthTable(std::function<double(double)> speed, std::vector<double> t,
                               std::vector<double> s)
    : speed_(std::move(speed)), t_(std::move(t)), s_(std::move(s)) {
  if (t_.size() < 2 || t_.size() != s_.size())
    throw Error(ErrorCode::InvalidArgument, "arclength table needs at least two matching nodes");
}

double ArclengthTable::s_of_t(double t) const {
  t = std::clamp(t, t_.front(), t_.back());
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = static_cast<std::size_t>(std::distance(t_.begin(), it));
  i = std::clamp<std::size_t>(i, 1, t_.size() - 1) - 1;
  return s_[i] + integrate(speed_, t_[i], t, 1e-13, 1e-16);
}

double ArclengthTable::t_of_s(double s) const {
  if (s <= s_.front()) return t_.front();
  if (s >= s_.back()) return t_.back();
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  const std::size_t i = static_cast<std::size_t>(std::distance(s_.begin(), it)) - 1;
  const double s0 = s_[i], s1 = s_[i + 1];
  const double t0 = t_[i], t1 = t_[i + 1];
  const double h = s1 - s0;
  const double x = (s - s0) / h;
  const double m0 = h / speed_(t0);
  const double m1 = h / speed_(t1);
  const double x2 = x * x, x3 = x2 * x;
  double t = (2 * x3 - 3 * x2 + 1) * t0 + (x3 - 2 * x2 + x) * m0 + (-2 * x3 + 3 * x2) * t1 +
             (x3 - x2) * m1;
  t = std::clamp(t, t0, t1);
  for (int iter = 0; iter < 8; ++iter) {
    const double r = s0 + integrate(speed_, t0, t, 1e-13, 1e-16) - s;
    const double step = r / speed_(t);
    t = std::clamp(t - step, t0, t1);
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(t))) break;
  }
  return t;
}

ArclengthTable reparameterize_arclength(const CurveSpec& curve, int n_samples, double eps) {
  if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "arclength table needs samples");
  const double a = curve.t_min();
  const double b = curve.t_max();
  std::vector<double> t(static_cast<std::size_t>(n_samples) + 1);
  std::vector<double> s(t.size(), 0.0);
  CausalClass first = CausalClass::Lightlike;
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = i + 1 == t.size() ? b : a + (b - a) * static_cast<double>(i) / n_samples;
    const CausalClass cls = causal_class(curve.velocity(t[i]), eps);
    if (cls == CausalClass::Lightlike)
      throw Error(ErrorCode::LightlikeTangent, "lightlike tangent at t = " + format_t(t[i]));
    if (i == 0)
      first = cls;
    else if (cls != first)
      throw Error(ErrorCode::CausalClassChange,
                  "tangent changes causal class before t = " + format_t(t[i]));
  }
  auto speed = [&curve](double x) { return mnorm(curve.velocity(x)); };
  for (std::size_t i = 1; i < t.size(); ++i)
    s[i] = s[i - 1] + integrate(speed, t[i - 1], t[i], 1e-13, 1e-16);
  return ArclengthTable(speed, std::move(t), std::move(s));
}

std::vector<double> uniform_stations(const ArclengthTable& table, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "station count must be positive");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double len = table.length();
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = len * (i + 0.5) / n;
  return out;
}

FrenetSample frenet_from_jet(const CurveJet& jet, double s, double eps, double curvature_floor) {
  const TangentSeries ts = tangent_series(jet, eps);
  const auto& ds = ts.ds;
  FrenetSample out;
  out.s = s;
  out.t = jet.t;
  out.position = values(jet.position);
  out.tangent = values(ts.T);
  out.curve_class = ts.curve_class;

  const Vec3<Jet> Tp = ds(ts.T);
  const Jet k = sqrt(abs(mdot(Tp, Tp)));
  if (!(k.value() > curvature_floor)) return out;
  const Vec3<Jet> n = divide(Tp, k);
  const CausalClass ncls = causal_class(values(n), eps);
  if (ncls == CausalClass::Lightlike) return out;

  const Vec3<Jet> b = mcross(n, ts.T);
  const Jet bb = mdot(b, b);
  const Jet tau = mdot(ds(n), b) / bb;
  out.normal = values(n);
  out.binormal = values(b);
  out.kappa = k.value();
  out.tau = tau.value();
  out.kappa_ds = ds(k).value();
  out.tau_ds = ds(tau).value();
  out.epsilon = ts.curve_class == CausalClass::Spacelike && ncls == CausalClass::Timelike ? -1 : 1;
  out.frame_defined = true;
  return out;
}

DarbouxSample darboux_from_jet(const CurveJet& jet, double s, double eps, double curvature_floor) {
  if (!jet.normal_raw)
    throw Error(ErrorCode::InvalidArgument, "Darboux frame needs a curve on a surface");
  const TangentSeries ts = tangent_series(jet, eps);
  const auto& ds = ts.ds;

  const Vec3<Jet>& raw = *jet.normal_raw;
  const MVec3 raw0 = values(raw);
  const Jet q = mdot(raw, raw);
  if (raw0.squaredNorm() == 0.0 || std::abs(q.value()) <= eps * raw0.squaredNorm())
    throw Error(ErrorCode::LightlikeNormal, "lightlike surface normal at t = " + format_t(jet.t));
  if (q.value() < 0.0)
    throw Error(ErrorCode::LightlikeNormal,
                "surface is not timelike (normal is timelike) at t = " + format_t(jet.t));
  const Vec3<Jet> N = divide(raw, sqrt(q));
  const Vec3<Jet> T = ts.T;
  const Vec3<Jet> B = mcross(N, T);
  const Vec3<Jet> Tp = ds(T);
  const Vec3<Jet> Np = ds(N);

  // Signs follow T' = k_g B -+ k_n N, N' = k_n T + tau_g B with the stored
  // metric signs of B (-1 spacelike curve, +1 timelike curve).
  const double sg = ts.curve_class == CausalClass::Spacelike ? -1.0 : 1.0;
  const Jet kg = sg * mdot(Tp, B);
  const Jet kn = sg * mdot(Tp, N);
  const Jet tg = sg * mdot(Np, B);

  DarbouxSample out;
  out.s = s;
  out.t = jet.t;
  out.position = values(jet.position);
  out.T = values(T);
  out.B = values(B);
  out.N = values(N);
  out.k_g = kg.value();
  out.k_n = kn.value();
  out.tau_g = tg.value();
  out.k_g_ds = ds(kg).value();
  out.k_n_ds = ds(kn).value();
  out.tau_g_ds = ds(tg).value();
  out.curve_class = ts.curve_class;

  const MVec3 tp0 = values(Tp);
  if (darboux_curvature(out) > curvature_floor &&
      causal_class(tp0, eps) != CausalClass::Lightlike) {
    try {
      out.phi = normal_angle_phi(out, FrenetSample{}, curvature_floor);
    } catch (const Error&) {
      // phi stays NaN where the principal normal is null
    }
  }
  return out;
}

std::vector<FrenetSample> frenet_apparatus(const CurveSpec& curve, const ArclengthTable& table,
                                           const std::vector<double>& stations, double eps,
                                           double curvature_floor) {
  std::vector<FrenetSample> out;
  out.reserve(stations.size());
  for (double s : stations)
    out.push_back(frenet_from_jet(curve.jet(table.t_of_s(s)), s, eps, curvature_floor));
  return out;
}

std::vector<DarbouxSample> darboux_apparatus(const CurveSpec& curve, const ArclengthTable& table,
                                             const std::vector<double>& stations, double eps,
                                             double curvature_floor) {
  if (curve.kind() != CurveKind::Surface)
    throw Error(ErrorCode::InvalidArgument, "Darboux apparatus needs a curve on a surface");
  std::vector<DarbouxSample> out;
  out.reserve(stations.size());
  for (double s : stations)
    out.push_back(darboux_from_jet(curve.jet(table.t_of_s(s)), s, eps, curvature_floor));
  require_constant_class(out);
  return out;
}

void require_constant_class(const std::vector<DarbouxSample>& samples) {
  for (const auto& x : samples)
    if (x.curve_class != samples.front().curve_class)
      throw Error(ErrorCode::CausalClassChange,
                  "curve changes causal class at s = " + format_t(x.s));
}

double darboux_curvature(const DarbouxSample& x) {
  const double g2 = x.k_g * x.k_g;
  const double n2 = x.k_n * x.k_n;
  return x.curve_class == CausalClass::Timelike ? std::sqrt(g2 + n2) : std::sqrt(std::abs(n2 - g2));
}

double normal_angle_phi(const DarbouxSample& x, const FrenetSample& frenet,
                        double curvature_floor) {
  (void)frenet;
  if (!(darboux_curvature(x) > curvature_floor))
    throw Error(ErrorCode::VanishingCurvature, "curvature vanishes at s = " + format_t(x.s));
  if (x.curve_class == CausalClass::Timelike) return std::atan2(x.k_n, x.k_g);
  // The principal normal is spacelike exactly when k_n^2 > k_g^2.
  if (std::abs(x.k_n) > std::abs(x.k_g)) return std::atanh(x.k_g / x.k_n);
  if (std::abs(x.k_g) > std::abs(x.k_n)) return std::atanh(x.k_n / x.k_g);
  throw Error(ErrorCode::VanishingCurvature, "principal normal is lightlike at s = " + format_t(x.s));
}

double normal_angle_phi_ds(const DarbouxSample& x) {
  const double g = x.k_g, n = x.k_n, gp = x.k_g_ds, np = x.k_n_ds;
  if (x.curve_class == CausalClass::Timelike) return (np * g - gp * n) / (g * g + n * n);
  if (std::abs(n) > std::abs(g)) return (gp * n - np * g) / (n * n - g * g);
  return (np * g - gp * n) / (g * g - n * n);
}

}  // namespace isophote
