#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "isophote/isophote.hpp"

namespace isophote {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double denominator(const DarbouxSample& x) { return x.k_n * x.k_n - x.tau_g * x.tau_g; }

struct Stats {
  double mean = 0.0;
  double max_dev = 0.0;
};

Stats stats(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  for (double x : v) s.max_dev = std::max(s.max_dev, std::abs(x - s.mean));
  return s;
}

MVec3 mean_of(const std::vector<MVec3>& v) {
  MVec3 m = MVec3::Zero();
  for (const auto& x : v) m += x;
  return m / static_cast<double>(v.size());
}

// Unit axis from a mean vector; falls back to the raw mean when null.
MVec3 unit_or_raw(const MVec3& m) {
  try {
    return normalize(m);
  } catch (const Error&) {
    return m;
  }
}

double max_distance(const std::vector<MVec3>& v, const MVec3& a) {
  double r = 0.0;
  for (const auto& x : v) r = std::max(r, (x - a).norm());
  return r;
}

// Largest euclidean norm of the finite-difference derivative of d(s).
double derivative_residual(const std::vector<MVec3>& d, const std::vector<double>& s) {
  const std::size_t n = d.size();
  if (n < 2) return 0.0;
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == n ? n - 1 : i + 1;
    const double h = s[b] - s[a];
    if (!(std::abs(h) > 0.0)) continue;
    r = std::max(r, ((d[b] - d[a]) / h).norm());
  }
  return r;
}

void check_invariant_range(AngleKind kind, double c) {
  if ((kind == AngleKind::Cosh || kind == AngleKind::TimeconeCosh) && !(std::abs(c) >= 1.0))
    throw Error(ErrorCode::AngleRangeError, "cosh-kind invariant needs |c| >= 1, got " + fmt(c));
  if (kind == AngleKind::Cos && !(std::abs(c) <= 1.0))
    throw Error(ErrorCode::AngleRangeError, "cos-kind invariant needs |c| <= 1, got " + fmt(c));
  if (!std::isfinite(c)) throw Error(ErrorCode::AngleRangeError, "invariant is not finite");
}

}  // namespace

void check_admissible(const std::vector<DarbouxSample>& samples, IsophoteCase c, const Tolerances& tol) {
  const CaseProperties& p = properties(c);
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "no stations");
  for (const auto& x : samples) {
    if (x.curve_class != p.curve_class)
      throw Error(ErrorCode::CaseInadmissible, std::string("case ") + std::string(to_string(c)) + " needs a " +
                                                   std::string(to_string(p.curve_class)) + " curve");
    const double D = denominator(x);
    if (!(D * p.denominator_sign > tol.admissibility_floor))
      throw Error(ErrorCode::CaseInadmissible, std::string("case ") + std::string(to_string(c)) +
                                                   ": k_n^2 - tau_g^2 = " + fmt(D) + " at s = " + fmt(x.s));
  }
}

double invariant_from_characterization(IsophoteCase c, double value) {
  switch (properties(c).kind) {
    case AngleKind::Cosh:
    case AngleKind::TimeconeCosh:
      if (!(std::abs(value) > 1.0))
        throw Error(ErrorCode::RangeViolation, "coth value must exceed 1 in magnitude, got " + fmt(value));
      return value / std::sqrt(value * value - 1.0);
    case AngleKind::Cos:
      return value / std::sqrt(1.0 + value * value);
    case AngleKind::Sinh:
      if (!(std::abs(value) < 1.0))
        throw Error(ErrorCode::RangeViolation, "tanh value must be below 1 in magnitude, got " + fmt(value));
      return value / std::sqrt(1.0 - value * value);
  }
  return value;
}

CharacterizationResult characterization_function(const std::vector<DarbouxSample>& samples, IsophoteCase c,
                                                 const Tolerances& tol) {
  check_admissible(samples, c, tol);
  CharacterizationResult r;
  r.isophote_case = c;
  for (const auto& x : samples) {
    const double D = denominator(x);
    const double W = x.tau_g_ds * x.k_n - x.k_n_ds * x.tau_g;
    const double v = -(W + x.k_g * D) / (D * std::sqrt(std::abs(D)));
    r.values[0].push_back(v);
    r.values[1].push_back(-v);
  }
  const Stats st = stats(r.values[0]);
  r.mean = {st.mean, -st.mean};
  r.max_deviation = st.max_dev;
  r.tolerance = tol.const_tol * (1.0 + std::abs(st.mean));
  r.constant = r.max_deviation <= r.tolerance;
  r.range_ok = true;
  for (int b = 0; b < 2; ++b) {
    try {
      r.implied_c[static_cast<std::size_t>(b)] = invariant_from_characterization(c, r.mean[static_cast<std::size_t>(b)]);
    } catch (const Error&) {
      r.range_ok = false;
      r.implied_c[static_cast<std::size_t>(b)] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return r;
}

void require_in_range(const CharacterizationResult& r) {
  if (!r.range_ok)
    throw Error(ErrorCode::RangeViolation, std::string(properties(r.isophote_case).value_name) + " value " +
                                               fmt(r.mean[0]) + " is outside the inverse's range");
}

IsophoteCase detect_case(const std::vector<DarbouxSample>& samples, const Tolerances& tol) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "no stations");
  require_constant_class(samples);
  int sign = 0;
  for (const auto& x : samples) {
    const double D = denominator(x);
    const int s = D > tol.admissibility_floor ? 1 : (D < -tol.admissibility_floor ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign))
      throw Error(ErrorCode::CaseInadmissible, "k_n^2 - tau_g^2 = " + fmt(D) + " at s = " + fmt(x.s) +
                                                   " fits no case");
    sign = s;
  }
  const bool spacelike = samples.front().curve_class == CausalClass::Spacelike;
  if (spacelike && sign < 0) return IsophoteCase::C1b;
  if (!spacelike && sign > 0) return IsophoteCase::C3a;
  // The remaining pairs share one formula; its magnitude tells coth from tanh.
  const IsophoteCase coth_case = spacelike ? IsophoteCase::C1a : IsophoteCase::C3b;
  const IsophoteCase tanh_case = spacelike ? IsophoteCase::C2 : IsophoteCase::C4;
  const CharacterizationResult r = characterization_function(samples, coth_case, tol);
  return std::abs(r.mean[0]) > 1.0 ? coth_case : tanh_case;
}

AxisEstimate axis_branches(const std::vector<DarbouxSample>& samples, IsophoteCase c, double invariant,
                           const Tolerances& tol) {
  check_admissible(samples, c, tol);
  const CaseProperties& p = properties(c);
  check_invariant_range(p.kind, invariant);
  const double delta = metric_sign(p.axis_class);
  const double lambda = std::sqrt(std::abs(invariant * invariant - delta));

  std::vector<double> s;
  s.reserve(samples.size());
  for (const auto& x : samples) s.push_back(x.s);

  AxisEstimate out;
  out.isophote_case = c;
  out.c = invariant;
  for (int sign : {1, -1}) {
    AxisBranch b;
    b.sign = sign;
    for (const auto& x : samples) {
      const double D = denominator(x);
      b.samples.push_back(MVec3(sign * lambda * (x.tau_g * x.T + x.k_n * x.B) / std::sqrt(std::abs(D)) +
                                invariant * x.N));
    }
    b.axis = unit_or_raw(mean_of(b.samples));
    b.residual_const = max_distance(b.samples, b.axis);
    b.residual_deriv = derivative_residual(b.samples, s);
    out.branches.push_back(std::move(b));
  }
  if (out.branches[1].residual_const < out.branches[0].residual_const) std::swap(out.branches[0], out.branches[1]);
  const AxisBranch& best = out.branches.front();
  out.axis = best.axis;
  out.causal = causal_class(best.axis, tol.eps_causal);
  out.residual_const = best.residual_const;
  out.residual_deriv = best.residual_deriv;
  return out;
}

AxisEstimate reconstruct_axis(const std::vector<DarbouxSample>& samples, IsophoteCase c, double invariant,
                              const Tolerances& tol) {
  AxisEstimate a = axis_branches(samples, c, invariant, tol);
  if (!(a.residual_const <= tol.axis_tol))
    throw Error(ErrorCode::NonConstantAxis, "axis residual " + fmt(a.residual_const) + " exceeds " +
                                                fmt(tol.axis_tol) + " for case " + std::string(to_string(c)));
  return a;
}

AxisEstimate fit_axis(const std::vector<MVec3>& normals, const Tolerances& tol) {
  if (normals.size() < 3) throw Error(ErrorCode::InvalidArgument, "fit_axis needs at least 3 normals");
  // mdot(N, d) = (J N) . d with J = diag(-1, 1, 1).
  std::vector<MVec3> w;
  w.reserve(normals.size());
  for (const auto& n : normals) w.emplace_back(-n[0], n[1], n[2]);
  const MVec3 m = mean_of(w);
  Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
  double scale = 0.0;
  for (const auto& x : w) {
    C += (x - m) * (x - m).transpose();
    scale = std::max(scale, x.squaredNorm());
  }
  C /= static_cast<double>(w.size());
  const double trace = C.trace();
  if (!(trace > 1e-24 * (1.0 + scale)))
    throw Error(ErrorCode::DegenerateFit, "normals are constant; every axis has zero variance");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(C);
  const Eigen::Vector3d ev = es.eigenvalues();
  if (ev[1] - ev[0] <= 1e-9 * trace)
    throw Error(ErrorCode::DegenerateFit, "minimum-variance axis is not unique");
  MVec3 d = es.eigenvectors().col(0);
  if (causal_class(d, tol.eps_causal) == CausalClass::Lightlike)
    throw Error(ErrorCode::DegenerateFit, "minimum-variance axis is lightlike");
  d = normalize(d, tol.eps_causal);
  for (int k = 0; k < 3; ++k) {
    if (std::abs(d[k]) > 1e-12) {
      if (d[k] < 0.0) d = -d;
      break;
    }
  }
  std::vector<double> g;
  g.reserve(normals.size());
  for (const auto& n : normals) g.push_back(mdot(n, d));
  const Stats st = stats(g);
  AxisEstimate out;
  out.axis = d;
  out.causal = causal_class(d, tol.eps_causal);
  out.c = st.mean;
  out.residual_const = st.max_dev;
  return out;
}

AxisEstimate frenet_axis(const std::vector<DarbouxSample>& darboux, const std::vector<FrenetSample>& frenet,
                         IsophoteCase c, double invariant, const MVec3& reference) {
  if (darboux.size() != frenet.size() || darboux.empty())
    throw Error(ErrorCode::InvalidArgument, "Darboux and Frenet samples must match");
  const CaseProperties& p = properties(c);
  check_invariant_range(p.kind, invariant);
  const double lambda = std::sqrt(std::abs(invariant * invariant - metric_sign(p.axis_class)));
  std::vector<double> s;
  for (const auto& x : darboux) s.push_back(x.s);

  AxisEstimate best;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int turn : {1, -1}) {
    for (int sign : {1, -1}) {
      AxisBranch b;
      b.sign = sign * turn;
      for (std::size_t i = 0; i < darboux.size(); ++i) {
        const auto& x = darboux[i];
        const auto& f = frenet[i];
        const double D = f.kappa * f.kappa - f.tau * f.tau;
        if (!f.frame_defined || !(std::abs(D) > 0.0))
          throw Error(ErrorCode::DegenerateHelix, "curvature and torsion do not define an axis at s = " + fmt(x.s));
        b.samples.push_back(MVec3(sign * lambda * (f.tau * x.T + turn * f.kappa * x.B) / std::sqrt(std::abs(D)) +
                                  invariant * x.N));
      }
      b.axis = unit_or_raw(mean_of(b.samples));
      b.residual_const = max_distance(b.samples, b.axis);
      b.residual_deriv = derivative_residual(b.samples, s);
      const double gap = std::min((b.axis - reference).norm(), (b.axis + reference).norm());
      if (gap < best_gap) {
        best_gap = gap;
        best.axis = b.axis;
        best.residual_const = b.residual_const;
        best.residual_deriv = b.residual_deriv;
        best.branches.assign(1, b);
      }
    }
  }
  best.causal = causal_class(best.axis);
  best.isophote_case = c;
  best.c = invariant;
  return best;
}

SeriesVerdict slant_helix_function(const std::vector<FrenetSample>& frenet, const Tolerances& tol) {
  SeriesVerdict r;
  for (const auto& f : frenet) {
    if (!f.frame_defined || !(f.kappa > tol.eps_curv))
      throw Error(ErrorCode::VanishingCurvature, "Frenet frame undefined at s = " + fmt(f.s));
    const double E = f.tau * f.tau - f.kappa * f.kappa;
    if (!(std::abs(E) > tol.admissibility_floor))
      throw Error(ErrorCode::DegenerateHelix, "tau^2 = kappa^2 at s = " + fmt(f.s));
    r.values.push_back((f.tau_ds * f.kappa - f.kappa_ds * f.tau) / std::pow(std::abs(E), 1.5));
  }
  const Stats st = stats(r.values);
  r.mean = st.mean;
  r.max_deviation = st.max_dev;
  r.tolerance = tol.const_tol * (1.0 + std::abs(st.mean));
  r.constant = r.max_deviation <= r.tolerance;
  return r;
}

std::vector<GaussSample> gauss_map_geodesic_curvature(const std::vector<DarbouxSample>& samples,
                                                      const Tolerances& tol) {
  std::vector<GaussSample> out;
  out.reserve(samples.size());
  for (const auto& x : samples) {
    const bool spacelike = x.curve_class == CausalClass::Spacelike;
    const double D = denominator(x);
    // N' and N'' in the Darboux frame.
    const MVec3 p1 = x.k_n * x.T + x.tau_g * x.B;
    const MVec3 p2 = (x.k_n_ds + x.k_g * x.tau_g) * x.T + (x.k_n * x.k_g + x.tau_g_ds) * x.B +
                     (spacelike ? -D : D) * x.N;
    const double q = mdot(p1, p1);
    const double speed = std::sqrt(std::abs(q));
    if (!(speed > tol.eps_curv) || causal_class(p1, tol.eps_causal) == CausalClass::Lightlike)
      throw Error(ErrorCode::DegenerateGaussImage, "Gauss image is singular or null at s = " + fmt(x.s));
    const MVec3 Tb = p1 / speed;
    const MVec3 Bb = mcross(x.N, Tb);
    const MVec3 cr = mcross(p1, p2);
    GaussSample g;
    g.k_g = mdot(p2, Bb) / (speed * speed * mdot(Bb, Bb));
    g.k_n = mdot(p2, x.N) / (speed * speed);
    g.kappa = std::sqrt(std::abs(mdot(cr, cr))) / (speed * speed * speed);
    out.push_back(g);
  }
  return out;
}

}  // namespace isophote
