#include <algorithm>
#include <cmath>
#include <cctype>
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

constexpr CaseProperties kCases[] = {
    {CausalClass::Spacelike, CausalClass::Spacelike, AngleKind::Cosh, 1, "coth"},
    {CausalClass::Spacelike, CausalClass::Spacelike, AngleKind::Cos, -1, "cot"},
    {CausalClass::Spacelike, CausalClass::Timelike, AngleKind::Sinh, 1, "tanh"},
    {CausalClass::Timelike, CausalClass::Spacelike, AngleKind::Cos, 1, "cot"},
    {CausalClass::Timelike, CausalClass::Spacelike, AngleKind::Cosh, -1, "coth"},
    {CausalClass::Timelike, CausalClass::Timelike, AngleKind::Sinh, -1, "tanh"},
};

constexpr std::string_view kCaseNames[] = {"C1a", "C1b", "C2", "C3a", "C3b", "C4"};

Check error_check(std::string name, const Error& e) {
  Check c;
  c.name = std::move(name);
  c.status = CheckStatus::Error;
  c.detail = std::string(to_string(e.code())) + ": " + e.what();
  return c;
}

Check verdict(std::string name, bool pass, double measured, double tolerance, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.status = pass ? CheckStatus::Pass : CheckStatus::Fail;
  c.measured = measured;
  c.tolerance = tolerance;
  c.detail = std::move(detail);
  return c;
}

Check skipped(std::string name, std::string detail) {
  Check c;
  c.name = std::move(name);
  c.detail = std::move(detail);
  return c;
}

}  // namespace

std::string_view to_string(IsophoteCase c) { return kCaseNames[static_cast<int>(c)]; }

std::optional<IsophoteCase> parse_case(std::string_view text) {
  for (int i = 0; i < 6; ++i) {
    const auto& name = kCaseNames[i];
    if (name.size() == text.size() &&
        std::equal(name.begin(), name.end(), text.begin(),
                   [](char a, char b) { return std::tolower(a) == std::tolower(b); }))
      return static_cast<IsophoteCase>(i);
  }
  return std::nullopt;
}

const CaseProperties& properties(IsophoteCase c) { return kCases[static_cast<int>(c)]; }

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Error: return "ERROR";
    case CheckStatus::Skipped: return "SKIP";
  }
  return "?";
}

const Check* TheoremReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool TheoremReport::passed(std::string_view name) const {
  const Check* c = find(name);
  return c != nullptr && c->status == CheckStatus::Pass;
}

VerifyReport verify_isophote(const CurveSpec& curve, const MVec3& axis, int stations, const Tolerances& tol) {
  if (curve.kind() != CurveKind::Surface)
    throw Error(ErrorCode::InvalidArgument, "verification needs a curve on a surface");
  const MVec3 d = normalize(axis, tol.eps_causal);
  const ArclengthTable table = reparameterize_arclength(curve, 256, tol.eps_causal);
  VerifyReport r;
  r.s = uniform_stations(table, stations);
  MVec3 first = MVec3::Zero();
  for (double s : r.s) {
    const auto uv = curve.uv(table.t_of_s(s));
    const MVec3 n = surface_normal(*curve.surface(), uv[0], uv[1], tol.eps_causal).unit;
    if (r.values.empty()) first = n;
    r.values.push_back(mdot(n, d));
  }
  for (double x : r.values) r.c_mean += x;
  r.c_mean /= static_cast<double>(r.values.size());
  for (double x : r.values) r.max_deviation = std::max(r.max_deviation, std::abs(x - r.c_mean));
  r.tolerance = tol.verify_tol_for(r.c_mean);
  r.kind = angle_invariant(first, d, tol.eps_causal).kind;
  r.passed = r.max_deviation <= r.tolerance;
  return r;
}

TheoremReport theorem_report(const CurveSpec& curve, const std::optional<MVec3>& axis, int stations,
                             const Tolerances& tol, std::optional<IsophoteCase> forced_case) {
  if (curve.kind() != CurveKind::Surface)
    throw Error(ErrorCode::InvalidArgument, "theorem report needs a curve on a surface");
  const ArclengthTable table = reparameterize_arclength(curve, 256, tol.eps_causal);
  const auto st = uniform_stations(table, stations);
  const auto darboux = darboux_apparatus(curve, table, st, tol.eps_causal, tol.eps_curv);
  const auto frenet = frenet_apparatus(curve, table, st, tol.eps_causal, tol.eps_curv);

  TheoremReport rep;
  std::optional<MVec3> d;
  std::optional<double> c;

  // Constant angle with the given axis, or with the best-fitting one.
  try {
    if (axis) {
      const VerifyReport v = verify_isophote(curve, *axis, stations, tol);
      d = normalize(*axis, tol.eps_causal);
      c = v.c_mean;
      rep.checks.push_back(verdict("isophote", v.passed, v.max_deviation, v.tolerance,
                                   "c = " + fmt(v.c_mean) + ", kind " + std::string(to_string(v.kind))));
    } else {
      std::vector<MVec3> normals;
      for (const auto& x : darboux) normals.push_back(x.N);
      const AxisEstimate f = fit_axis(normals, tol);
      d = f.axis;
      c = f.c;
      const double t = tol.verify_tol_for(f.c);
      rep.checks.push_back(verdict("isophote", f.residual_const <= t, f.residual_const, t,
                                   "fitted d = (" + fmt(f.axis[0]) + ", " + fmt(f.axis[1]) + ", " +
                                       fmt(f.axis[2]) + "), c = " + fmt(f.c)));
    }
  } catch (const Error& e) {
    rep.checks.push_back(error_check("isophote", e));
  }

  double max_kg = 0.0;
  for (const auto& x : darboux) max_kg = std::max(max_kg, std::abs(x.k_g));
  const bool geodesic = max_kg <= tol.geodesic_tol;
  rep.checks.push_back(verdict("geodesic", geodesic, max_kg, tol.geodesic_tol));

  std::optional<SeriesVerdict> helix;
  try {
    helix = slant_helix_function(frenet, tol);
    rep.checks.push_back(verdict("slant_helix", helix->constant, helix->max_deviation, helix->tolerance,
                                 "mean = " + fmt(helix->mean)));
  } catch (const Error& e) {
    rep.checks.push_back(error_check("slant_helix", e));
  }

  std::optional<CharacterizationResult> chi;
  try {
    const IsophoteCase k = forced_case ? *forced_case : detect_case(darboux, tol);
    rep.isophote_case = k;
    chi = characterization_function(darboux, k, tol);
    rep.checks.push_back(verdict("characterization", chi->constant, chi->max_deviation, chi->tolerance,
                                 std::string(to_string(k)) + ": " + properties(k).value_name + " = " +
                                     fmt(chi->mean[0]) + (chi->range_ok ? "" : " (outside range)")));
  } catch (const Error& e) {
    rep.checks.push_back(error_check("characterization", e));
  }

  if (rep.isophote_case && chi) {
    try {
      const double inv = c ? *c : chi->implied_c[0];
      const AxisEstimate a = axis_branches(darboux, *rep.isophote_case, inv, tol);
      rep.axis = a;
      rep.c = inv;
      rep.checks.push_back(verdict("axis", a.residual_const <= tol.axis_tol, a.residual_const, tol.axis_tol,
                                   "d = (" + fmt(a.axis[0]) + ", " + fmt(a.axis[1]) + ", " + fmt(a.axis[2]) +
                                       "), d' residual " + fmt(a.residual_deriv)));
      if (d) {
        const double gap = std::min((a.axis - *d).norm(), (a.axis + *d).norm());
        rep.checks.push_back(verdict("axis_agreement", gap <= tol.axis_tol, gap, tol.axis_tol));
      }
    } catch (const Error& e) {
      rep.checks.push_back(error_check("axis", e));
    }
  } else {
    rep.checks.push_back(skipped("axis", "no admissible case"));
  }

  if (chi) {
    try {
      const auto gm = gauss_map_geodesic_curvature(darboux, tol);
      double gap = 0.0;
      for (std::size_t i = 0; i < gm.size(); ++i)
        gap = std::max(gap, std::abs(std::abs(gm[i].k_g) - std::abs(chi->values[0][i])));
      rep.checks.push_back(verdict("gauss_map", gap <= 1e-6, gap, 1e-6));
    } catch (const Error& e) {
      rep.checks.push_back(error_check("gauss_map", e));
    }
  } else {
    rep.checks.push_back(skipped("gauss_map", "no characterization values"));
  }

  if (!geodesic) {
    for (const char* name : {"helix_equivalence", "frenet_substitution", "frenet_axis"})
      rep.checks.push_back(skipped(name, "curve is not a geodesic"));
    return rep;
  }
  if (!helix || !chi) {
    for (const char* name : {"helix_equivalence", "frenet_substitution", "frenet_axis"})
      rep.checks.push_back(skipped(name, "slant-helix or characterization values unavailable"));
    return rep;
  }
  rep.checks.push_back(verdict("helix_equivalence", helix->constant == chi->constant,
                               std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                               std::string("slant helix ") + (helix->constant ? "constant" : "non-constant") +
                                   ", characterization " + (chi->constant ? "constant" : "non-constant")));
  double sub = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < helix->values.size(); ++i) {
    sub = std::max(sub, std::abs(std::abs(helix->values[i]) - std::abs(chi->values[0][i])));
    scale = std::max(scale, std::abs(chi->values[0][i]));
  }
  rep.checks.push_back(verdict("frenet_substitution", sub <= 1e-8 * (1.0 + scale), sub, 1e-8 * (1.0 + scale)));
  if (rep.axis) {
    try {
      const AxisEstimate fa = frenet_axis(darboux, frenet, *rep.isophote_case, rep.c, rep.axis->axis);
      const double gap = std::min((fa.axis - rep.axis->axis).norm(), (fa.axis + rep.axis->axis).norm());
      rep.checks.push_back(verdict("frenet_axis", gap <= tol.axis_tol, gap, tol.axis_tol));
    } catch (const Error& e) {
      rep.checks.push_back(error_check("frenet_axis", e));
    }
  } else {
    rep.checks.push_back(skipped("frenet_axis", "no Darboux axis"));
  }
  return rep;
}

}  // namespace isophote
