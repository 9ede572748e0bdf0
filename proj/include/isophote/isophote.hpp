#ifndef ISOPHOTE_ISOPHOTE_HPP
#define ISOPHOTE_ISOPHOTE_HPP

// Isophote extraction on a parameter grid, constant-angle verification,
// axis reconstruction from Darboux data, the characterization and
// slant-helix functions, and the aggregated theorem report.

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isophote/curve.hpp"
#include "isophote/lorentz.hpp"
#include "isophote/surface.hpp"

namespace isophote {

struct Tolerances {
  double eps_causal = kDefaultCausalEps;
  double eps_curv = kDefaultCurvatureFloor;
  double eps_grad = 1e-12;
  double refine_tol = 1e-10;
  double verify_tol = -1.0;  // negative: 1e-8 * (1 + |c|)
  double const_tol = 1e-6;
  double axis_tol = 1e-4;
  double geodesic_tol = 1e-8;
  double admissibility_floor = 1e-12;  // |k_n^2 - tau_g^2| at or below this is degenerate

  double verify_tol_for(double c) const { return verify_tol >= 0.0 ? verify_tol : 1e-8 * (1.0 + std::abs(c)); }
};

enum class IsophoteCase { C1a, C1b, C2, C3a, C3b, C4 };

std::string_view to_string(IsophoteCase c);
std::optional<IsophoteCase> parse_case(std::string_view text);

struct CaseProperties {
  CausalClass curve_class;
  CausalClass axis_class;
  AngleKind kind;
  int denominator_sign;  // required sign of k_n^2 - tau_g^2
  const char* value_name;  // what the characterization function equals
};

const CaseProperties& properties(IsophoteCase c);

// --- extraction -------------------------------------------------------------

struct ExtractOptions {
  int nu = 128;
  int nv = 128;
  int workers = 1;
  int max_newton = 30;
  Tolerances tol;
};

struct IsophoteCurve {
  std::vector<std::array<double, 2>> uv;  // periodic coordinates wrapped into the domain
  std::vector<double> g;
  double c = 0.0;
  AngleKind kind = AngleKind::Cos;
  bool closed = false;
  double max_residual = 0.0;  // max |g - c| over vertices
  std::optional<IsophoteCase> isophote_case;
};

struct ExtractResult {
  std::vector<IsophoteCurve> curves;
  int skipped_cells = 0;     // cells touching a lightlike or degenerate normal
  int dropped_vertices = 0;  // critical points or failed refinements
};

/// Marching squares over g on an nu x nv cell grid followed by Newton
/// refinement of every crossing. An empty result is a valid return.
ExtractResult extract_isophotes(const IsophoteField& field, double c, const ExtractOptions& opts = {});

/// Darboux data along an extracted polyline. At each vertex the level
/// curve through it is expanded by Picard iteration of the contour flow
/// (-g_v, g_u)/|grad g|; s is the cumulative Minkowski chord length.
std::vector<DarbouxSample> lift_polyline(const IsophoteField& field, const IsophoteCurve& curve,
                                         const Tolerances& tol = {});

/// Local expansion of the level curve of g through (u, v), oriented by sign.
CurveJet level_curve_jet(const IsophoteField& field, double u, double v, double orientation);

// --- verification -----------------------------------------------------------

struct VerifyReport {
  double c_mean = 0.0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  AngleKind kind = AngleKind::Cos;
  std::vector<double> s;
  std::vector<double> values;
  bool passed = false;
};

VerifyReport verify_isophote(const CurveSpec& curve, const MVec3& axis, int stations = 200,
                             const Tolerances& tol = {});

// --- characterization -------------------------------------------------------

struct CharacterizationResult {
  IsophoteCase isophote_case = IsophoteCase::C2;
  // Function values for the + and - sign branches (negatives of each other).
  std::array<std::vector<double>, 2> values;
  std::array<double, 2> mean{};
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool constant = false;
  bool range_ok = false;      // mean lies in the range of coth / cot / tanh
  std::array<double, 2> implied_c{};  // invariant recovered from each branch; NaN when out of range
};

/// Throws CaseInadmissible unless the curve class matches the case and
/// k_n^2 - tau_g^2 has the case's sign (strictly) at every station.
void check_admissible(const std::vector<DarbouxSample>& samples, IsophoteCase c, const Tolerances& tol = {});

CharacterizationResult characterization_function(const std::vector<DarbouxSample>& samples,
                                                 IsophoteCase c, const Tolerances& tol = {});

/// Throws RangeViolation when the characterization constant lies outside
/// the range of the case's inverse function.
void require_in_range(const CharacterizationResult& r);

/// Invariant c recovered from a characterization value v = c / lambda.
double invariant_from_characterization(IsophoteCase c, double value);

/// Auto-detects the case from curve class, the sign of k_n^2 - tau_g^2 and
/// the magnitude of the characterization mean.
IsophoteCase detect_case(const std::vector<DarbouxSample>& samples, const Tolerances& tol = {});

// --- axis -------------------------------------------------------------------

struct AxisBranch {
  int sign = 1;
  MVec3 axis = MVec3::Zero();  // normalized mean of the station axes
  std::vector<MVec3> samples;
  double residual_const = 0.0;  // max euclidean distance of d(s) from the axis
  double residual_deriv = 0.0;  // max euclidean norm of the finite-difference d'(s)
};

struct AxisEstimate {
  MVec3 axis = MVec3::Zero();
  CausalClass causal = CausalClass::Spacelike;
  std::optional<IsophoteCase> isophote_case;
  double c = 0.0;
  double residual_const = 0.0;
  double residual_deriv = std::numeric_limits<double>::quiet_NaN();
  std::vector<AxisBranch> branches;  // both sign branches; chosen one first
};

/// Station axes for both sign branches; no tolerance verdict.
AxisEstimate axis_branches(const std::vector<DarbouxSample>& samples, IsophoteCase c, double invariant,
                           const Tolerances& tol = {});

/// As axis_branches, then throws NonConstantAxis when the chosen branch
/// residual exceeds axis_tol.
AxisEstimate reconstruct_axis(const std::vector<DarbouxSample>& samples, IsophoteCase c, double invariant,
                              const Tolerances& tol = {});

/// Unit d minimizing the variance of mdot(N_i, d), from the smallest
/// eigenvector of the covariance of the metric-flipped normals.
AxisEstimate fit_axis(const std::vector<MVec3>& normals, const Tolerances& tol = {});

/// Axis from Frenet data of a geodesic: k_n and tau_g replaced by the
/// signed curvature and torsion. Both substitution signs are tried and the
/// one closest to `reference` (up to sign) is kept.
AxisEstimate frenet_axis(const std::vector<DarbouxSample>& darboux, const std::vector<FrenetSample>& frenet,
                         IsophoteCase c, double invariant, const MVec3& reference);

// --- slant helix and Gauss map ----------------------------------------------

struct SeriesVerdict {
  std::vector<double> values;
  double mean = 0.0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool constant = false;
};

/// (tau' kappa - kappa' tau) / |tau^2 - kappa^2|^(3/2), which equals
/// kappa^2 (tau/kappa)' / |tau^2 - kappa^2|^(3/2).
SeriesVerdict slant_helix_function(const std::vector<FrenetSample>& frenet, const Tolerances& tol = {});

struct GaussSample {
  double k_g = 0.0;    // geodesic curvature of the Gauss image on the unit pseudo-sphere
  double k_n = 0.0;    // its normal curvature, magnitude 1
  double kappa = 0.0;  // curvature of the image as a space curve
};

std::vector<GaussSample> gauss_map_geodesic_curvature(const std::vector<DarbouxSample>& samples,
                                                      const Tolerances& tol = {});

// --- report -----------------------------------------------------------------

enum class CheckStatus { Pass, Fail, Error, Skipped };
std::string_view to_string(CheckStatus s);

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  double measured = std::numeric_limits<double>::quiet_NaN();
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  std::string detail;
};

struct TheoremReport {
  std::vector<Check> checks;
  std::optional<IsophoteCase> isophote_case;
  std::optional<AxisEstimate> axis;
  double c = std::numeric_limits<double>::quiet_NaN();

  const Check* find(std::string_view name) const;
  bool passed(std::string_view name) const;
};

TheoremReport theorem_report(const CurveSpec& curve, const std::optional<MVec3>& axis, int stations = 200,
                             const Tolerances& tol = {}, std::optional<IsophoteCase> forced_case = {});

}  // namespace isophote

#endif  // ISOPHOTE_ISOPHOTE_HPP
