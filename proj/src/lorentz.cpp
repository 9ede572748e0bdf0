#include "isophote/lorentz.hpp"

#include <algorithm>
#include <string>

namespace isophote {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::LightlikeInput: return "LightlikeInput";
    case ErrorCode::LightlikeNormal: return "LightlikeNormal";
    case ErrorCode::DegenerateParameterization: return "DegenerateParameterization";
    case ErrorCode::LightlikeTangent: return "LightlikeTangent";
    case ErrorCode::VanishingCurvature: return "VanishingCurvature";
    case ErrorCode::CausalClassChange: return "CausalClassChange";
    case ErrorCode::CaseInadmissible: return "CaseInadmissible";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::AngleRangeError: return "AngleRangeError";
    case ErrorCode::NonConstantAxis: return "NonConstantAxis";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::DegenerateHelix: return "DegenerateHelix";
    case ErrorCode::DegenerateGaussImage: return "DegenerateGaussImage";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InputError: return "InputError";
  }
  return "Unknown";
}

std::string_view to_string(CausalClass c) {
  switch (c) {
    case CausalClass::Spacelike: return "spacelike";
    case CausalClass::Timelike: return "timelike";
    case CausalClass::Lightlike: return "lightlike";
  }
  return "unknown";
}

std::string_view to_string(AngleKind k) {
  switch (k) {
    case AngleKind::Cosh: return "cosh";
    case AngleKind::Cos: return "cos";
    case AngleKind::Sinh: return "sinh";
    case AngleKind::TimeconeCosh: return "timecone_cosh";
  }
  return "unknown";
}

double causal_threshold(const MVec3& v, double eps) {
  const double m = v.cwiseAbs().maxCoeff();
  return eps * (1.0 + m * m);
}

CausalClass causal_class(const MVec3& v, double eps) {
  if (eps <= 0.0) throw Error(ErrorCode::InvalidArgument, "causal tolerance must be positive");
  if (v.isZero(0.0)) return CausalClass::Spacelike;
  const double q = mdot(v, v);
  const double band = causal_threshold(v, eps);
  if (q > band) return CausalClass::Spacelike;
  if (q < -band) return CausalClass::Timelike;
  return CausalClass::Lightlike;
}

MVec3 normalize(const MVec3& v, double eps) {
  if (v.isZero(0.0) || causal_class(v, eps) == CausalClass::Lightlike)
    throw Error(ErrorCode::LightlikeInput, "cannot normalize a lightlike vector");
  return v / mnorm(v);
}

AngleInvariant angle_invariant(const MVec3& n, const MVec3& d, double eps) {
  const CausalClass cn = causal_class(n, eps);
  const CausalClass cd = causal_class(d, eps);
  if (cn == CausalClass::Lightlike || cd == CausalClass::Lightlike)
    throw Error(ErrorCode::LightlikeInput, "angle between lightlike vectors is undefined");
  const double c = mdot(n, d);
  if (cn == CausalClass::Spacelike && cd == CausalClass::Spacelike) {
    const double gram = mdot(n, n) * mdot(d, d) - c * c;
    return {gram < 0.0 ? AngleKind::Cosh : AngleKind::Cos, c};
  }
  if (cn == CausalClass::Timelike && cd == CausalClass::Timelike)
    return {AngleKind::TimeconeCosh, c};
  return {AngleKind::Sinh, c};
}

double angle_from_invariant(AngleKind kind, double c) {
  switch (kind) {
    case AngleKind::Cos:
      if (std::abs(c) > 1.0)
        throw Error(ErrorCode::AngleRangeError, "cos-kind invariant must satisfy |c| <= 1, got " + std::to_string(c));
      return std::acos(c);
    case AngleKind::Sinh:
      return std::asinh(c);
    case AngleKind::Cosh:
    case AngleKind::TimeconeCosh:
      if (std::abs(c) < 1.0)
        throw Error(ErrorCode::AngleRangeError, "cosh-kind invariant must satisfy |c| >= 1, got " + std::to_string(c));
      return std::acosh(std::abs(c));
  }
  return 0.0;
}

double invariant_from_angle(AngleKind kind, double angle) {
  switch (kind) {
    case AngleKind::Cos: return std::cos(angle);
    case AngleKind::Sinh: return std::sinh(angle);
    case AngleKind::Cosh: return std::cosh(angle);
    case AngleKind::TimeconeCosh: return -std::cosh(angle);
  }
  return 0.0;
}

}  // namespace isophote
