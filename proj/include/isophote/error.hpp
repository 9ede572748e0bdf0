#ifndef ISOPHOTE_ERROR_HPP
#define ISOPHOTE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace isophote {

enum class ErrorCode {
  SyntaxError,
  UnknownIdentifier,
  DomainError,
  UnboundVariable,
  LightlikeInput,
  LightlikeNormal,
  DegenerateParameterization,
  LightlikeTangent,
  VanishingCurvature,
  CausalClassChange,
  CaseInadmissible,
  RangeViolation,
  AngleRangeError,
  NonConstantAxis,
  DegenerateFit,
  DegenerateHelix,
  DegenerateGaussImage,
  InvalidArgument,
  InputError,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries a code; parse failures also
// carry the byte offset into the offending text.
class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(ErrorCode code, const std::string& what, std::size_t offset = npos)
      : std::runtime_error(what), code_(code), offset_(offset) {}

  ErrorCode code() const noexcept { return code_; }
  std::size_t offset() const noexcept { return offset_; }
  bool has_offset() const noexcept { return offset_ != npos; }

 private:
  ErrorCode code_;
  std::size_t offset_;
};

}  // namespace isophote

#endif  // ISOPHOTE_ERROR_HPP
