#ifndef ISOPHOTE_CLI_HPP
#define ISOPHOTE_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "isophote/isophote.hpp"

namespace isophote::cli {

enum class OutputFormat { Csv, Tsv, Report };

struct RunConfig {
  std::string command;  // classify | field | extract | frames | verify | axis | report
  std::string surface_path;
  std::string curve_path;
  std::optional<MVec3> axis;
  std::optional<double> c;
  std::optional<double> angle;
  std::optional<AngleKind> kind;
  std::optional<IsophoteCase> isophote_case;
  std::optional<int> nu, nv;  // per-command defaults when absent
  int stations = 200;
  int workers = 1;
  Tolerances tol;
  std::string out_path;
  std::optional<OutputFormat> format;  // per-command default when absent
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitRejected = 2;

/// Parses argv into a config. Throws Error(InvalidArgument) on unknown or
/// conflicting flags.
RunConfig parse_command_line(int argc, const char* const* argv);

/// Executes one subcommand. Diagnostics go to err as a single line.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_command_line + run, with --help handling.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isophote::cli

#endif  // ISOPHOTE_CLI_HPP
