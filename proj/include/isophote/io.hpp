#ifndef ISOPHOTE_IO_HPP
#define ISOPHOTE_IO_HPP

// Line-oriented surface and curve spec files.
//
//   surface:  x0 = <expr>   x1 = <expr>   x2 = <expr>
//             u = <min> <max> [periodic]   v = <min> <max> [periodic]
//   curve:    kind = surface | space
//             u = <expr in t>, v = <expr in t>   (kind = surface)
//             x0 = ..., x1 = ..., x2 = ...        (kind = space)
//             t = <min> <max>
//             surface = <path>                   (optional, relative to the curve file)
//
// '#' starts a comment. Bounds may be constant expressions such as 2*pi.
// Errors carry the byte offset into the file and a "name:line:col:" prefix.

#include <filesystem>
#include <string>
#include <string_view>

#include "isophote/curve.hpp"
#include "isophote/surface.hpp"

namespace isophote {

SurfacePtr parse_surface(std::string_view text, const std::string& name = "<surface>");
SurfacePtr load_surface(const std::filesystem::path& path);

/// `surface` overrides any `surface =` line; without either a surface
/// curve is rejected.
CurveSpec parse_curve(std::string_view text, const std::string& name = "<curve>", SurfacePtr surface = nullptr,
                      const std::filesystem::path& base_dir = {});
CurveSpec load_curve(const std::filesystem::path& path, SurfacePtr surface = nullptr);

std::string read_file(const std::filesystem::path& path);

}  // namespace isophote

#endif  // ISOPHOTE_IO_HPP
