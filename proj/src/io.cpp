#include "isophote/io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace isophote {

namespace {

struct Field {
  std::string_view value;
  std::size_t offset = 0;  // byte offset of value in the file
};

class SpecText {
 public:
  SpecText(std::string_view text, std::string name) : text_(text), name_(std::move(name)) {}

  [[noreturn]] void fail(ErrorCode code, std::size_t offset, const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(code,
                name_ + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg + " (offset " +
                    std::to_string(offset) + ")",
                offset);
  }

  // key -> value, with duplicates and malformed lines rejected.
  std::map<std::string, Field, std::less<>> fields(std::initializer_list<std::string_view> allowed) const {
    std::map<std::string, Field, std::less<>> out;
    std::size_t start = 0;
    while (start <= text_.size()) {
      std::size_t end = text_.find('\n', start);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view line = text_.substr(start, end - start);
      const std::size_t hash = line.find('#');
      if (hash != std::string_view::npos) line = line.substr(0, hash);
      std::size_t a = 0;
      while (a < line.size() && std::isspace(static_cast<unsigned char>(line[a]))) ++a;
      if (a < line.size()) {
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) fail(ErrorCode::SyntaxError, start + a, "expected 'key = value'");
        std::size_t kb = eq;
        while (kb > a && std::isspace(static_cast<unsigned char>(line[kb - 1]))) --kb;
        const std::string key(line.substr(a, kb - a));
        bool ok = false;
        for (auto k : allowed) ok = ok || k == key;
        if (!ok) fail(ErrorCode::UnknownIdentifier, start + a, "unknown key '" + key + "'");
        if (out.count(key)) fail(ErrorCode::SyntaxError, start + a, "duplicate key '" + key + "'");
        std::size_t vb = eq + 1;
        while (vb < line.size() && std::isspace(static_cast<unsigned char>(line[vb]))) ++vb;
        std::size_t ve = line.size();
        while (ve > vb && std::isspace(static_cast<unsigned char>(line[ve - 1]))) --ve;
        if (vb == ve) fail(ErrorCode::SyntaxError, start + eq + 1, "missing value for '" + key + "'");
        out.emplace(key, Field{line.substr(vb, ve - vb), start + vb});
      }
      if (end == text_.size()) break;
      start = end + 1;
    }
    return out;
  }

  const Field& require(const std::map<std::string, Field, std::less<>>& f, const std::string& key) const {
    auto it = f.find(key);
    if (it == f.end()) fail(ErrorCode::InputError, text_.size(), "missing key '" + key + "'");
    return it->second;
  }

  Expr expr(const Field& f) const {
    try {
      return Expr::parse(f.value);
    } catch (const Error& e) {
      std::string msg = e.what();
      const auto at = msg.find(" at offset ");
      if (at != std::string::npos) msg.resize(at);
      fail(e.code(), f.offset + (e.has_offset() ? e.offset() : 0), msg);
    }
  }

  double constant(std::string_view token, std::size_t offset) const {
    const Expr e = [&] {
      try {
        return Expr::parse(token);
      } catch (const Error& err) {
        std::string msg = err.what();
        const auto at = msg.find(" at offset ");
        if (at != std::string::npos) msg.resize(at);
        fail(err.code(), offset + (err.has_offset() ? err.offset() : 0), msg);
      }
    }();
    if (!e.is_constant()) fail(ErrorCode::InputError, offset, "bound must be a constant");
    try {
      return evaluate(e);
    } catch (const Error& err) {
      fail(err.code(), offset, err.what());
    }
  }

  // "<min> <max> [periodic]"
  Interval interval(const Field& f, bool allow_periodic) const {
    std::vector<std::pair<std::string_view, std::size_t>> tokens;
    std::size_t i = 0;
    while (i < f.value.size()) {
      while (i < f.value.size() && std::isspace(static_cast<unsigned char>(f.value[i]))) ++i;
      const std::size_t b = i;
      while (i < f.value.size() && !std::isspace(static_cast<unsigned char>(f.value[i]))) ++i;
      if (i > b) tokens.emplace_back(f.value.substr(b, i - b), f.offset + b);
    }
    Interval out;
    if (!tokens.empty() && tokens.back().first == "periodic") {
      if (!allow_periodic) fail(ErrorCode::InputError, tokens.back().second, "this interval cannot be periodic");
      out.periodic = true;
      tokens.pop_back();
    }
    if (tokens.size() != 2) fail(ErrorCode::SyntaxError, f.offset, "expected '<min> <max>'");
    out.min = constant(tokens[0].first, tokens[0].second);
    out.max = constant(tokens[1].first, tokens[1].second);
    if (!(out.max > out.min)) fail(ErrorCode::InputError, f.offset, "interval needs max > min");
    return out;
  }

 private:
  std::string_view text_;
  std::string name_;
};

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InputError, path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SurfacePtr parse_surface(std::string_view text, const std::string& name) {
  const SpecText spec(text, name);
  const auto f = spec.fields({"x0", "x1", "x2", "u", "v"});
  std::array<Expr, 3> coords;
  for (int i = 0; i < 3; ++i) {
    const Field& fx = spec.require(f, "x" + std::to_string(i));
    coords[static_cast<std::size_t>(i)] = spec.expr(fx);
    if (coords[static_cast<std::size_t>(i)].uses(Var::T) || coords[static_cast<std::size_t>(i)].uses(Var::S))
      spec.fail(ErrorCode::InputError, fx.offset, "surface coordinates may only use u and v");
  }
  const Interval u = spec.interval(spec.require(f, "u"), true);
  const Interval v = spec.interval(spec.require(f, "v"), true);
  return std::make_shared<const Surface>(std::move(coords), u, v);
}

SurfacePtr load_surface(const std::filesystem::path& path) {
  return parse_surface(read_file(path), path.string());
}

CurveSpec parse_curve(std::string_view text, const std::string& name, SurfacePtr surface,
                      const std::filesystem::path& base_dir) {
  const SpecText spec(text, name);
  const auto f = spec.fields({"kind", "u", "v", "x0", "x1", "x2", "t", "surface"});
  const Field& kind = spec.require(f, "kind");
  const Interval t = spec.interval(spec.require(f, "t"), false);
  auto only_t = [&](const Expr& e, const Field& fe) {
    if (e.uses(Var::U) || e.uses(Var::V) || e.uses(Var::S))
      spec.fail(ErrorCode::InputError, fe.offset, "curve expressions may only use t");
    return e;
  };
  if (kind.value == "space") {
    for (const char* k : {"u", "v", "surface"})
      if (auto it = f.find(k); it != f.end())
        spec.fail(ErrorCode::InputError, it->second.offset, std::string("'") + k + "' is not used by space curves");
    std::array<Expr, 3> coords;
    for (int i = 0; i < 3; ++i) {
      const Field& fx = spec.require(f, "x" + std::to_string(i));
      coords[static_cast<std::size_t>(i)] = only_t(spec.expr(fx), fx);
    }
    return CurveSpec::space(std::move(coords), t.min, t.max);
  }
  if (kind.value != "surface") spec.fail(ErrorCode::InputError, kind.offset, "kind must be 'surface' or 'space'");
  for (const char* k : {"x0", "x1", "x2"})
    if (auto it = f.find(k); it != f.end())
      spec.fail(ErrorCode::InputError, it->second.offset, std::string("'") + k + "' is not used by surface curves");
  const Field& fu = spec.require(f, "u");
  const Field& fv = spec.require(f, "v");
  Expr u = only_t(spec.expr(fu), fu);
  Expr v = only_t(spec.expr(fv), fv);
  if (!surface) {
    auto it = f.find("surface");
    if (it == f.end()) spec.fail(ErrorCode::InputError, kind.offset, "surface curve without a surface");
    const std::filesystem::path p = base_dir / std::filesystem::path(std::string(it->second.value));
    surface = load_surface(p);
  }
  return CurveSpec::on_surface(std::move(surface), std::move(u), std::move(v), t.min, t.max);
}

CurveSpec load_curve(const std::filesystem::path& path, SurfacePtr surface) {
  return parse_curve(read_file(path), path.string(), std::move(surface), path.parent_path());
}

}  // namespace isophote
