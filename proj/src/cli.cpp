#include "isophote/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <limits>
#include <thread>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "isophote/io.hpp"

namespace isophote::cli {

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string num(std::size_t x) { return std::to_string(x); }

class Table {
 public:
  Table(std::ostream& out, char sep) : out_(out), sep_(sep) {}

  void header(std::initializer_list<const char*> cols) {
    bool first = true;
    for (const char* c : cols) {
      if (!first) out_ << sep_;
      out_ << c;
      first = false;
    }
    out_ << '\n';
  }

  template <typename... Args>
  void row(const Args&... cells) {
    bool first = true;
    ((out_ << (first ? "" : std::string(1, sep_)) << cells, first = false), ...);
    out_ << '\n';
  }

 private:
  std::ostream& out_;
  char sep_;
};

struct Raw {
  std::string command;
  std::string surface, curve, axis, kind, isophote_case, format, out;
  double c = 0.0, angle = 0.0;
  std::vector<int> grid;
  int stations = 200;
  int workers = 1;
  Tolerances tol;
  std::vector<CLI::Option*> c_opts, angle_opts, kind_opts, grid_opts, case_opts, axis_opts;
  std::vector<CLI::Option*> verify_tol_opts;
};

std::unique_ptr<CLI::App> build_app(Raw& r) {
  auto app = std::make_unique<CLI::App>("Isophote curves on timelike surfaces in Minkowski 3-space", "isophote");
  app->require_subcommand(1);

  struct Spec {
    const char* name;
    const char* help;
    bool surface_required, curve, axis, invariant, grid, stations, workers, isophote_case;
  };
  const Spec specs[] = {
      {"classify", "causal type of a surface with non-timelike witnesses", true, false, false, false, true, false, false, false},
      {"field", "grid dump of g = <N, d>", true, false, true, false, true, false, true, false},
      {"extract", "isophote polylines for a level c", true, false, true, true, true, false, true, false},
      {"frames", "Frenet and Darboux data along a curve", false, true, false, false, false, true, false, false},
      {"verify", "constant-angle check of a surface curve", false, true, true, false, false, true, false, false},
      {"axis", "axis reconstruction with a variance-fit cross-check", false, true, true, true, false, true, false, true},
      {"report", "theorem checks for a surface curve", false, true, true, false, false, true, false, true},
  };
  for (const Spec& s : specs) {
    CLI::App* sub = app->add_subcommand(s.name, s.help);
    sub->callback([&r, name = std::string(s.name)] { r.command = name; });
    auto* surf = sub->add_option("--surface", r.surface, "surface spec file");
    if (s.surface_required) surf->required();
    if (s.curve) sub->add_option("--curve", r.curve, "curve spec file")->required();
    if (s.axis) {
      auto* a = sub->add_option("--axis", r.axis, "axis d as a,b,c");
      if (std::string(s.name) == "field" || std::string(s.name) == "extract") a->required();
      r.axis_opts.push_back(a);
    }
    if (s.invariant) {
      auto* c = sub->add_option("--c", r.c, "invariant value c = <N, d>")->allow_extra_args(false);
      auto* angle = sub->add_option("--angle", r.angle, "angle, converted to c through --kind");
      auto* kind = sub->add_option("--kind", r.kind, "angle kind: cosh | cos | sinh | timecone_cosh");
      r.c_opts.push_back(c);
      r.angle_opts.push_back(angle);
      r.kind_opts.push_back(kind);
    }
    if (s.grid) r.grid_opts.push_back(sub->add_option("--grid", r.grid, "grid cells nu nv")->expected(2));
    if (s.stations) sub->add_option("--stations", r.stations, "arclength stations")->check(CLI::PositiveNumber);
    if (s.workers) sub->add_option("--workers", r.workers, "threads for grid sweeps")->check(CLI::PositiveNumber);
    if (s.isophote_case) r.case_opts.push_back(sub->add_option("--case", r.isophote_case, "C1a C1b C2 C3a C3b C4"));
    sub->add_option("--out", r.out, "output file (default stdout)");
    sub->add_option("--format", r.format, "csv | tsv | report");
    sub->add_option("--eps-causal", r.tol.eps_causal, "lightlike band");
    sub->add_option("--eps-curv", r.tol.eps_curv, "curvature floor");
    sub->add_option("--eps-grad", r.tol.eps_grad, "critical-point gradient floor");
    sub->add_option("--refine-tol", r.tol.refine_tol, "vertex refinement tolerance");
    r.verify_tol_opts.push_back(sub->add_option("--verify-tol", r.tol.verify_tol, "constant-angle tolerance"));
    sub->add_option("--const-tol", r.tol.const_tol, "characterization constancy tolerance");
    sub->add_option("--axis-tol", r.tol.axis_tol, "axis residual tolerance");
    sub->add_option("--geodesic-tol", r.tol.geodesic_tol, "geodesic curvature tolerance");
  }
  return app;
}

bool any_set(const std::vector<CLI::Option*>& opts) {
  for (auto* o : opts)
    if (o->count() > 0) return true;
  return false;
}

MVec3 parse_axis(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(evaluate(Expr::parse(item)));
    } catch (const Error&) {
      throw Error(ErrorCode::InvalidArgument, "--axis: cannot read component '" + item + "'");
    }
  }
  if (v.size() != 3) throw Error(ErrorCode::InvalidArgument, "--axis needs three comma-separated components");
  return {v[0], v[1], v[2]};
}

AngleKind parse_kind(const std::string& s) {
  if (s == "cosh") return AngleKind::Cosh;
  if (s == "cos") return AngleKind::Cos;
  if (s == "sinh") return AngleKind::Sinh;
  if (s == "timecone_cosh") return AngleKind::TimeconeCosh;
  throw Error(ErrorCode::InvalidArgument, "--kind must be cosh, cos, sinh or timecone_cosh");
}

RunConfig finish(const Raw& r) {
  RunConfig cfg;
  cfg.command = r.command;
  cfg.surface_path = r.surface;
  cfg.curve_path = r.curve;
  if (any_set(r.axis_opts)) cfg.axis = parse_axis(r.axis);
  // Checked here rather than through CLI11 so the message does not depend on
  // its option ordering.
  const bool has_c = any_set(r.c_opts), has_angle = any_set(r.angle_opts), has_kind = any_set(r.kind_opts);
  if (has_c && (has_angle || has_kind))
    throw Error(ErrorCode::InvalidArgument, "--c cannot be combined with --angle or --kind");
  if (has_angle != has_kind) throw Error(ErrorCode::InvalidArgument, "--angle and --kind must be given together");
  if (has_c) cfg.c = r.c;
  if (has_angle) {
    cfg.angle = r.angle;
    cfg.kind = parse_kind(r.kind);
  }
  if (cfg.command == "extract" && !cfg.c && !cfg.angle)
    throw Error(ErrorCode::InvalidArgument, "extract needs --c or --angle with --kind");
  if (any_set(r.case_opts)) {
    cfg.isophote_case = parse_case(r.isophote_case);
    if (!cfg.isophote_case) throw Error(ErrorCode::InvalidArgument, "--case must be one of C1a C1b C2 C3a C3b C4");
  }
  if (any_set(r.grid_opts)) {
    if (r.grid.size() != 2 || r.grid[0] < 2 || r.grid[1] < 2)
      throw Error(ErrorCode::InvalidArgument, "--grid needs two counts, each at least 2");
    cfg.nu = r.grid[0];
    cfg.nv = r.grid[1];
  }
  cfg.stations = r.stations;
  cfg.workers = r.workers;
  cfg.tol = r.tol;
  if (!any_set(r.verify_tol_opts)) cfg.tol.verify_tol = -1.0;
  cfg.out_path = r.out;
  if (!r.format.empty()) {
    if (r.format == "csv")
      cfg.format = OutputFormat::Csv;
    else if (r.format == "tsv")
      cfg.format = OutputFormat::Tsv;
    else if (r.format == "report")
      cfg.format = OutputFormat::Report;
    else
      throw Error(ErrorCode::InvalidArgument, "--format must be csv, tsv or report");
  }
  return cfg;
}

std::string one_line(std::string s) {
  for (char& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

// --- commands ---------------------------------------------------------------

struct Context {
  const RunConfig& cfg;
  std::ostream& out;
  OutputFormat format;
  char sep() const { return format == OutputFormat::Tsv ? '\t' : ','; }
};

SurfacePtr surface_of(const RunConfig& cfg) {
  return cfg.surface_path.empty() ? nullptr : load_surface(cfg.surface_path);
}

CurveSpec curve_of(const RunConfig& cfg) { return load_curve(cfg.curve_path, surface_of(cfg)); }

CurveSpec surface_curve_of(const RunConfig& cfg) {
  CurveSpec c = curve_of(cfg);
  if (c.kind() != CurveKind::Surface)
    throw Error(ErrorCode::InputError, cfg.curve_path + ": '" + cfg.command + "' needs a curve with kind = surface");
  return c;
}

double invariant_of(const RunConfig& cfg) {
  if (cfg.c) return *cfg.c;
  return invariant_from_angle(*cfg.kind, *cfg.angle);
}

std::string vec(const MVec3& v) { return "(" + num(v[0]) + ", " + num(v[1]) + ", " + num(v[2]) + ")"; }

int cmd_classify(const Context& ctx) {
  const SurfacePtr s = load_surface(ctx.cfg.surface_path);
  const SurfaceClassification r = classify_surface(*s, ctx.cfg.nu.value_or(64), ctx.cfg.nv.value_or(64), ctx.cfg.tol.eps_causal);
  if (ctx.format == OutputFormat::Report) {
    ctx.out << "surface: " << to_string(r.surface_class) << '\n';
    ctx.out << "samples: " << r.samples << '\n';
    ctx.out << "witnesses: " << r.witnesses.size() << '\n';
    for (const auto& w : r.witnesses)
      ctx.out << "  " << w.label << " normal at (" << num(w.u) << ", " << num(w.v)
              << "), <N,N>/|N|^2 = " << num(w.normal_norm2) << '\n';
  } else {
    Table t(ctx.out, ctx.sep());
    t.header({"class", "samples", "u", "v", "normal_norm2", "label"});
    const std::string cls(to_string(r.surface_class));
    if (r.witnesses.empty()) t.row(cls, r.samples, "nan", "nan", "nan", "none");
    for (const auto& w : r.witnesses) t.row(cls, r.samples, num(w.u), num(w.v), num(w.normal_norm2), w.label);
  }
  return r.surface_class == SurfaceClass::Timelike ? kExitOk : kExitRejected;
}

int cmd_field(const Context& ctx) {
  const SurfacePtr s = load_surface(ctx.cfg.surface_path);
  const IsophoteField field(s, *ctx.cfg.axis, ctx.cfg.tol.eps_causal);
  const int nu = ctx.cfg.nu.value_or(128), nv = ctx.cfg.nv.value_or(128);
  const auto& ud = s->u_domain();
  const auto& vd = s->v_domain();
  const int NU = ud.periodic ? nu : nu + 1;
  const int NV = vd.periodic ? nv : nv + 1;
  std::vector<double> g(static_cast<std::size_t>(NU) * NV);
  std::vector<std::thread> pool;
  const int workers = std::clamp(ctx.cfg.workers, 1, NU);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = NU * w / workers; i < NU * (w + 1) / workers; ++i)
        for (int j = 0; j < NV; ++j) {
          double x;
          try {
            x = field.value(ud.min + i * ud.length() / nu, vd.min + j * vd.length() / nv);
          } catch (const Error&) {
            x = std::numeric_limits<double>::quiet_NaN();
          }
          g[static_cast<std::size_t>(i) * NV + j] = x;
        }
    });
  }
  for (auto& th : pool) th.join();
  if (ctx.format == OutputFormat::Report) {
    double lo = INFINITY, hi = -INFINITY;
    int bad = 0;
    for (double x : g) {
      if (std::isnan(x)) {
        ++bad;
        continue;
      }
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    ctx.out << "nodes: " << g.size() << '\n' << "g min: " << num(lo) << '\n' << "g max: " << num(hi) << '\n'
            << "undefined: " << bad << '\n';
    return kExitOk;
  }
  Table t(ctx.out, ctx.sep());
  t.header({"u", "v", "g"});
  for (int i = 0; i < NU; ++i)
    for (int j = 0; j < NV; ++j)
      t.row(num(ud.min + i * ud.length() / nu), num(vd.min + j * vd.length() / nv),
            num(g[static_cast<std::size_t>(i) * NV + j]));
  return kExitOk;
}

int cmd_extract(const Context& ctx) {
  const SurfacePtr s = load_surface(ctx.cfg.surface_path);
  const IsophoteField field(s, *ctx.cfg.axis, ctx.cfg.tol.eps_causal);
  ExtractOptions opts;
  opts.nu = ctx.cfg.nu.value_or(128);
  opts.nv = ctx.cfg.nv.value_or(128);
  opts.workers = ctx.cfg.workers;
  opts.tol = ctx.cfg.tol;
  const double c = invariant_of(ctx.cfg);
  const ExtractResult r = extract_isophotes(field, c, opts);
  if (ctx.format == OutputFormat::Report) {
    ctx.out << "c: " << num(c) << '\n' << "components: " << r.curves.size() << '\n'
            << "skipped cells: " << r.skipped_cells << '\n' << "dropped vertices: " << r.dropped_vertices << '\n';
    for (std::size_t k = 0; k < r.curves.size(); ++k) {
      const auto& cu = r.curves[k];
      ctx.out << "  component " << k << ": " << cu.uv.size() << " vertices, " << (cu.closed ? "closed" : "open")
              << ", kind " << to_string(cu.kind) << ", max |g - c| = " << num(cu.max_residual) << '\n';
    }
    return kExitOk;
  }
  Table t(ctx.out, ctx.sep());
  t.header({"component_id", "vertex_id", "u", "v", "x0", "x1", "x2", "g"});
  for (std::size_t k = 0; k < r.curves.size(); ++k) {
    const auto& cu = r.curves[k];
    for (std::size_t i = 0; i < cu.uv.size(); ++i) {
      const MVec3 x = s->position(cu.uv[i][0], cu.uv[i][1]);
      t.row(num(k), num(i), num(cu.uv[i][0]), num(cu.uv[i][1]), num(x[0]), num(x[1]), num(x[2]), num(cu.g[i]));
    }
  }
  return kExitOk;
}

int cmd_frames(const Context& ctx) {
  const CurveSpec curve = curve_of(ctx.cfg);
  const Tolerances& tol = ctx.cfg.tol;
  const ArclengthTable table = reparameterize_arclength(curve, 256, tol.eps_causal);
  const auto st = uniform_stations(table, ctx.cfg.stations);
  const auto frenet = frenet_apparatus(curve, table, st, tol.eps_causal, tol.eps_curv);
  std::vector<DarbouxSample> darboux;
  if (curve.kind() == CurveKind::Surface) darboux = darboux_apparatus(curve, table, st, tol.eps_causal, tol.eps_curv);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const MVec3 nanv(nan, nan, nan);

  if (ctx.format == OutputFormat::Report) {
    ctx.out << "curve: " << (curve.kind() == CurveKind::Surface ? "surface" : "space") << ", "
            << to_string(frenet.front().curve_class) << '\n';
    ctx.out << "length: " << num(table.length()) << '\n' << "stations: " << st.size() << '\n';
    auto range = [&](const char* name, auto get) {
      double lo = INFINITY, hi = -INFINITY;
      for (std::size_t i = 0; i < st.size(); ++i) {
        const double x = get(i);
        if (std::isnan(x)) continue;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      ctx.out << name << ": [" << num(lo) << ", " << num(hi) << "]\n";
    };
    range("kappa", [&](std::size_t i) { return frenet[i].kappa; });
    range("tau", [&](std::size_t i) { return frenet[i].frame_defined ? frenet[i].tau : nan; });
    if (!darboux.empty()) {
      range("k_g", [&](std::size_t i) { return darboux[i].k_g; });
      range("k_n", [&](std::size_t i) { return darboux[i].k_n; });
      range("tau_g", [&](std::size_t i) { return darboux[i].tau_g; });
    }
    return kExitOk;
  }
  Table t(ctx.out, ctx.sep());
  t.header({"s", "x0", "x1", "x2", "T0", "T1", "T2", "B0", "B1", "B2", "N0", "N1", "N2", "k_g", "k_n", "tau_g",
            "kappa", "tau", "phi"});
  for (std::size_t i = 0; i < st.size(); ++i) {
    const auto& f = frenet[i];
    MVec3 T = f.tangent, B = f.frame_defined ? f.binormal : nanv, N = f.frame_defined ? f.normal : nanv;
    double kg = nan, kn = nan, tg = nan, phi = nan;
    if (!darboux.empty()) {
      const auto& d = darboux[i];
      T = d.T;
      B = d.B;
      N = d.N;
      kg = d.k_g;
      kn = d.k_n;
      tg = d.tau_g;
      phi = d.phi;
    }
    t.row(num(st[i]), num(f.position[0]), num(f.position[1]), num(f.position[2]), num(T[0]), num(T[1]), num(T[2]),
          num(B[0]), num(B[1]), num(B[2]), num(N[0]), num(N[1]), num(N[2]), num(kg), num(kn), num(tg),
          num(f.kappa), num(f.frame_defined ? f.tau : nan), num(phi));
  }
  return kExitOk;
}

int cmd_verify(const Context& ctx) {
  if (!ctx.cfg.axis) throw Error(ErrorCode::InvalidArgument, "verify needs --axis");
  const CurveSpec curve = surface_curve_of(ctx.cfg);
  const VerifyReport r = verify_isophote(curve, *ctx.cfg.axis, ctx.cfg.stations, ctx.cfg.tol);
  if (ctx.format == OutputFormat::Report) {
    ctx.out << (r.passed ? "PASS" : "FAIL") << " constant angle: c = " << num(r.c_mean) << ", kind "
            << to_string(r.kind) << ", max deviation " << num(r.max_deviation) << " (tolerance "
            << num(r.tolerance) << ", " << r.values.size() << " stations)\n";
  } else {
    Table t(ctx.out, ctx.sep());
    t.header({"c_mean", "max_deviation", "tolerance", "kind", "stations", "verified"});
    t.row(num(r.c_mean), num(r.max_deviation), num(r.tolerance), to_string(r.kind), num(r.values.size()),
          r.passed ? "true" : "false");
  }
  return r.passed ? kExitOk : kExitRejected;
}

int cmd_axis(const Context& ctx) {
  const CurveSpec curve = surface_curve_of(ctx.cfg);
  const Tolerances& tol = ctx.cfg.tol;
  const ArclengthTable table = reparameterize_arclength(curve, 256, tol.eps_causal);
  const auto st = uniform_stations(table, ctx.cfg.stations);
  const auto darboux = darboux_apparatus(curve, table, st, tol.eps_causal, tol.eps_curv);
  const IsophoteCase k = ctx.cfg.isophote_case ? *ctx.cfg.isophote_case : detect_case(darboux, tol);
  double c;
  if (ctx.cfg.c || ctx.cfg.angle) {
    c = invariant_of(ctx.cfg);
  } else if (ctx.cfg.axis) {
    c = verify_isophote(curve, *ctx.cfg.axis, ctx.cfg.stations, tol).c_mean;
  } else {
    const CharacterizationResult chi = characterization_function(darboux, k, tol);
    require_in_range(chi);
    c = chi.implied_c[0];
  }
  const AxisEstimate a = axis_branches(darboux, k, c, tol);

  std::optional<AxisEstimate> fit;
  std::string fit_note;
  try {
    std::vector<MVec3> normals;
    for (const auto& x : darboux) normals.push_back(x.N);
    fit = fit_axis(normals, tol);
  } catch (const Error& e) {
    fit_note = std::string(to_string(e.code())) + ": " + e.what();
  }
  const bool ok = a.residual_const <= tol.axis_tol;

  if (ctx.format == OutputFormat::Report) {
    ctx.out << (ok ? "PASS" : "FAIL") << " axis (case " << to_string(k) << ", c = " << num(c) << "): d = "
            << vec(a.axis) << " " << to_string(a.causal) << ", branch " << (a.branches[0].sign > 0 ? "+" : "-")
            << ", constancy residual " << num(a.residual_const) << " (tolerance " << num(tol.axis_tol)
            << "), d' residual " << num(a.residual_deriv) << '\n';
    if (fit) {
      const double gap = std::min((fit->axis - a.axis).norm(), (fit->axis + a.axis).norm());
      ctx.out << (gap <= tol.axis_tol ? "PASS" : "FAIL") << " fit cross-check: d = " << vec(fit->axis)
              << ", distance up to sign " << num(gap) << " (tolerance " << num(tol.axis_tol) << ")\n";
    } else {
      ctx.out << "ERROR fit cross-check: " << fit_note << '\n';
    }
    if (ctx.cfg.axis) {
      const MVec3 d = normalize(*ctx.cfg.axis, tol.eps_causal);
      const double gap = std::min((d - a.axis).norm(), (d + a.axis).norm());
      ctx.out << (gap <= tol.axis_tol ? "PASS" : "FAIL") << " given axis: distance up to sign " << num(gap)
              << " (tolerance " << num(tol.axis_tol) << ")\n";
    }
  } else {
    Table t(ctx.out, ctx.sep());
    t.header({"branch", "d0", "d1", "d2", "causal", "c", "residual_const", "residual_deriv"});
    for (int sign : {1, -1})
      for (const auto& b : a.branches)
        if (b.sign == sign)
          t.row(sign > 0 ? "+" : "-", num(b.axis[0]), num(b.axis[1]), num(b.axis[2]),
                to_string(causal_class(b.axis, tol.eps_causal)), num(c), num(b.residual_const),
                num(b.residual_deriv));
    if (fit)
      t.row("fit", num(fit->axis[0]), num(fit->axis[1]), num(fit->axis[2]), to_string(fit->causal), num(fit->c),
            num(fit->residual_const), num(fit->residual_deriv));
  }
  return ok ? kExitOk : kExitRejected;
}

int cmd_report(const Context& ctx) {
  const CurveSpec curve = surface_curve_of(ctx.cfg);
  const TheoremReport rep = theorem_report(curve, ctx.cfg.axis, ctx.cfg.stations, ctx.cfg.tol, ctx.cfg.isophote_case);
  if (ctx.format == OutputFormat::Report) {
    if (rep.isophote_case) ctx.out << "case: " << to_string(*rep.isophote_case) << '\n';
    for (const auto& c : rep.checks) {
      ctx.out << to_string(c.status) << ' ' << c.name;
      if (!std::isnan(c.measured)) ctx.out << ": measured " << num(c.measured) << ", tolerance " << num(c.tolerance);
      if (!c.detail.empty()) ctx.out << (std::isnan(c.measured) ? ": " : "; ") << c.detail;
      ctx.out << '\n';
    }
  } else {
    Table t(ctx.out, ctx.sep());
    t.header({"check", "status", "measured", "tolerance", "detail"});
    for (const auto& c : rep.checks) {
      std::string detail = c.detail;
      if (ctx.format == OutputFormat::Csv && detail.find_first_of(",\"") != std::string::npos) {
        std::string q = "\"";
        for (char ch : detail) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        detail = q + "\"";
      }
      t.row(c.name, to_string(c.status), num(c.measured), num(c.tolerance), detail);
    }
  }
  return rep.passed("isophote") ? kExitOk : kExitRejected;
}

}  // namespace

RunConfig parse_command_line(int argc, const char* const* argv) {
  Raw raw;
  auto app = build_app(raw);
  try {
    app->parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::InvalidArgument, one_line(e.what()));
  }
  return finish(raw);
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  OutputFormat format = cfg.format.value_or(
      cfg.command == "verify" || cfg.command == "report" ? OutputFormat::Report : OutputFormat::Csv);
  std::ostringstream buf;
  const Context ctx{cfg, buf, format};
  int code = kExitError;
  try {
    if (cfg.command == "classify")
      code = cmd_classify(ctx);
    else if (cfg.command == "field")
      code = cmd_field(ctx);
    else if (cfg.command == "extract")
      code = cmd_extract(ctx);
    else if (cfg.command == "frames")
      code = cmd_frames(ctx);
    else if (cfg.command == "verify")
      code = cmd_verify(ctx);
    else if (cfg.command == "axis")
      code = cmd_axis(ctx);
    else if (cfg.command == "report")
      code = cmd_report(ctx);
    else
      throw Error(ErrorCode::InvalidArgument, "unknown command '" + cfg.command + "'");
  } catch (const Error& e) {
    std::string msg = e.what();
    // Input errors already name their file; kernel errors get the input named here.
    const std::string& input = cfg.curve_path.empty() ? cfg.surface_path : cfg.curve_path;
    if (!input.empty() && msg.find(input) == std::string::npos &&
        (cfg.surface_path.empty() || msg.find(cfg.surface_path) == std::string::npos))
      msg = input + ": " + msg;
    err << "error: " << to_string(e.code()) << ": " << one_line(msg) << '\n';
    return kExitError;
  }
  if (cfg.out_path.empty()) {
    out << buf.str();
  } else {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) {
      err << "error: InputError: " << cfg.out_path << ": cannot write output\n";
      return kExitError;
    }
    f << buf.str();
  }
  return code;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Raw raw;
  auto app = build_app(raw);
  try {
    app->parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app->help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help arrives as CallForHelp from the subcommand.
    err << "error: " << one_line(e.what()) << '\n';
    return kExitError;
  }
  RunConfig cfg;
  try {
    cfg = finish(raw);
  } catch (const Error& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitError;
  }
  return run(cfg, out, err);
}

}  // namespace isophote::cli
