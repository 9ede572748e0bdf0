#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "isophote/isophote.hpp"

namespace isophote {

namespace {

// Runs body(k) for k in [0, n) on up to `workers` threads, contiguous blocks.
template <typename F>
void parallel_for(int n, int workers, F body) {
  workers = std::clamp(workers, 1, std::max(1, n));
  if (workers == 1) {
    for (int k = 0; k < n; ++k) body(k);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const int lo = static_cast<int>(static_cast<long>(n) * w / workers);
    const int hi = static_cast<int>(static_cast<long>(n) * (w + 1) / workers);
    pool.emplace_back([lo, hi, &body] {
      for (int k = lo; k < hi; ++k) body(k);
    });
  }
  for (auto& t : pool) t.join();
}

struct Grid {
  const Interval& ud;
  const Interval& vd;
  int nu, nv;  // cells
  int NU, NV;  // nodes
  double du, dv;

  Grid(const Surface& s, int nu_, int nv_)
      : ud(s.u_domain()), vd(s.v_domain()), nu(nu_), nv(nv_),
        NU(ud.periodic ? nu_ : nu_ + 1), NV(vd.periodic ? nv_ : nv_ + 1),
        du(ud.length() / nu_), dv(vd.length() / nv_) {}

  int node(int i, int j) const { return (j % NV) * NU + (i % NU); }
  double u(int i) const { return ud.min + i * du; }
  double v(int j) const { return vd.min + j * dv; }
  long h_edge(int i, int j) const { return 2L * ((j % NV) * static_cast<long>(NU) + i % NU); }
  long v_edge(int i, int j) const { return 2L * ((j % NV) * static_cast<long>(NU) + i % NU) + 1; }
};

struct Vertex {
  double u = 0.0, v = 0.0, g = 0.0;
  bool ok = false;
};

struct Refiner {
  const IsophoteField& field;
  double c;
  const ExtractOptions& opts;

  bool outside(double u, double v) const {
    const Surface& s = field.surface();
    const double su = 1e-9 * s.u_domain().length();
    const double sv = 1e-9 * s.v_domain().length();
    return !s.in_domain(u, v, std::max(su, sv));
  }

  Vertex operator()(double u, double v) const {
    const Surface& s = field.surface();
    Vertex out;
    for (int k = 0; k <= opts.max_newton; ++k) {
      if (outside(u, v)) return out;
      IsophoteField::Jet3<double> j;
      try {
        field.check_normal(s.wrap_u(u), s.wrap_v(v));
        j = field.evaluate_with_gradient(s.wrap_u(u), s.wrap_v(v));
      } catch (const Error&) {
        return out;
      }
      const double grad2 = j.g_u * j.g_u + j.g_v * j.g_v;
      if (!(std::sqrt(grad2) >= opts.tol.eps_grad)) return out;
      const double r = j.g - c;
      if (std::abs(r) <= opts.tol.refine_tol) {
        out = {s.wrap_u(u), s.wrap_v(v), j.g, true};
        return out;
      }
      u -= r * j.g_u / grad2;
      v -= r * j.g_v / grad2;
    }
    return out;
  }
};

}  // namespace

ExtractResult extract_isophotes(const IsophoteField& field, double c, const ExtractOptions& opts) {
  if (opts.nu < 2 || opts.nv < 2) throw Error(ErrorCode::InvalidArgument, "grid must be at least 2x2");
  if (!(opts.tol.refine_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "refine_tol must be positive");
  const Surface& surface = field.surface();
  const Grid grid(surface, opts.nu, opts.nv);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<double> g(static_cast<std::size_t>(grid.NU) * grid.NV, nan);
  parallel_for(grid.NV, opts.workers, [&](int j) {
    for (int i = 0; i < grid.NU; ++i) {
      try {
        g[static_cast<std::size_t>(grid.node(i, j))] = field.value(grid.u(i), grid.v(j));
      } catch (const Error&) {
        // lightlike or degenerate normal: the node stays NaN
      }
    }
  });
  auto G = [&](int i, int j) { return g[static_cast<std::size_t>(grid.node(i, j))]; };

  ExtractResult result;
  // Crossing edges and the linear estimate of each crossing.
  std::map<long, std::array<double, 2>> crossings;
  std::vector<std::pair<long, long>> segments;

  auto crossing = [&](long id, int ia, int ja, int ib, int jb) {
    const double ga = G(ia, ja), gb = G(ib, jb);
    const double t = (c - ga) / (gb - ga);
    crossings.try_emplace(id, std::array<double, 2>{grid.u(ia) + t * (grid.u(ib) - grid.u(ia)),
                                                    grid.v(ja) + t * (grid.v(jb) - grid.v(ja))});
  };

  for (int j = 0; j < grid.nv; ++j) {
    for (int i = 0; i < grid.nu; ++i) {
      const double g0 = G(i, j), g1 = G(i + 1, j), g2 = G(i + 1, j + 1), g3 = G(i, j + 1);
      if (std::isnan(g0) || std::isnan(g1) || std::isnan(g2) || std::isnan(g3)) {
        ++result.skipped_cells;
        continue;
      }
      const bool a0 = g0 >= c, a1 = g1 >= c, a2 = g2 >= c, a3 = g3 >= c;
      // Edges: bottom, right, top, left. Unwrapped corner indices keep the
      // interpolated coordinates continuous across periodic seams.
      const long e[4] = {grid.h_edge(i, j), grid.v_edge(i + 1, j), grid.h_edge(i, j + 1), grid.v_edge(i, j)};
      const bool x[4] = {a0 != a1, a1 != a2, a3 != a2, a0 != a3};
      if (x[0]) crossing(e[0], i, j, i + 1, j);
      if (x[1]) crossing(e[1], i + 1, j, i + 1, j + 1);
      if (x[2]) crossing(e[2], i, j + 1, i + 1, j + 1);
      if (x[3]) crossing(e[3], i, j, i, j + 1);
      const int count = x[0] + x[1] + x[2] + x[3];
      if (count == 2) {
        long ends[2];
        int k = 0;
        for (int q = 0; q < 4; ++q)
          if (x[q]) ends[k++] = e[q];
        segments.emplace_back(ends[0], ends[1]);
      } else if (count == 4) {
        const bool centre = 0.25 * (g0 + g1 + g2 + g3) >= c;
        // Corners 0 and 2 share a side: pair the edges that cut off 1 and 3
        // when the centre is on their side, else cut off 0 and 2.
        const bool cut_13 = a0 ? centre : !centre;
        if (cut_13) {
          segments.emplace_back(e[0], e[1]);
          segments.emplace_back(e[2], e[3]);
        } else {
          segments.emplace_back(e[3], e[0]);
          segments.emplace_back(e[1], e[2]);
        }
      }
    }
  }

  // Refine every crossing.
  std::vector<long> ids;
  ids.reserve(crossings.size());
  for (const auto& [id, p] : crossings) ids.push_back(id);
  std::vector<Vertex> verts(ids.size());
  const Refiner refine{field, c, opts};
  parallel_for(static_cast<int>(ids.size()), opts.workers, [&](int k) {
    const auto& p = crossings.at(ids[static_cast<std::size_t>(k)]);
    verts[static_cast<std::size_t>(k)] = refine(p[0], p[1]);
  });
  auto index_of = [&](long id) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  std::vector<std::array<std::size_t, 2>> adj(ids.size());
  std::vector<int> degree(ids.size(), 0);
  for (const auto& v : verts)
    if (!v.ok) ++result.dropped_vertices;
  for (const auto& [a, b] : segments) {
    const std::size_t ia = index_of(a), ib = index_of(b);
    if (!verts[ia].ok || !verts[ib].ok || degree[ia] == 2 || degree[ib] == 2) continue;
    adj[ia][static_cast<std::size_t>(degree[ia]++)] = ib;
    adj[ib][static_cast<std::size_t>(degree[ib]++)] = ia;
  }
  for (std::size_t k = 0; k < adj.size(); ++k)
    if (degree[k] == 2 && adj[k][1] < adj[k][0]) std::swap(adj[k][0], adj[k][1]);

  // Crossings at grid nodes that sit on the level set refine to the same
  // point from several edges; such repeats are merged.
  const double merge_tol = 1e-8 * std::min(grid.du, grid.dv);
  auto coincident = [&](const std::array<double, 2>& a, const std::array<double, 2>& b) {
    double du = a[0] - b[0], dv = a[1] - b[1];
    if (grid.ud.periodic) du = std::remainder(du, grid.ud.length());
    if (grid.vd.periodic) dv = std::remainder(dv, grid.vd.length());
    return std::abs(du) + std::abs(dv) <= merge_tol;
  };

  std::vector<bool> visited(ids.size(), false);
  auto walk = [&](std::size_t start, bool closed) {
    IsophoteCurve curve;
    curve.c = c;
    curve.closed = closed;
    std::size_t prev = ids.size(), cur = start;
    while (true) {
      visited[cur] = true;
      const std::array<double, 2> p{verts[cur].u, verts[cur].v};
      if (curve.uv.empty() || !coincident(curve.uv.back(), p)) {
        curve.uv.push_back(p);
        curve.g.push_back(verts[cur].g);
        curve.max_residual = std::max(curve.max_residual, std::abs(verts[cur].g - c));
      }
      std::size_t next = ids.size();
      for (int q = 0; q < degree[cur]; ++q) {
        const std::size_t n = adj[cur][static_cast<std::size_t>(q)];
        if (n != prev && !visited[n]) {
          next = n;
          break;
        }
      }
      if (next == ids.size()) break;
      prev = cur;
      cur = next;
    }
    if (closed && curve.uv.size() > 1 && coincident(curve.uv.front(), curve.uv.back())) {
      curve.uv.pop_back();
      curve.g.pop_back();
    }
    if (curve.uv.size() < 2) return;
    const auto& p0 = curve.uv.front();
    curve.kind = angle_invariant(surface_normal(surface, p0[0], p0[1], opts.tol.eps_causal).unit,
                                 field.axis(), opts.tol.eps_causal)
                     .kind;
    result.curves.push_back(std::move(curve));
  };
  for (std::size_t k = 0; k < ids.size(); ++k)
    if (!visited[k] && degree[k] == 1) walk(k, false);
  for (std::size_t k = 0; k < ids.size(); ++k)
    if (!visited[k] && degree[k] == 2) walk(k, true);
  return result;
}

namespace {

template <std::size_t N>
Taylor<N> antiderivative(const Taylor<N>& a, double c0) {
  Taylor<N> r(c0);
  for (std::size_t k = 0; k + 1 < N; ++k) r.c[k + 1] = a.c[k] / static_cast<double>(k + 1);
  return r;
}

std::vector<std::array<double, 2>> unwrap(const Surface& s, const std::vector<std::array<double, 2>>& uv) {
  std::vector<std::array<double, 2>> out(uv);
  const Interval* dom[2] = {&s.u_domain(), &s.v_domain()};
  for (std::size_t i = 1; i < out.size(); ++i)
    for (int k = 0; k < 2; ++k) {
      if (!dom[k]->periodic) continue;
      out[i][k] = out[i - 1][k] + std::remainder(uv[i][k] - uv[i - 1][k], dom[k]->length());
    }
  return out;
}

}  // namespace

CurveJet level_curve_jet(const IsophoteField& field, double u, double v, double orientation) {
  Jet U(u), V(v);
  for (std::size_t it = 0; it < Jet{}.c.size(); ++it) {
    const auto j = field.evaluate_with_gradient(U, V);
    const Jet norm = sqrt(j.g_u * j.g_u + j.g_v * j.g_v);
    U = antiderivative(Jet(-orientation) * j.g_v / norm, u);
    V = antiderivative(Jet(orientation) * j.g_u / norm, v);
  }
  CurveJet out;
  out.t = 0.0;
  out.position = field.surface().position(U, V);
  out.normal_raw = field.surface().normal_raw(U, V);
  return out;
}

std::vector<DarbouxSample> lift_polyline(const IsophoteField& field, const IsophoteCurve& curve,
                                         const Tolerances& tol) {
  const Surface& s = field.surface();
  const auto p = unwrap(s, curve.uv);
  const std::size_t n = p.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "polyline needs at least two vertices");
  // Contour flow directions, oriented to follow the polyline: the first by
  // the net chord over the leading vertices, the rest by continuity.
  std::vector<double> orientation(n, 1.0);
  std::vector<std::array<double, 2>> flow(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto grad = field.gradient(s.wrap_u(p[i][0]), s.wrap_v(p[i][1]));
    const double norm = std::hypot(grad.g_u, grad.g_v);
    flow[i] = {-grad.g_v / norm, grad.g_u / norm};
  }
  const std::size_t lead = std::min<std::size_t>(n - 1, 4);
  const double along = flow[0][0] * (p[lead][0] - p[0][0]) + flow[0][1] * (p[lead][1] - p[0][1]);
  orientation[0] = along < 0.0 ? -1.0 : 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double dot = flow[i][0] * flow[i - 1][0] + flow[i][1] * flow[i - 1][1];
    orientation[i] = dot < 0.0 ? -orientation[i - 1] : orientation[i - 1];
  }

  std::vector<DarbouxSample> out;
  out.reserve(n);
  double station = 0.0;
  MVec3 prev = s.position(p[0][0], p[0][1]);
  for (std::size_t i = 0; i < n; ++i) {
    const MVec3 here = s.position(p[i][0], p[i][1]);
    if (i > 0) station += mnorm(MVec3(here - prev));
    prev = here;
    CurveJet jet = level_curve_jet(field, p[i][0], p[i][1], orientation[i]);
    out.push_back(darboux_from_jet(jet, station, tol.eps_causal, tol.eps_curv));
  }
  require_constant_class(out);
  return out;
}

}  // namespace isophote
