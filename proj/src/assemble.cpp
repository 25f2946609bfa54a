#include "faultflow/assemble.hpp"

#include <cassert>
#include <cmath>

#include "faultflow/quadrature.hpp"

namespace faultflow {

namespace {

// gradients of the P1 basis; returns measure
double p1_gradients(const Mesh& m, int c, Vec2 grad[3]) {
  const Cell& K = m.cells[c];
  if (m.dim == 1) {
    const double h = m.cell_measure(c);
    grad[0] = {-1.0 / h, 0.0};
    grad[1] = {1.0 / h, 0.0};
    grad[2] = {0.0, 0.0};
    return h;
  }
  const Vec2 p0 = m.verts[K.verts[0]], p1 = m.verts[K.verts[1]], p2 = m.verts[K.verts[2]];
  const double A2 = (p1.x - p0.x) * (p2.y - p0.y) - (p1.y - p0.y) * (p2.x - p0.x);
  const Vec2 e0 = p2 - p1, e1 = p0 - p2, e2 = p1 - p0;
  grad[0] = {-e0.y / A2, e0.x / A2};
  grad[1] = {-e1.y / A2, e1.x / A2};
  grad[2] = {-e2.y / A2, e2.x / A2};
  return 0.5 * A2;
}

Vec2 map_point(const Mesh& m, int c, double l0, double l1, double l2) {
  const Cell& K = m.cells[c];
  if (m.dim == 1) {
    const Vec2 a = m.verts[K.verts[0]], b = m.verts[K.verts[1]];
    return {l0 * a.x + l1 * b.x, 0.0};
  }
  const Vec2 a = m.verts[K.verts[0]], b = m.verts[K.verts[1]], d = m.verts[K.verts[2]];
  return {l0 * a.x + l1 * b.x + l2 * d.x, l0 * a.y + l1 * b.y + l2 * d.y};
}

// distance from the cell's x-extent to the fault plane
double band_distance(const Mesh& m, int c, double xg) {
  double x0 = 1e300, x1 = -1e300;
  for (int i = 0; i <= m.dim; ++i) {
    const double x = m.verts[m.cells[c].verts[i]].x;
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
  }
  return std::max(0.0, std::max(x0 - xg, xg - x1));
}

}  // namespace

void apply_strong_bc(Triplets& t, std::vector<double>& rhs,
                     const std::vector<std::pair<int, double>>& pinned) {
  const int n = static_cast<int>(rhs.size());
  std::vector<char> is_bc(n, 0);
  std::vector<double> val(n, 0.0);
  for (const auto& [d, v] : pinned) {
    assert(d >= 0 && d < n);
    is_bc[d] = 1;
    val[d] = v;
  }
  Triplets out;
  out.rows.reserve(t.size());
  out.cols.reserve(t.size());
  out.vals.reserve(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const int i = t.rows[k], j = t.cols[k];
    if (is_bc[i]) continue;
    if (is_bc[j]) {
      rhs[i] -= t.vals[k] * val[j];
      continue;
    }
    out.add(i, j, t.vals[k]);
  }
  for (int d = 0; d < n; ++d)
    if (is_bc[d]) {
      out.add(d, d, 1.0);
      rhs[d] = val[d];
    }
  t = std::move(out);
}

void assemble_p1_stiffness(const Mesh& m, Triplets& t) {
  Vec2 grad[3];
  for (int c = 0; c < m.n_cells(); ++c) {
    const double meas = p1_gradients(m, c, grad);
    const Cell& K = m.cells[c];
    for (int i = 0; i <= m.dim; ++i)
      for (int j = 0; j <= m.dim; ++j)
        t.add(K.verts[i], K.verts[j], meas * dot(grad[i], grad[j]));
  }
}

void assemble_cg_fault_terms(const Mesh& m, const RegDelta& delta, double tf,
                             Triplets& t) {
  const double xg = delta.geometry().xg;
  const double band = 8.0 * delta.eps();
  Vec2 grad[3];
  const int nloc = m.dim + 1;

  for (int c = 0; c < m.n_cells(); ++c) {
    const double meas = p1_gradients(m, c, grad);
    const Cell& K = m.cells[c];
    const int deg = band_distance(m, c, xg) <= band ? 6 : 2;
    double E[3][3] = {};

    auto accumulate = [&](Vec2 xq, double wq, const double lam[3]) {
      const double Gq = delta.g_eps(xq, tf);
      if (m.dim == 1) {
        for (int i = 0; i < nloc; ++i)
          for (int j = 0; j < nloc; ++j) E[i][j] += wq * Gq * grad[j].x * lam[i];
        return;
      }
      const double Dq = delta.d_eps(xq, tf);
      const double dDq = delta.dd_eps_dtau(xq, tf);
      for (int i = 0; i < nloc; ++i)
        for (int j = 0; j < nloc; ++j)
          E[i][j] += wq * (Gq * grad[j].x * lam[i] - dDq * grad[j].y * lam[i] -
                           Dq * grad[j].y * grad[i].y);
    };

    if (m.dim == 1) {
      for (const auto& q : line_rule(deg)) {
        const double lam[3] = {1.0 - q.t, q.t, 0.0};
        accumulate(map_point(m, c, lam[0], lam[1], 0.0), q.w * meas, lam);
      }
    } else {
      for (const auto& q : tri_rule(deg)) {
        const double lam[3] = {q.l0, q.l1, q.l2};
        accumulate(map_point(m, c, q.l0, q.l1, q.l2), q.w * meas, lam);
      }
    }
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j)
        if (E[i][j] != 0.0) t.add(K.verts[i], K.verts[j], E[i][j]);
  }
}

void assemble_p1_load(const Mesh& m, const ScalarFn& f, std::vector<double>& rhs) {
  if (!f) return;
  for (int c = 0; c < m.n_cells(); ++c) {
    const double meas = m.cell_measure(c);
    const Cell& K = m.cells[c];
    if (m.dim == 1) {
      for (const auto& q : line_rule(2)) {
        const double fv = f(map_point(m, c, 1.0 - q.t, q.t, 0.0)) * q.w * meas;
        rhs[K.verts[0]] += fv * (1.0 - q.t);
        rhs[K.verts[1]] += fv * q.t;
      }
    } else {
      for (const auto& q : tri_rule(2)) {
        const double fv = f(map_point(m, c, q.l0, q.l1, q.l2)) * q.w * meas;
        rhs[K.verts[0]] += fv * q.l0;
        rhs[K.verts[1]] += fv * q.l1;
        rhs[K.verts[2]] += fv * q.l2;
      }
    }
  }
}

std::vector<std::pair<int, double>> dirichlet_vertex_values(const Mesh& m,
                                                            const BcValues& bc) {
  std::vector<std::pair<int, double>> out;
  std::vector<char> seen(m.n_verts(), 0);
  for (const Facet& F : m.facets) {
    if (F.tag != FacetTag::dirichlet) continue;
    for (int k = 0; k < 2; ++k) {
      const int v = F.verts[k];
      if (v < 0 || seen[v]) continue;
      seen[v] = 1;
      out.emplace_back(v, bc.value(F.bc_id));
    }
  }
  return out;
}

MixedSystem assemble_mixed_system(const Mesh& m, double tf, const ScalarFn& f,
                                  const MixedBc& bc) {
  if (!(tf > 0.0)) throw std::invalid_argument("mixed system: tf must be positive");
  const int nf = m.n_facets(), nc = m.n_cells();
  const int N = nf + nc;
  Triplets t;
  std::vector<double> rhs(N, 0.0);

  // RT0 mass (kappa = I)
  const int nloc = m.dim + 1;
  for (int c = 0; c < nc; ++c) {
    const Cell& K = m.cells[c];
    const double meas = m.cell_measure(c);
    double M[3][3] = {};
    auto add_qp = [&](Vec2 xq, double wq) {
      Vec2 phi[3];
      for (int i = 0; i < nloc; ++i) {
        const int fid = K.facets[i];
        const double coef = m.facet_sign(fid, c) / (m.dim * meas);
        const Vec2 pi = m.verts[K.verts[i]];
        phi[i] = {coef * (xq.x - pi.x), m.dim == 2 ? coef * (xq.y - pi.y) : 0.0};
      }
      for (int i = 0; i < nloc; ++i)
        for (int j = 0; j < nloc; ++j) M[i][j] += wq * dot(phi[i], phi[j]);
    };
    if (m.dim == 1) {
      for (const auto& q : line_rule(2)) add_qp(map_point(m, c, 1.0 - q.t, q.t, 0.0), q.w * meas);
    } else {
      for (const auto& q : tri_rule(2)) add_qp(map_point(m, c, q.l0, q.l1, q.l2), q.w * meas);
    }
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j) t.add(K.facets[i], K.facets[j], M[i][j]);

    // divergence coupling: B[c, F] = sign, -B^T above
    for (int i = 0; i < nloc; ++i) {
      const int fid = K.facets[i];
      const double s = m.facet_sign(fid, c);
      t.add(nf + c, fid, s);
      t.add(fid, nf + c, -s);
    }
  }

  // fault transmissibility: tf^{-1} (u.n, v.n)_gamma, diagonal in flux dofs
  for (int F : m.fault_facets) t.add(F, F, 1.0 / (tf * m.facets[F].measure));

  // pattern-only cell-cell couplings out to second neighbours: the zero block
  // stays zero, but ILU(0) can then fill a Schur-like p-block instead of bare
  // pivots, which roughly halves the Krylov iteration count
  {
    std::vector<std::vector<int>> adj(nc);
    for (int F = 0; F < nf; ++F) {
      const Facet& ft = m.facets[F];
      if (ft.cells[1] < 0) continue;
      adj[ft.cells[0]].push_back(ft.cells[1]);
      adj[ft.cells[1]].push_back(ft.cells[0]);
    }
    for (int c = 0; c < nc; ++c)
      for (int a : adj[c]) {
        t.add(nf + c, nf + a, 0.0);
        for (int b : adj[a])
          if (b != c) t.add(nf + c, nf + b, 0.0);
      }
  }

  // weak Dirichlet: a(u,v) - b(p,v) = -G(v)
  for (const auto& [F, pd] : bc.dirichlet_mean) rhs[F] -= pd;

  if (f) {
    for (int c = 0; c < nc; ++c) {
      const double meas = m.cell_measure(c);
      double s = 0.0;
      if (m.dim == 1) {
        for (const auto& q : line_rule(2)) s += q.w * f(map_point(m, c, 1.0 - q.t, q.t, 0.0));
      } else {
        for (const auto& q : tri_rule(2)) s += q.w * f(map_point(m, c, q.l0, q.l1, q.l2));
      }
      rhs[nf + c] = s * meas;
    }
  }

  std::vector<std::pair<int, double>> pinned;
  pinned.reserve(bc.pinned_flux.size());
  for (const auto& [F, v] : bc.pinned_flux) pinned.emplace_back(F, v);
  apply_strong_bc(t, rhs, pinned);

  MixedSystem sys;
  sys.n_u = nf;
  sys.n_p = nc;
  sys.A = CsrMatrix::from_triplets(N, N, t, /*force_diagonal=*/true);
  sys.rhs = std::move(rhs);
  return sys;
}

Field project_gradient(const Mesh& m, const Field& p1) {
  assert(p1.kind == SpaceKind::P1);
  Field u = make_field(SpaceKind::P1Vec, m);
  std::vector<double> lump(m.n_verts(), 0.0);
  Vec2 grad[3];
  for (int c = 0; c < m.n_cells(); ++c) {
    const double meas = p1_gradients(m, c, grad);
    const Cell& K = m.cells[c];
    Vec2 g{0.0, 0.0};
    for (int i = 0; i <= m.dim; ++i) {
      g.x += p1.values[K.verts[i]] * grad[i].x;
      g.y += p1.values[K.verts[i]] * grad[i].y;
    }
    const double w = meas / (m.dim + 1);
    for (int i = 0; i <= m.dim; ++i) {
      const int v = K.verts[i];
      u.values[2 * v] -= w * g.x;
      u.values[2 * v + 1] -= w * g.y;
      lump[v] += w;
    }
  }
  for (int v = 0; v < m.n_verts(); ++v) {
    u.values[2 * v] /= lump[v];
    u.values[2 * v + 1] /= lump[v];
  }
  return u;
}

}  // namespace faultflow
