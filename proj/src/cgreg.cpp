#include "faultflow/cgreg.hpp"

#include <cassert>
#include <cmath>

namespace faultflow {

namespace {

// cell velocity -p'/(1 + delta/tf) with delta averaged over the cell; the
// average keeps the ratio exact when p' = -u (1 + delta/tf) pointwise
double cell_velocity_1d(const Mesh& m, const Field& p, const RegDelta& delta,
                        double tf, int c) {
  const Cell& K = m.cells[c];
  const double a = m.verts[K.verts[0]].x, b = m.verts[K.verts[1]].x;
  const double g = (p.values[K.verts[1]] - p.values[K.verts[0]]) / (b - a);
  const double davg = (delta.heaviside(b) - delta.heaviside(a)) / (b - a);
  return -g / (1.0 + davg / tf);
}

}  // namespace

CsrMatrix assemble_cg_operator(const Mesh& m, const RegDelta* delta, double tf,
                               const BcValues& bc, std::vector<double>& rhs) {
  const int n = m.n_verts();
  Triplets t;
  assemble_p1_stiffness(m, t);
  if (delta) assemble_cg_fault_terms(m, *delta, tf, t);
  if (static_cast<int>(rhs.size()) != n) rhs.assign(n, 0.0);
  apply_strong_bc(t, rhs, dirichlet_vertex_values(m, bc));
  return CsrMatrix::from_triplets(n, n, t);
}

CgSolution solve_cg(const Mesh& m, const FaultGeometry& fault, double eps,
                    double eps_tau, const BcValues& bc, const GmresOptions& opt,
                    const ScalarFn& f) {
  RegDelta delta(fault, eps, eps_tau > 0.0 ? eps_tau : eps);
  std::vector<double> rhs(m.n_verts(), 0.0);
  assemble_p1_load(m, f, rhs);
  CsrMatrix A = assemble_cg_operator(m, &delta, fault.tf, bc, rhs);

  Ilu0 prec(A);
  std::vector<double> x;
  SolveReport rep = gmres(A, rhs, x, &prec, opt);

  CgSolution sol;
  sol.eps = eps;
  sol.tf = fault.tf;
  sol.report = rep;
  sol.p = make_field(SpaceKind::P1, m);
  sol.p.values = std::move(x);
  // essential values hold exactly, not just to solver tolerance
  for (const auto& [v, val] : dirichlet_vertex_values(m, bc)) sol.p.values[v] = val;

  if (m.dim == 2) {
    sol.u = project_gradient(m, sol.p);
  } else {
    sol.u = make_field(SpaceKind::P1Vec, m);
    const std::vector<double> un = recover_velocity_1d(m, sol.p, delta, fault.tf);
    for (int v = 0; v < m.n_verts(); ++v) sol.u.values[2 * v] = un[v];
  }
  return sol;
}

std::vector<double> recover_velocity_1d(const Mesh& m, const Field& p,
                                        const RegDelta& delta, double tf) {
  assert(m.dim == 1 && p.kind == SpaceKind::P1);
  std::vector<double> acc(m.n_verts(), 0.0), lump(m.n_verts(), 0.0);
  for (int c = 0; c < m.n_cells(); ++c) {
    const Cell& K = m.cells[c];
    const double h = m.cell_measure(c);
    const double uc = cell_velocity_1d(m, p, delta, tf, c);
    for (int i = 0; i < 2; ++i) {
      acc[K.verts[i]] += uc * (h / 2.0);
      lump[K.verts[i]] += h / 2.0;
    }
  }
  std::vector<double> u(m.n_verts());
  for (int v = 0; v < m.n_verts(); ++v) u[v] = acc[v] / lump[v];
  return u;
}

std::vector<FaultSample> fault_normal_velocity(const Mesh& m, const CgSolution& sol,
                                               const RegDelta& delta) {
  std::vector<FaultSample> out;
  out.reserve(m.fault_facets.size());
  for (int F : m.fault_facets) {
    const Facet& ft = m.facets[F];
    const Vec2 mp = m.facet_midpoint(F);
    if (m.dim == 1) {
      // same cell values and lumped weights as recover_velocity_1d, so the
      // sample equals the nodal recovery at the fault vertex
      double acc = 0.0, lump = 0.0;
      for (int s = 0; s < 2; ++s) {
        const int c = ft.cells[s];
        if (c < 0) continue;
        const double h = m.cell_measure(c);
        acc += cell_velocity_1d(m, sol.p, delta, sol.tf, c) * (h / 2.0);
        lump += h / 2.0;
      }
      out.push_back({mp, acc / lump});
      continue;
    }
    double dpdn = 0.0;
    int nc = 0;
    for (int s = 0; s < 2; ++s) {
      const int c = ft.cells[s];
      if (c < 0) continue;
      const Cell& K = m.cells[c];
      // x-gradient of the P1 pressure on this cell
      const Vec2 a = m.verts[K.verts[0]], b = m.verts[K.verts[1]], d = m.verts[K.verts[2]];
      const double A2 = (b.x - a.x) * (d.y - a.y) - (b.y - a.y) * (d.x - a.x);
      const double gx = (sol.p.values[K.verts[0]] * (b.y - d.y) +
                         sol.p.values[K.verts[1]] * (d.y - a.y) +
                         sol.p.values[K.verts[2]] * (a.y - b.y)) /
                        A2;
      dpdn += gx;
      ++nc;
    }
    dpdn /= nc;
    const double dv = delta.delta(mp);
    out.push_back({mp, -sol.tf / (sol.tf + dv) * dpdn});
  }
  return out;
}

}  // namespace faultflow
