#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "faultflow/fields.hpp"
#include "faultflow/mesh.hpp"
#include "faultflow/regdelta.hpp"
#include "faultflow/sparse.hpp"

namespace faultflow {

using ScalarFn = std::function<double(Vec2)>;

// Dirichlet boundary values keyed by facet bc_id (2D: id 1 at x=0, id 0 at
// x=Lx; same ids at the 1D endpoints).
struct BcValues {
  double p_in = 1.0;   // id 1
  double p_out = 0.0;  // id 0
  double value(int bc_id) const { return bc_id == 1 ? p_in : p_out; }
};

// Symmetric strong elimination: constrained rows/columns are removed, the
// diagonal set to 1 and the rhs carries the pinned values.
void apply_strong_bc(Triplets& t, std::vector<double>& rhs,
                     const std::vector<std::pair<int, double>>& pinned);

void assemble_p1_stiffness(const Mesh& m, Triplets& t);

// Fault terms of the regularized operator:
//   (G_eps dp/dn, w) - (dD_eps/dtau dp/dtau, w) - (D_eps dp/dtau, dw/dtau)
// Quadrature degree 6 on cells within 8*eps of the fault plane, 2 elsewhere.
void assemble_cg_fault_terms(const Mesh& m, const RegDelta& delta, double tf,
                             Triplets& t);

void assemble_p1_load(const Mesh& m, const ScalarFn& f, std::vector<double>& rhs);

// vertices on Dirichlet-tagged boundary facets with their values
std::vector<std::pair<int, double>> dirichlet_vertex_values(const Mesh& m,
                                                            const BcValues& bc);

struct MixedBc {
  std::unordered_map<int, double> dirichlet_mean;  // facet -> mean trace of p
  std::unordered_map<int, double> pinned_flux;     // facet -> essential flux dof
};

struct MixedSystem {
  CsrMatrix A;
  std::vector<double> rhs;
  int n_u = 0, n_p = 0;
};

// Saddle system [[A, -B^T], [B, 0]] of the mixed form: A = RT0 mass plus the
// 1/tf fault coupling, B the divergence. Dirichlet pressure enters weakly
// through the boundary functional, pinned fluxes are eliminated strongly.
MixedSystem assemble_mixed_system(const Mesh& m, double tf, const ScalarFn& f,
                                  const MixedBc& bc);

// Lumped-mass L2 projection of -grad(p) onto P1 vectors.
Field project_gradient(const Mesh& m, const Field& p1);

}  // namespace faultflow
