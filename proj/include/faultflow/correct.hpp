#pragma once

#include <memory>

#include "faultflow/cgreg.hpp"
#include "faultflow/mixed.hpp"

namespace faultflow {

// Regularized CG solve plus the conservative mixed re-solve on the fault
// halo: traces of the global solution drive the local problem (normal flux
// pinned on the two planes parallel to the fault, Dirichlet pressure
// elsewhere); fields are stitched piecewise, no blending.
struct CompositeSolution {
  std::shared_ptr<const Mesh> parent;  // keeps Field::mesh stable
  CgSolution global;
  std::shared_ptr<SubMesh> sub;
  Field sub_p;  // P0 on sub->mesh
  Field sub_u;  // RT0 on sub->mesh
  SolveReport sub_report;
  double eps = 0.0, tf = 1.0;
};

// The parent mesh is shared to guarantee pointer stability of the fields.
CompositeSolution solve_corrected(std::shared_ptr<const Mesh> parent,
                                  const FaultGeometry& fault, double eps,
                                  double eps_tau, const BcValues& bc,
                                  const GmresOptions& opt = {});

// Boundary data of the correction problem, exposed for testing.
MixedBc subdomain_bc(const Mesh& parent, const SubMesh& sub, const CgSolution& global);

}  // namespace faultflow
