#pragma once

#include "faultflow/assemble.hpp"
#include "faultflow/solver.hpp"

namespace faultflow {

struct CgSolution {
  Field p;  // P1
  Field u;  // P1Vec: 2D is -grad(p) projected; 1D applies the fault scaling
  double eps = 0.0, tf = 1.0;
  SolveReport report;
};

// Regularized continuous-Galerkin method: Laplacian plus the delta-induced
// fault terms, strong Dirichlet at inflow/outflow, natural no-flow elsewhere.
// Pass eps_tau < 0 to default it to eps.
CgSolution solve_cg(const Mesh& m, const FaultGeometry& fault, double eps,
                    double eps_tau, const BcValues& bc,
                    const GmresOptions& opt = {}, const ScalarFn& f = {});

// Assembled operator only (tests / spectrum studies); delta may be null,
// which leaves the plain stiffness matrix.
CsrMatrix assemble_cg_operator(const Mesh& m, const RegDelta* delta, double tf,
                               const BcValues& bc, std::vector<double>& rhs);

// 1D nodal velocity: cell-average gradient scaled by -(1 + delta/tf)^{-1}
std::vector<double> recover_velocity_1d(const Mesh& m, const Field& p,
                                        const RegDelta& delta, double tf);

struct FaultSample {
  Vec2 point;
  double un;
};
// Normal velocity on the fault: -tf/(tf + delta) * dp/dn, cell-averaged per
// fault facet, sampled at facet midpoints.
std::vector<FaultSample> fault_normal_velocity(const Mesh& m, const CgSolution& sol,
                                               const RegDelta& delta);

}  // namespace faultflow
