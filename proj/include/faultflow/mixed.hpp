#pragma once

#include "faultflow/assemble.hpp"
#include "faultflow/solver.hpp"

namespace faultflow {

struct MixedSolution {
  Field p;  // P0
  Field u;  // RT0
  double tf = 1.0;
  SolveReport report;
};

// Mixed RT0xP0 discretization of Darcy flow with the fault coupling;
// GMRES+ILU(0) on the saddle system. x0, when given, must hold a full
// coefficient vector (fluxes then cell pressures) used as the initial guess.
MixedSolution solve_mixed(const Mesh& m, double tf, const BcValues& bc,
                          const GmresOptions& opt = {}, const ScalarFn& f = {},
                          const std::vector<double>* x0 = nullptr);

struct FaultFacetDiag {
  int facet;
  Vec2 midpoint;
  double un;      // normal velocity across the facet
  double jump;    // pressure jump [p] = p(minus-normal side) - p(plus side)
  double defect;  // un - tf*jump
};
std::vector<FaultFacetDiag> fault_diagnostics(const Mesh& m, const MixedSolution& sol);

// per-cell mass defect: integral of div u - f over the cell
std::vector<double> conservation_defect(const Mesh& m, const MixedSolution& sol,
                                        const ScalarFn& f = {});

}  // namespace faultflow
