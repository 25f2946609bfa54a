#pragma once

#include <array>
#include <vector>

#include "faultflow/fault.hpp"

namespace faultflow {

enum class FacetTag {
  interior,
  fault,
  dirichlet,
  neumann,
  // submesh-only: coupling boundary parts of the correction problem
  sub_flux,
  sub_dirichlet,
};

struct Facet {
  std::array<int, 2> verts{-1, -1};  // 1D: verts[1] = -1 (a facet is a vertex)
  std::array<int, 2> cells{-1, -1};  // boundary: cells[1] = -1
  FacetTag tag = FacetTag::interior;
  int bc_id = -1;       // dirichlet value id (2D: 1 at x=0, 0 at x=Lx)
  double measure = 0.0;  // edge length; 1.0 for point facets
  Vec2 normal{0.0, 0.0};
};

struct Cell {
  std::array<int, 3> verts{-1, -1, -1};   // 1D: verts[2] = -1
  std::array<int, 3> facets{-1, -1, -1};  // local facet i opposite vertex i
  bool in_subdomain = false;
};

struct Mesh {
  int dim = 2;
  std::vector<Vec2> verts;
  std::vector<Cell> cells;
  std::vector<Facet> facets;
  std::vector<int> fault_facets;

  // generation metadata
  double Lx = 0.0, Ly = 0.0;
  double h = 0.0, h_f = 0.0, L_s = 0.0;
  FaultGeometry fault;
  // subdomain bounding rectangle (2D with L_s > 0)
  double sub_x0 = 0.0, sub_x1 = 0.0, sub_y0 = 0.0, sub_y1 = 0.0;

  int n_verts() const { return static_cast<int>(verts.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_facets() const { return static_cast<int>(facets.size()); }

  double cell_measure(int c) const;
  Vec2 centroid(int c) const;
  double cell_diameter(int c) const;
  // +1 if the global facet normal points out of cell c
  int facet_sign(int f, int c) const { return facets[f].cells[0] == c ? 1 : -1; }
  Vec2 facet_midpoint(int f) const;
};

// Uniform interval mesh on [0, L]; the vertex nearest xg is snapped onto the
// fault exactly. Facets are vertices; endpoints are tagged dirichlet (id 1 at
// x=0, id 0 at x=L).
Mesh generate_interval_mesh(double L, double xg, int n_cells);

struct RectMeshSpec {
  double Lx = 2.0, Ly = 1.0;
  FaultGeometry fault;  // tf is ignored here
  double h = 0.1;       // far-field target spacing
  double h_f = 0.04;    // spacing inside the subdomain band
  double L_s = 0.2;     // halo half-width around the fault
};

// Graded tensor-product triangulation of [0,Lx]x[0,Ly]. Grid lines land
// exactly on the fault plane, the fault endpoints and the subdomain
// rectangle; spacing is ~h_f inside the band and grows geometrically
// (ratio <= 1.3) to ~h outside. Each quad is split along the diagonal
// pointing away from the fault midpoint.
Mesh generate_rect_mesh(const RectMeshSpec& spec);

struct SubMesh {
  Mesh mesh;
  std::vector<int> parent_cell;          // per sub cell
  std::vector<int> parent_vert;          // per sub vertex
  std::vector<int> parent_facet;         // per sub facet
  std::vector<int> sub_cell_of_parent;   // per parent cell, -1 outside
};

// Restriction to the tagged subdomain cells. Boundary facets on the two
// planes parallel to the fault become sub_flux, the rest sub_dirichlet.
// 2D only.
SubMesh extract_subdomain(const Mesh& parent);

class PointLocator {
 public:
  explicit PointLocator(const Mesh& mesh);
  // Cell containing p (barycentric tolerance ~1e-10); -1 if outside.
  int locate(Vec2 p, std::array<double, 3>* bary = nullptr) const;

 private:
  const Mesh* mesh_;
  int nbx_ = 0, nby_ = 0;
  double x0_ = 0, y0_ = 0, bw_ = 1, bh_ = 1;
  std::vector<std::vector<int>> bins_;
  std::vector<double> coords_1d_;  // sorted vertex coordinates (1D)

  bool test_cell(int c, Vec2 p, std::array<double, 3>* bary) const;
};

}  // namespace faultflow
