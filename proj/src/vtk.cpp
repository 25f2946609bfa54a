#include "faultflow/vtk.hpp"

#include <cstdio>
#include <stdexcept>

namespace faultflow {

namespace {

struct VtkFile {
  std::FILE* f;
  explicit VtkFile(const std::string& path, const char* title) {
    f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "# vtk DataFile Version 2.0\n%s\nASCII\nDATASET UNSTRUCTURED_GRID\n", title);
  }
  ~VtkFile() { std::fclose(f); }
};

void write_points(std::FILE* f, const Mesh& m) {
  std::fprintf(f, "POINTS %d double\n", m.n_verts());
  for (const Vec2& v : m.verts) std::fprintf(f, "%.12g %.12g 0\n", v.x, v.y);
}

void write_cells_only(std::FILE* f, const Mesh& m) {
  const int nv = m.dim + 1;
  std::fprintf(f, "CELLS %d %d\n", m.n_cells(), m.n_cells() * (nv + 1));
  for (const Cell& c : m.cells) {
    if (m.dim == 1)
      std::fprintf(f, "2 %d %d\n", c.verts[0], c.verts[1]);
    else
      std::fprintf(f, "3 %d %d %d\n", c.verts[0], c.verts[1], c.verts[2]);
  }
  std::fprintf(f, "CELL_TYPES %d\n", m.n_cells());
  for (int c = 0; c < m.n_cells(); ++c) std::fprintf(f, "%d\n", m.dim == 1 ? 3 : 5);
}

int facet_code(const Facet& F) {
  switch (F.tag) {
    case FacetTag::fault:
      return 2;
    case FacetTag::dirichlet:
      return F.bc_id == 1 ? 4 : 3;
    case FacetTag::neumann:
      return 5;
    case FacetTag::sub_flux:
      return 6;
    case FacetTag::sub_dirichlet:
      return 7;
    default:
      return -1;
  }
}

}  // namespace

void write_mesh_vtk(const std::string& path, const Mesh& m) {
  VtkFile out(path, "mesh");
  std::FILE* f = out.f;
  write_points(f, m);

  std::vector<int> tagged;
  for (int i = 0; i < m.n_facets(); ++i)
    if (facet_code(m.facets[i]) >= 0) tagged.push_back(i);

  const int ncell = m.n_cells(), nfac = static_cast<int>(tagged.size());
  const int cell_ints = m.dim == 1 ? 3 : 4, fac_ints = m.dim == 1 ? 2 : 3;
  std::fprintf(f, "CELLS %d %d\n", ncell + nfac, ncell * cell_ints + nfac * fac_ints);
  for (const Cell& c : m.cells) {
    if (m.dim == 1)
      std::fprintf(f, "2 %d %d\n", c.verts[0], c.verts[1]);
    else
      std::fprintf(f, "3 %d %d %d\n", c.verts[0], c.verts[1], c.verts[2]);
  }
  for (int i : tagged) {
    const Facet& F = m.facets[i];
    if (m.dim == 1)
      std::fprintf(f, "1 %d\n", F.verts[0]);
    else
      std::fprintf(f, "2 %d %d\n", F.verts[0], F.verts[1]);
  }
  std::fprintf(f, "CELL_TYPES %d\n", ncell + nfac);
  for (int c = 0; c < ncell; ++c) std::fprintf(f, "%d\n", m.dim == 1 ? 3 : 5);
  for (int i = 0; i < nfac; ++i) std::fprintf(f, "%d\n", m.dim == 1 ? 1 : 3);

  std::fprintf(f, "CELL_DATA %d\nSCALARS tag int 1\nLOOKUP_TABLE default\n", ncell + nfac);
  for (const Cell& c : m.cells) std::fprintf(f, "%d\n", c.in_subdomain ? 1 : 0);
  for (int i : tagged) std::fprintf(f, "%d\n", facet_code(m.facets[i]));
}

void write_cell_scalar_vtk(const std::string& path, const Mesh& m,
                           const std::string& name, const std::vector<double>& v) {
  VtkFile out(path, name.c_str());
  write_points(out.f, m);
  write_cells_only(out.f, m);
  std::fprintf(out.f, "CELL_DATA %d\nSCALARS %s double 1\nLOOKUP_TABLE default\n",
               m.n_cells(), name.c_str());
  for (double x : v) std::fprintf(out.f, "%.12g\n", x);
}

void write_cell_vector_vtk(const std::string& path, const Mesh& m,
                           const std::string& name, const std::vector<Vec2>& v) {
  VtkFile out(path, name.c_str());
  write_points(out.f, m);
  write_cells_only(out.f, m);
  std::fprintf(out.f, "CELL_DATA %d\nVECTORS %s double\n", m.n_cells(), name.c_str());
  for (const Vec2& x : v) std::fprintf(out.f, "%.12g %.12g 0\n", x.x, x.y);
}

void write_point_scalar_vtk(const std::string& path, const Mesh& m,
                            const std::string& name, const std::vector<double>& v) {
  VtkFile out(path, name.c_str());
  write_points(out.f, m);
  write_cells_only(out.f, m);
  std::fprintf(out.f, "POINT_DATA %d\nSCALARS %s double 1\nLOOKUP_TABLE default\n",
               m.n_verts(), name.c_str());
  for (double x : v) std::fprintf(out.f, "%.12g\n", x);
}

void write_point_vector_vtk(const std::string& path, const Mesh& m,
                            const std::string& name, const std::vector<double>& v) {
  VtkFile out(path, name.c_str());
  write_points(out.f, m);
  write_cells_only(out.f, m);
  std::fprintf(out.f, "POINT_DATA %d\nVECTORS %s double\n", m.n_verts(), name.c_str());
  for (int i = 0; i < m.n_verts(); ++i)
    std::fprintf(out.f, "%.12g %.12g 0\n", v[2 * i], v[2 * i + 1]);
}

}  // namespace faultflow
