#pragma once

#include <string>
#include <vector>

#include "faultflow/fields.hpp"

namespace faultflow {

// Legacy-VTK 2.0 ASCII writers (UNSTRUCTURED_GRID).

// Cells plus boundary/fault facets, tagged: triangle cells carry 0/1
// (subdomain flag), facet cells 2=fault, 3=outflow, 4=inflow, 5=neumann,
// 6=sub_flux, 7=sub_dirichlet.
void write_mesh_vtk(const std::string& path, const Mesh& m);

void write_cell_scalar_vtk(const std::string& path, const Mesh& m,
                           const std::string& name, const std::vector<double>& v);
void write_cell_vector_vtk(const std::string& path, const Mesh& m,
                           const std::string& name, const std::vector<Vec2>& v);
void write_point_scalar_vtk(const std::string& path, const Mesh& m,
                            const std::string& name, const std::vector<double>& v);
// interleaved (ux, uy) per vertex
void write_point_vector_vtk(const std::string& path, const Mesh& m,
                            const std::string& name, const std::vector<double>& v);

}  // namespace faultflow
