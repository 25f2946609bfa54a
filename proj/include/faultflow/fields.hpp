#pragma once

#include <vector>

#include "faultflow/mesh.hpp"

namespace faultflow {

enum class SpaceKind { P0, P1, RT0, P1Vec };

int space_ndof(SpaceKind kind, const Mesh& mesh);

// Discrete field: values indexed by cell (P0), vertex (P1), facet (RT0 flux
// dofs against the global facet normal) or vertex*2 interleaved (P1Vec).
struct Field {
  SpaceKind kind = SpaceKind::P0;
  const Mesh* mesh = nullptr;
  std::vector<double> values;
};

Field make_field(SpaceKind kind, const Mesh& mesh);

// Pointwise evaluation inside a known cell (1D points carry y = 0).
double eval_scalar(const Field& f, int cell, Vec2 p);
Vec2 eval_vector(const Field& f, int cell, Vec2 p);

// Cellwise-constant divergence of an RT0 field.
double rt0_divergence(const Field& f, int cell);

}  // namespace faultflow
