#include "faultflow/fields.hpp"

#include <cassert>
#include <stdexcept>

namespace faultflow {

int space_ndof(SpaceKind kind, const Mesh& mesh) {
  switch (kind) {
    case SpaceKind::P0:
      return mesh.n_cells();
    case SpaceKind::P1:
      return mesh.n_verts();
    case SpaceKind::RT0:
      return mesh.n_facets();
    case SpaceKind::P1Vec:
      return 2 * mesh.n_verts();
  }
  return 0;
}

Field make_field(SpaceKind kind, const Mesh& mesh) {
  Field f;
  f.kind = kind;
  f.mesh = &mesh;
  f.values.assign(space_ndof(kind, mesh), 0.0);
  return f;
}

namespace {

// barycentric coordinates of p in cell c (1D: l2 unused)
void barycentric(const Mesh& m, int c, Vec2 p, double l[3]) {
  const Cell& K = m.cells[c];
  if (m.dim == 1) {
    const double xa = m.verts[K.verts[0]].x, xb = m.verts[K.verts[1]].x;
    l[1] = (p.x - xa) / (xb - xa);
    l[0] = 1.0 - l[1];
    l[2] = 0.0;
    return;
  }
  const Vec2 a = m.verts[K.verts[0]], b = m.verts[K.verts[1]], d = m.verts[K.verts[2]];
  const double A2 = (b.x - a.x) * (d.y - a.y) - (b.y - a.y) * (d.x - a.x);
  l[1] = ((p.x - a.x) * (d.y - a.y) - (p.y - a.y) * (d.x - a.x)) / A2;
  l[2] = ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)) / A2;
  l[0] = 1.0 - l[1] - l[2];
}

}  // namespace

double eval_scalar(const Field& f, int cell, Vec2 p) {
  const Mesh& m = *f.mesh;
  if (f.kind == SpaceKind::P0) return f.values[cell];
  if (f.kind == SpaceKind::P1) {
    double l[3];
    barycentric(m, cell, p, l);
    const Cell& K = m.cells[cell];
    double v = 0.0;
    for (int i = 0; i <= m.dim; ++i) v += l[i] * f.values[K.verts[i]];
    return v;
  }
  throw std::invalid_argument("eval_scalar: field is not scalar-valued");
}

Vec2 eval_vector(const Field& f, int cell, Vec2 p) {
  const Mesh& m = *f.mesh;
  const Cell& K = m.cells[cell];
  if (f.kind == SpaceKind::RT0) {
    // phi_i = sign_i (x - p_i) / (dim * |T|), p_i the vertex opposite facet i
    const double meas = m.cell_measure(cell);
    Vec2 u{0.0, 0.0};
    for (int i = 0; i <= m.dim; ++i) {
      const int fid = K.facets[i];
      const double coef =
          f.values[fid] * m.facet_sign(fid, cell) / (m.dim * meas);
      const Vec2 pi = m.verts[K.verts[i]];
      u.x += coef * (p.x - pi.x);
      if (m.dim == 2) u.y += coef * (p.y - pi.y);
    }
    return u;
  }
  if (f.kind == SpaceKind::P1Vec) {
    double l[3];
    barycentric(m, cell, p, l);
    Vec2 u{0.0, 0.0};
    for (int i = 0; i <= m.dim; ++i) {
      u.x += l[i] * f.values[2 * K.verts[i]];
      u.y += l[i] * f.values[2 * K.verts[i] + 1];
    }
    return u;
  }
  throw std::invalid_argument("eval_vector: field is not vector-valued");
}

double rt0_divergence(const Field& f, int cell) {
  assert(f.kind == SpaceKind::RT0);
  const Mesh& m = *f.mesh;
  const Cell& K = m.cells[cell];
  const double meas = m.cell_measure(cell);
  double d = 0.0;
  for (int i = 0; i <= m.dim; ++i) {
    const int fid = K.facets[i];
    d += f.values[fid] * m.facet_sign(fid, cell) / meas;
  }
  return d;
}

}  // namespace faultflow
