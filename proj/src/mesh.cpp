#include "faultflow/mesh.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace faultflow {

double Mesh::cell_measure(int c) const {
  const Cell& K = cells[c];
  if (dim == 1) return verts[K.verts[1]].x - verts[K.verts[0]].x;
  const Vec2 a = verts[K.verts[0]], b = verts[K.verts[1]], d = verts[K.verts[2]];
  return 0.5 * ((b.x - a.x) * (d.y - a.y) - (b.y - a.y) * (d.x - a.x));
}

Vec2 Mesh::centroid(int c) const {
  const Cell& K = cells[c];
  if (dim == 1)
    return {0.5 * (verts[K.verts[0]].x + verts[K.verts[1]].x), 0.0};
  const Vec2 a = verts[K.verts[0]], b = verts[K.verts[1]], d = verts[K.verts[2]];
  return {(a.x + b.x + d.x) / 3.0, (a.y + b.y + d.y) / 3.0};
}

double Mesh::cell_diameter(int c) const {
  const Cell& K = cells[c];
  if (dim == 1) return cell_measure(c);
  double dmax = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vec2 a = verts[K.verts[i]], b = verts[K.verts[(i + 1) % 3]];
    dmax = std::max(dmax, std::hypot(b.x - a.x, b.y - a.y));
  }
  return dmax;
}

Vec2 Mesh::facet_midpoint(int f) const {
  const Facet& F = facets[f];
  if (dim == 1) return verts[F.verts[0]];
  const Vec2 a = verts[F.verts[0]], b = verts[F.verts[1]];
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

namespace {

// Monotone subdivision of a segment: cell sizes start at s_fine on the fine
// end and grow geometrically (ratio <= 1.3) until capped at s_coarse, scaled
// to fit the length exactly. Falls back to uniform ~s_fine cells when the
// segment is too short to grade.
std::vector<double> graded_sizes(double len, double s_fine, double s_coarse) {
  assert(len > 0.0 && s_fine > 0.0 && s_coarse >= s_fine);
  const double grow = 1.3;
  const long n_max = static_cast<long>(std::floor(len / s_fine * (1.0 + 1e-12)));
  if (n_max <= 1) return {len};

  long n_min = 0;
  for (double acc = 0.0, s = s_fine; acc < len * (1.0 - 1e-12); s *= grow) {
    acc += std::min(s, s_coarse);
    ++n_min;
  }
  if (n_min > n_max) {
    const long n = std::max(1L, std::lround(len / s_fine));
    return std::vector<double>(static_cast<std::size_t>(n), len / static_cast<double>(n));
  }

  auto total = [&](double g) {
    double t = 0.0, s = s_fine;
    for (long i = 0; i < n_min; ++i) {
      t += std::min(s, s_coarse);
      s *= g;
    }
    return t;
  };
  double lo = 1.0, hi = grow;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) < len ? lo : hi) = mid;
  }
  const double g = 0.5 * (lo + hi);

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_min));
  for (double s = s_fine; static_cast<long>(out.size()) < n_min; s *= g)
    out.push_back(std::min(s, s_coarse));
  const double scale = len / std::accumulate(out.begin(), out.end(), 0.0);
  for (double& v : out) v *= scale;
  return out;
}

void append_segment(std::vector<double>& coords, double a, double b,
                    std::vector<double> sizes, bool fine_at_right) {
  if (fine_at_right) std::reverse(sizes.begin(), sizes.end());
  double x = a;
  for (double s : sizes) {
    x += s;
    coords.push_back(x);
  }
  coords.back() = b;  // snap the break exactly
}

// Builds facets (with measures and oriented normals) from cell connectivity.
// Interior normals point from cells[0] (lower id) to cells[1]; boundary
// normals point outward.
void build_facets_2d(Mesh& m) {
  const long nv = m.n_verts();
  std::unordered_map<long, int> fmap;
  fmap.reserve(m.cells.size() * 2);

  for (int c = 0; c < m.n_cells(); ++c) {
    Cell& K = m.cells[c];
    for (int i = 0; i < 3; ++i) {
      int va = K.verts[(i + 1) % 3], vb = K.verts[(i + 2) % 3];
      if (va > vb) std::swap(va, vb);
      const long key = static_cast<long>(va) * nv + vb;
      auto it = fmap.find(key);
      if (it == fmap.end()) {
        Facet F;
        F.verts = {va, vb};
        F.cells[0] = c;
        const int fid = m.n_facets();
        m.facets.push_back(F);
        fmap.emplace(key, fid);
        K.facets[i] = fid;
      } else {
        assert(m.facets[it->second].cells[1] == -1);
        m.facets[it->second].cells[1] = c;
        K.facets[i] = it->second;
      }
    }
  }

  for (int f = 0; f < m.n_facets(); ++f) {
    Facet& F = m.facets[f];
    const Vec2 a = m.verts[F.verts[0]], b = m.verts[F.verts[1]];
    const double dx = b.x - a.x, dy = b.y - a.y;
    F.measure = std::hypot(dx, dy);
    Vec2 n{dy / F.measure, -dx / F.measure};
    const Vec2 mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    const Vec2 ref = (F.cells[1] >= 0) ? m.centroid(F.cells[1]) - m.centroid(F.cells[0])
                                       : mid - m.centroid(F.cells[0]);
    if (dot(n, ref) < 0.0) n = {-n.x, -n.y};
    F.normal = n;
  }
}

}  // namespace

Mesh generate_interval_mesh(double L, double xg, int n_cells) {
  if (!(L > 0.0)) throw std::invalid_argument("interval mesh: L must be positive");
  if (n_cells < 2) throw std::invalid_argument("interval mesh: need at least 2 cells");
  if (!(xg > 0.0 && xg < L)) throw std::invalid_argument("interval mesh: fault must be interior");

  Mesh m;
  m.dim = 1;
  m.Lx = L;
  m.h = L / n_cells;
  m.fault = FaultGeometry{1, xg, 0.0, 0.0, 1.0};

  m.verts.resize(n_cells + 1);
  for (int i = 0; i <= n_cells; ++i) m.verts[i] = {L * i / n_cells, 0.0};
  const int k = std::clamp(static_cast<int>(std::lround(xg / m.h)), 1, n_cells - 1);
  m.verts[k] = {xg, 0.0};

  m.cells.resize(n_cells);
  for (int c = 0; c < n_cells; ++c) {
    m.cells[c].verts = {c, c + 1, -1};
    // facets[i] opposite verts[i]: right facet first
    m.cells[c].facets = {c + 1, c, -1};
  }

  m.facets.resize(n_cells + 1);
  for (int f = 0; f <= n_cells; ++f) {
    Facet& F = m.facets[f];
    F.verts = {f, -1};
    F.cells = {f > 0 ? f - 1 : 0, -1};
    if (f > 0 && f < n_cells) F.cells = {f - 1, f};
    F.measure = 1.0;
    F.normal = {f == 0 ? -1.0 : 1.0, 0.0};
    if (f == 0) {
      F.tag = FacetTag::dirichlet;
      F.bc_id = 1;
    } else if (f == n_cells) {
      F.tag = FacetTag::dirichlet;
      F.bc_id = 0;
    } else if (f == k) {
      F.tag = FacetTag::fault;
    }
  }
  m.fault_facets = {k};
  return m;
}

Mesh generate_rect_mesh(const RectMeshSpec& spec) {
  const FaultGeometry& g = spec.fault;
  if (!(spec.Lx > 0.0 && spec.Ly > 0.0)) throw std::invalid_argument("rect mesh: bad domain");
  if (!(spec.h_f > 0.0 && spec.h_f <= spec.h)) throw std::invalid_argument("rect mesh: need 0 < h_f <= h");
  if (!(spec.L_s > 0.0)) throw std::invalid_argument("rect mesh: L_s must be positive");
  if (!(g.tau_min < g.tau_max)) throw std::invalid_argument("rect mesh: bad fault extent");
  if (!(g.xg - spec.L_s > 0.0 && g.xg + spec.L_s < spec.Lx &&
        g.tau_min - spec.L_s > 0.0 && g.tau_max + spec.L_s < spec.Ly))
    throw std::invalid_argument("rect mesh: subdomain halo reaches the boundary");

  const double x0 = g.xg - spec.L_s, x1 = g.xg + spec.L_s;
  const double y0 = g.tau_min - spec.L_s, y1 = g.tau_max + spec.L_s;

  std::vector<double> xs{0.0};
  append_segment(xs, 0.0, x0, graded_sizes(x0, spec.h_f, spec.h), true);
  append_segment(xs, x0, g.xg, graded_sizes(spec.L_s, spec.h_f, spec.h_f), false);
  append_segment(xs, g.xg, x1, graded_sizes(spec.L_s, spec.h_f, spec.h_f), false);
  append_segment(xs, x1, spec.Lx, graded_sizes(spec.Lx - x1, spec.h_f, spec.h), false);

  std::vector<double> ys{0.0};
  append_segment(ys, 0.0, y0, graded_sizes(y0, spec.h_f, spec.h), true);
  append_segment(ys, y0, g.tau_min, graded_sizes(spec.L_s, spec.h_f, spec.h_f), false);
  append_segment(ys, g.tau_min, g.tau_max, graded_sizes(g.tau_max - g.tau_min, spec.h_f, spec.h_f), false);
  append_segment(ys, g.tau_max, y1, graded_sizes(spec.L_s, spec.h_f, spec.h_f), false);
  append_segment(ys, y1, spec.Ly, graded_sizes(spec.Ly - y1, spec.h_f, spec.h), false);

  const int nx = static_cast<int>(xs.size()), ny = static_cast<int>(ys.size());

  Mesh m;
  m.dim = 2;
  m.Lx = spec.Lx;
  m.Ly = spec.Ly;
  m.h = spec.h;
  m.h_f = spec.h_f;
  m.L_s = spec.L_s;
  m.fault = g;
  m.sub_x0 = x0;
  m.sub_x1 = x1;
  m.sub_y0 = y0;
  m.sub_y1 = y1;

  m.verts.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) m.verts.push_back({xs[i], ys[j]});
  auto vid = [nx](int i, int j) { return j * nx + i; };

  const Vec2 fmid{g.xg, 0.5 * (g.tau_min + g.tau_max)};
  m.cells.reserve(static_cast<std::size_t>(2) * (nx - 1) * (ny - 1));
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const int bl = vid(i, j), br = vid(i + 1, j), tr = vid(i + 1, j + 1), tl = vid(i, j + 1);
      const Vec2 qc{0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])};
      const double rx = qc.x - fmid.x, ry = qc.y - fmid.y;
      Cell a, b;
      if (rx * ry > 0.0) {  // diagonal bl-tr
        a.verts = {bl, br, tr};
        b.verts = {bl, tr, tl};
      } else {  // diagonal br-tl
        a.verts = {bl, br, tl};
        b.verts = {br, tr, tl};
      }
      const bool inside = qc.x > x0 && qc.x < x1 && qc.y > y0 && qc.y < y1;
      a.in_subdomain = b.in_subdomain = inside;
      m.cells.push_back(a);
      m.cells.push_back(b);
    }
  }

  build_facets_2d(m);

  const double tol = 1e-9 * std::min(spec.h_f, 1.0);
  for (int f = 0; f < m.n_facets(); ++f) {
    Facet& F = m.facets[f];
    const Vec2 a = m.verts[F.verts[0]], b = m.verts[F.verts[1]];
    if (F.cells[1] < 0) {
      if (a.x < tol && b.x < tol) {
        F.tag = FacetTag::dirichlet;
        F.bc_id = 1;
      } else if (a.x > spec.Lx - tol && b.x > spec.Lx - tol) {
        F.tag = FacetTag::dirichlet;
        F.bc_id = 0;
      } else {
        F.tag = FacetTag::neumann;
      }
    } else if (std::fabs(a.x - g.xg) < tol && std::fabs(b.x - g.xg) < tol &&
               std::min(a.y, b.y) > g.tau_min - tol && std::max(a.y, b.y) < g.tau_max + tol) {
      F.tag = FacetTag::fault;
      m.fault_facets.push_back(f);
    }
  }
  std::sort(m.fault_facets.begin(), m.fault_facets.end());
  if (m.fault_facets.empty()) throw std::runtime_error("rect mesh: no fault facets generated");
  return m;
}

SubMesh extract_subdomain(const Mesh& parent) {
  if (parent.dim != 2)
    throw std::invalid_argument("extract_subdomain: 1D meshes have no subdomain");

  SubMesh sm;
  sm.sub_cell_of_parent.assign(parent.n_cells(), -1);
  std::vector<int> vmap(parent.n_verts(), -1);

  Mesh& s = sm.mesh;
  s.dim = 2;
  s.Lx = parent.Lx;
  s.Ly = parent.Ly;
  s.h = parent.h;
  s.h_f = parent.h_f;
  s.L_s = parent.L_s;
  s.fault = parent.fault;
  s.sub_x0 = parent.sub_x0;
  s.sub_x1 = parent.sub_x1;
  s.sub_y0 = parent.sub_y0;
  s.sub_y1 = parent.sub_y1;

  for (int c = 0; c < parent.n_cells(); ++c) {
    if (!parent.cells[c].in_subdomain) continue;
    Cell K;
    for (int i = 0; i < 3; ++i) {
      const int pv = parent.cells[c].verts[i];
      if (vmap[pv] < 0) {
        vmap[pv] = s.n_verts();
        s.verts.push_back(parent.verts[pv]);
        sm.parent_vert.push_back(pv);
      }
      K.verts[i] = vmap[pv];
    }
    K.in_subdomain = true;
    sm.sub_cell_of_parent[c] = s.n_cells();
    sm.parent_cell.push_back(c);
    s.cells.push_back(K);
  }
  if (s.cells.empty()) throw std::invalid_argument("extract_subdomain: no tagged cells");

  build_facets_2d(s);

  // recover parent facet ids through vertex pairs
  std::unordered_map<long, int> pmap;
  pmap.reserve(parent.facets.size());
  const long pnv = parent.n_verts();
  for (int f = 0; f < parent.n_facets(); ++f) {
    const auto& v = parent.facets[f].verts;
    pmap.emplace(static_cast<long>(std::min(v[0], v[1])) * pnv + std::max(v[0], v[1]), f);
  }

  const double tol = 1e-9 * std::min(parent.h_f, 1.0);
  sm.parent_facet.resize(s.n_facets());
  for (int f = 0; f < s.n_facets(); ++f) {
    Facet& F = s.facets[f];
    const int pa = sm.parent_vert[F.verts[0]], pb = sm.parent_vert[F.verts[1]];
    const long key = static_cast<long>(std::min(pa, pb)) * pnv + std::max(pa, pb);
    sm.parent_facet[f] = pmap.at(key);
    const FacetTag ptag = parent.facets[sm.parent_facet[f]].tag;

    if (F.cells[1] >= 0) {
      if (ptag == FacetTag::fault) {
        F.tag = FacetTag::fault;
        s.fault_facets.push_back(f);
      }
      continue;
    }
    const Vec2 a = s.verts[F.verts[0]], b = s.verts[F.verts[1]];
    const bool on_plus = std::fabs(a.x - parent.sub_x0) < tol && std::fabs(b.x - parent.sub_x0) < tol;
    const bool on_minus = std::fabs(a.x - parent.sub_x1) < tol && std::fabs(b.x - parent.sub_x1) < tol;
    F.tag = (on_plus || on_minus) ? FacetTag::sub_flux : FacetTag::sub_dirichlet;
  }
  std::sort(s.fault_facets.begin(), s.fault_facets.end());
  return sm;
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(&mesh) {
  if (mesh.dim == 1) {
    coords_1d_.resize(mesh.verts.size());
    for (std::size_t i = 0; i < mesh.verts.size(); ++i) coords_1d_[i] = mesh.verts[i].x;
    return;
  }
  double xmax = -1e300, ymax = -1e300;
  x0_ = 1e300;
  y0_ = 1e300;
  for (const Vec2& v : mesh.verts) {
    x0_ = std::min(x0_, v.x);
    y0_ = std::min(y0_, v.y);
    xmax = std::max(xmax, v.x);
    ymax = std::max(ymax, v.y);
  }
  const int nc = mesh.n_cells();
  const double w = std::max(xmax - x0_, 1e-300), h = std::max(ymax - y0_, 1e-300);
  nbx_ = std::max(1, static_cast<int>(std::lround(std::sqrt(nc * w / h))));
  nby_ = std::max(1, static_cast<int>(std::lround(static_cast<double>(nc) / nbx_)));
  bw_ = w / nbx_;
  bh_ = h / nby_;
  bins_.resize(static_cast<std::size_t>(nbx_) * nby_);

  for (int c = 0; c < nc; ++c) {
    double cx0 = 1e300, cy0 = 1e300, cx1 = -1e300, cy1 = -1e300;
    for (int i = 0; i < 3; ++i) {
      const Vec2 v = mesh.verts[mesh.cells[c].verts[i]];
      cx0 = std::min(cx0, v.x);
      cy0 = std::min(cy0, v.y);
      cx1 = std::max(cx1, v.x);
      cy1 = std::max(cy1, v.y);
    }
    const int i0 = std::clamp(static_cast<int>((cx0 - x0_) / bw_), 0, nbx_ - 1);
    const int i1 = std::clamp(static_cast<int>((cx1 - x0_) / bw_), 0, nbx_ - 1);
    const int j0 = std::clamp(static_cast<int>((cy0 - y0_) / bh_), 0, nby_ - 1);
    const int j1 = std::clamp(static_cast<int>((cy1 - y0_) / bh_), 0, nby_ - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) bins_[static_cast<std::size_t>(j) * nbx_ + i].push_back(c);
  }
}

bool PointLocator::test_cell(int c, Vec2 p, std::array<double, 3>* bary) const {
  const Cell& K = mesh_->cells[c];
  const Vec2 a = mesh_->verts[K.verts[0]], b = mesh_->verts[K.verts[1]], d = mesh_->verts[K.verts[2]];
  const double A2 = (b.x - a.x) * (d.y - a.y) - (b.y - a.y) * (d.x - a.x);
  const double l1 = ((p.x - a.x) * (d.y - a.y) - (p.y - a.y) * (d.x - a.x)) / A2;
  const double l2 = ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)) / A2;
  const double l0 = 1.0 - l1 - l2;
  const double tol = -1e-9;
  if (l0 < tol || l1 < tol || l2 < tol) return false;
  if (bary) *bary = {l0, l1, l2};
  return true;
}

int PointLocator::locate(Vec2 p, std::array<double, 3>* bary) const {
  if (mesh_->dim == 1) {
    if (p.x < coords_1d_.front() - 1e-12 || p.x > coords_1d_.back() + 1e-12) return -1;
    auto it = std::upper_bound(coords_1d_.begin(), coords_1d_.end(), p.x);
    int c = std::clamp(static_cast<int>(it - coords_1d_.begin()) - 1, 0, mesh_->n_cells() - 1);
    if (bary) {
      const double xa = coords_1d_[c], xb = coords_1d_[c + 1];
      const double l1 = (p.x - xa) / (xb - xa);
      *bary = {1.0 - l1, l1, 0.0};
    }
    return c;
  }
  const int bi = std::clamp(static_cast<int>((p.x - x0_) / bw_), 0, nbx_ - 1);
  const int bj = std::clamp(static_cast<int>((p.y - y0_) / bh_), 0, nby_ - 1);
  for (int c : bins_[static_cast<std::size_t>(bj) * nbx_ + bi])
    if (test_cell(c, p, bary)) return c;
  for (int dj = -1; dj <= 1; ++dj) {
    for (int di = -1; di <= 1; ++di) {
      if (di == 0 && dj == 0) continue;
      const int i = bi + di, j = bj + dj;
      if (i < 0 || i >= nbx_ || j < 0 || j >= nby_) continue;
      for (int c : bins_[static_cast<std::size_t>(j) * nbx_ + i])
        if (test_cell(c, p, bary)) return c;
    }
  }
  return -1;
}

}  // namespace faultflow
