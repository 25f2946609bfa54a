#include "faultflow/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "faultflow/quadrature.hpp"
#include "json.hpp"

namespace faultflow {

namespace {

const char* kMethods[] = {"mixed", "cg", "cg+correction"};

bool known_method(const std::string& m) {
  for (const char* k : kMethods)
    if (m == k) return true;
  return false;
}

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok)
      throw std::invalid_argument("unknown config key '" + it.key() + "' in " + where);
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("config: dimension must be 1 or 2");
  if (!(Lx > 0.0) || (dim == 2 && !(Ly > 0.0)))
    throw std::invalid_argument("config: domain lengths must be positive");
  if (fault.dim != dim) throw std::invalid_argument("config: fault dimension mismatch");
  fault.validate();
  if (!(fault.xg > 0.0 && fault.xg < Lx))
    throw std::invalid_argument("config: fault plane must be inside the domain");
  if (dim == 2 && !(fault.tau_min >= 0.0 && fault.tau_max <= Ly))
    throw std::invalid_argument("config: fault extent must be inside the domain");
  if (!known_method(method))
    throw std::invalid_argument("config: method must be mixed, cg or cg+correction");
  if (dim == 1 && method == "cg+correction")
    throw std::invalid_argument("config: the correction step needs a 2D domain");
  if (h_ladder.empty()) throw std::invalid_argument("config: h_ladder is empty");
  for (double h : h_ladder)
    if (!(h > 0.0 && h < Lx)) throw std::invalid_argument("config: bad ladder spacing");
  if (method != "mixed") {
    if (eps_mult.empty()) throw std::invalid_argument("config: eps_multipliers is empty");
    for (double g : eps_mult)
      if (!(g > 0.0)) throw std::invalid_argument("config: eps multipliers must be positive");
  }
  if (!(ground_truth_h > 0.0)) throw std::invalid_argument("config: bad ground_truth_h");
  if (!(solver.tol_abs > 0.0) || solver.restart < 1)
    throw std::invalid_argument("config: bad solver options");
  if (!(ls_factor > 0.0)) throw std::invalid_argument("config: ls_factor must be positive");
  if (!(spectrum_h_mixed > 0.0) || !(spectrum_h_cg > 0.0) || spectrum_k_mixed < 1 ||
      spectrum_k_cg < 1 || !(spectrum_eps_mult > 0.0))
    throw std::invalid_argument("config: bad spectrum options");
}

ExperimentConfig config_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: parse error: ") + e.what());
  }
  ExperimentConfig c;
  try {
    if (!j.is_object()) throw std::invalid_argument("config: root must be an object");
    check_keys(j,
               {"dimension", "domain", "fault", "bc", "method", "h_ladder",
                "eps_multipliers", "eps_tau_multiplier", "ground_truth_h", "solver",
                "ls_factor", "spectrum", "output_dir"},
               "root");
    c.dim = j.value("dimension", c.dim);
    if (j.contains("domain")) {
      const auto& d = j.at("domain");
      check_keys(d, {"Lx", "Ly"}, "domain");
      c.Lx = d.value("Lx", c.Lx);
      c.Ly = d.value("Ly", c.Ly);
    }
    c.fault.dim = c.dim;
    if (j.contains("fault")) {
      const auto& f = j.at("fault");
      check_keys(f, {"x", "tau_min", "tau_max", "tf"}, "fault");
      c.fault.xg = f.value("x", c.fault.xg);
      c.fault.tau_min = f.value("tau_min", c.fault.tau_min);
      c.fault.tau_max = f.value("tau_max", c.fault.tau_max);
      c.fault.tf = f.value("tf", c.fault.tf);
    }
    if (j.contains("bc")) {
      const auto& b = j.at("bc");
      check_keys(b, {"p_in", "p_out"}, "bc");
      c.bc.p_in = b.value("p_in", c.bc.p_in);
      c.bc.p_out = b.value("p_out", c.bc.p_out);
    }
    c.method = j.value("method", c.method);
    if (j.contains("h_ladder")) c.h_ladder = j.at("h_ladder").get<std::vector<double>>();
    if (j.contains("eps_multipliers"))
      c.eps_mult = j.at("eps_multipliers").get<std::vector<double>>();
    c.eps_tau_mult = j.value("eps_tau_multiplier", c.eps_tau_mult);
    c.ground_truth_h = j.value("ground_truth_h", c.ground_truth_h);
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      check_keys(s, {"tol", "restart", "max_iter"}, "solver");
      c.solver.tol_abs = s.value("tol", c.solver.tol_abs);
      c.solver.restart = s.value("restart", c.solver.restart);
      c.solver.max_iter = s.value("max_iter", c.solver.max_iter);
    }
    c.ls_factor = j.value("ls_factor", c.ls_factor);
    if (j.contains("spectrum")) {
      const auto& s = j.at("spectrum");
      check_keys(s, {"h_mixed", "h_cg", "k_mixed", "k_cg", "eps_mult"}, "spectrum");
      c.spectrum_h_mixed = s.value("h_mixed", c.spectrum_h_mixed);
      c.spectrum_h_cg = s.value("h_cg", c.spectrum_h_cg);
      c.spectrum_k_mixed = s.value("k_mixed", c.spectrum_k_mixed);
      c.spectrum_k_cg = s.value("k_cg", c.spectrum_k_cg);
      c.spectrum_eps_mult = s.value("eps_mult", c.spectrum_eps_mult);
    }
    c.out_dir = j.value("output_dir", c.out_dir);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

double subdomain_halfwidth(const ExperimentConfig& cfg, double h_f) {
  const FaultGeometry& g = cfg.fault;
  double ls = cfg.ls_factor * h_f;
  double headroom = std::min(std::min(g.xg, cfg.Lx - g.xg),
                             std::min(g.tau_min, cfg.Ly - g.tau_max));
  double cap = 0.8 * headroom;
  if (cap <= h_f)
    throw std::invalid_argument("subdomain halo does not fit between fault and boundary");
  ls = std::min(ls, cap);
  // snap so the strip between halo and boundary holds whole h_f cells
  double gap = g.tau_min - ls;
  double k = std::ceil(gap / h_f - 1e-9);
  if (k < 1.0) k = 1.0;
  double snapped = g.tau_min - k * h_f;
  if (snapped > h_f) ls = snapped;
  return ls;
}

std::shared_ptr<Mesh> build_mesh(const ExperimentConfig& cfg, double h) {
  if (!(h > 0.0) || !(h < cfg.Lx)) throw std::invalid_argument("build_mesh: bad spacing");
  if (cfg.dim == 1) {
    int n = static_cast<int>(std::max<long>(2, std::lround(cfg.Lx / h)));
    auto m = std::make_shared<Mesh>(generate_interval_mesh(cfg.Lx, cfg.fault.xg, n));
    m->fault = cfg.fault;
    return m;
  }
  RectMeshSpec spec;
  spec.Lx = cfg.Lx;
  spec.Ly = cfg.Ly;
  spec.fault = cfg.fault;
  spec.h = h;
  spec.h_f = 0.4 * h;
  spec.L_s = subdomain_halfwidth(cfg, spec.h_f);
  return std::make_shared<Mesh>(generate_rect_mesh(spec));
}

void Evaluator::sample(Vec2 x, double& pv, Vec2& uv) const {
  pv = p(x);
  uv = u(x);
}

FieldEvaluator::FieldEvaluator(const Field& p, const Field& u)
    : p_(&p), u_(&u), loc_(*p.mesh) {
  if (p.mesh == nullptr || p.mesh != u.mesh)
    throw std::invalid_argument("evaluator: fields must share a mesh");
}

double FieldEvaluator::p(Vec2 x) const {
  int c = loc_.locate(x);
  if (c < 0) throw std::runtime_error("evaluation point outside mesh");
  return eval_scalar(*p_, c, x);
}

Vec2 FieldEvaluator::u(Vec2 x) const {
  int c = loc_.locate(x);
  if (c < 0) throw std::runtime_error("evaluation point outside mesh");
  return eval_vector(*u_, c, x);
}

void FieldEvaluator::sample(Vec2 x, double& pv, Vec2& uv) const {
  int c = loc_.locate(x);
  if (c < 0) throw std::runtime_error("evaluation point outside mesh");
  pv = eval_scalar(*p_, c, x);
  uv = eval_vector(*u_, c, x);
}

CompositeEvaluator::CompositeEvaluator(const CompositeSolution& cs)
    : cs_(&cs), loc_(*cs.parent) {
  if (!cs.sub) throw std::invalid_argument("composite evaluator: missing subdomain");
}

double CompositeEvaluator::p(Vec2 x) const {
  double pv;
  Vec2 uv;
  sample(x, pv, uv);
  return pv;
}

Vec2 CompositeEvaluator::u(Vec2 x) const {
  double pv;
  Vec2 uv;
  sample(x, pv, uv);
  return uv;
}

void CompositeEvaluator::sample(Vec2 x, double& pv, Vec2& uv) const {
  int c = loc_.locate(x);
  if (c < 0) throw std::runtime_error("evaluation point outside mesh");
  if (cs_->parent->cells[c].in_subdomain) {
    int sc = cs_->sub->sub_cell_of_parent[c];
    pv = eval_scalar(cs_->sub_p, sc, x);
    uv = eval_vector(cs_->sub_u, sc, x);
  } else {
    pv = eval_scalar(cs_->global.p, c, x);
    uv = eval_vector(cs_->global.u, c, x);
  }
}

ErrorPair l2_error(const Field& p_ref, const Field& u_ref, const Evaluator& approx,
                   int degree) {
  const Mesh& m = *p_ref.mesh;
  if (u_ref.mesh != &m) throw std::invalid_argument("l2_error: reference mesh mismatch");
  double sp = 0.0, su = 0.0;
  if (m.dim == 1) {
    const auto& rule = line_rule(degree);
    for (int c = 0; c < m.n_cells(); ++c) {
      const Cell& cell = m.cells[c];
      double xa = m.verts[cell.verts[0]].x, xb = m.verts[cell.verts[1]].x;
      double meas = m.cell_measure(c);
      for (const auto& q : rule) {
        Vec2 xq{xa + q.t * (xb - xa), 0.0};
        double pa;
        Vec2 ua;
        approx.sample(xq, pa, ua);
        double dp = eval_scalar(p_ref, c, xq) - pa;
        Vec2 du = eval_vector(u_ref, c, xq) - ua;
        sp += q.w * meas * dp * dp;
        su += q.w * meas * dot(du, du);
      }
    }
  } else {
    const auto& rule = tri_rule(degree);
    for (int c = 0; c < m.n_cells(); ++c) {
      const Cell& cell = m.cells[c];
      Vec2 a = m.verts[cell.verts[0]], b = m.verts[cell.verts[1]],
           d = m.verts[cell.verts[2]];
      double meas = m.cell_measure(c);
      for (const auto& q : rule) {
        Vec2 xq = q.l0 * a + q.l1 * b + q.l2 * d;
        double pa;
        Vec2 ua;
        approx.sample(xq, pa, ua);
        double dp = eval_scalar(p_ref, c, xq) - pa;
        Vec2 du = eval_vector(u_ref, c, xq) - ua;
        sp += q.w * meas * dp * dp;
        su += q.w * meas * dot(du, du);
      }
    }
  }
  return {std::sqrt(sp), std::sqrt(su)};
}

double estimate_rate(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size() || h.size() < 2)
    throw std::invalid_argument("estimate_rate: need matching samples, at least two");
  size_t n = h.size();
  double mh = 0.0, me = 0.0;
  std::vector<double> lh(n), le(n);
  for (size_t i = 0; i < n; ++i) {
    if (!(h[i] > 0.0)) throw std::invalid_argument("estimate_rate: h must be positive");
    lh[i] = std::log(h[i]);
    le[i] = std::log(std::max(e[i], 1e-300));
    mh += lh[i];
    me += le[i];
  }
  mh /= static_cast<double>(n);
  me /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < n; ++i) {
    num += (lh[i] - mh) * (le[i] - me);
    den += (lh[i] - mh) * (lh[i] - mh);
  }
  if (den == 0.0) throw std::invalid_argument("estimate_rate: spacings are all equal");
  return num / den;
}

GroundTruth solve_ground_truth(const ExperimentConfig& cfg) {
  GroundTruth gt;
  gt.mesh = build_mesh(cfg, cfg.ground_truth_h);
  gt.sol = solve_mixed(*gt.mesh, cfg.fault.tf, cfg.bc, cfg.solver);
  if (!gt.sol.report.converged)
    throw std::runtime_error("ground truth solve failed: " + gt.sol.report.message);
  return gt;
}

namespace {

void csv_group_line(std::ostream& os, double g) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "# eps_mult=%.6e\n", g);
  os << buf;
}

void csv_row_line(std::ostream& os, const ErrorRow& r) {
  char buf[192];
  std::snprintf(buf, sizeof buf, "%.6e,%d,%.6e,%.6e,%.6e,%.6e\n", r.h, r.dof,
                r.time_global, r.time_sub, r.e_p, r.e_u);
  os << buf;
}

void csv_rate_line(std::ostream& os, const RateEntry& r) {
  char buf[128];
  if (r.eps_mult > 0.0)
    std::snprintf(buf, sizeof buf, "# rate eps_mult=%.6e p=%.6e u=%.6e\n", r.eps_mult,
                  r.rate_p, r.rate_u);
  else
    std::snprintf(buf, sizeof buf, "# rate p=%.6e u=%.6e\n", r.rate_p, r.rate_u);
  os << buf;
}

}  // namespace

ConvergenceResult run_convergence(const ExperimentConfig& cfg, const GroundTruth* gt,
                                  std::ostream* csv) {
  cfg.validate();
  double hmin = *std::min_element(cfg.h_ladder.begin(), cfg.h_ladder.end());
  if (!(cfg.ground_truth_h <= 0.5 * hmin))
    throw std::invalid_argument("config: ground_truth_h must be at most half the finest rung");

  GroundTruth local;
  if (gt == nullptr) {
    local = solve_ground_truth(cfg);
    gt = &local;
  }

  std::vector<double> groups = (cfg.method == "mixed") ? std::vector<double>{0.0}
                                                       : cfg.eps_mult;
  ConvergenceResult res;
  if (csv) *csv << "h,dof,time_global,time_sub,e_p,e_u\n" << std::flush;
  for (double g : groups) {
    if (csv && g > 0.0) csv_group_line(*csv, g);
    std::vector<double> hs, eps_list, eus;
    for (double h : cfg.h_ladder) {
      auto mesh = build_mesh(cfg, h);
      double base = (mesh->dim == 2) ? mesh->h_f : mesh->h;
      ErrorRow row;
      row.h = h;
      row.eps_mult = g;
      if (cfg.method == "mixed") {
        row.dof = mesh->n_facets() + mesh->n_cells();
        MixedSolution ms = solve_mixed(*mesh, cfg.fault.tf, cfg.bc, cfg.solver);
        if (!ms.report.converged)
          throw std::runtime_error("mixed solve failed: " + ms.report.message);
        row.time_global = ms.report.wall_time_s;
        FieldEvaluator ev(ms.p, ms.u);
        ErrorPair e = l2_error(gt->sol.p, gt->sol.u, ev);
        row.e_p = e.e_p;
        row.e_u = e.e_u;
      } else {
        row.dof = mesh->n_verts();
        double eps = g * base;
        double eps_tau = cfg.eps_tau_mult < 0.0 ? eps : cfg.eps_tau_mult * base;
        if (cfg.method == "cg") {
          CgSolution cs = solve_cg(*mesh, cfg.fault, eps, eps_tau, cfg.bc, cfg.solver);
          if (!cs.report.converged)
            throw std::runtime_error("cg solve failed: " + cs.report.message);
          row.time_global = cs.report.wall_time_s;
          FieldEvaluator ev(cs.p, cs.u);
          ErrorPair e = l2_error(gt->sol.p, gt->sol.u, ev);
          row.e_p = e.e_p;
          row.e_u = e.e_u;
        } else {
          CompositeSolution comp =
              solve_corrected(mesh, cfg.fault, eps, eps_tau, cfg.bc, cfg.solver);
          if (!comp.global.report.converged)
            throw std::runtime_error("cg solve failed: " + comp.global.report.message);
          if (!comp.sub_report.converged)
            throw std::runtime_error("correction solve failed: " + comp.sub_report.message);
          row.time_global = comp.global.report.wall_time_s;
          row.time_sub = comp.sub_report.wall_time_s;
          CompositeEvaluator ev(comp);
          ErrorPair e = l2_error(gt->sol.p, gt->sol.u, ev);
          row.e_p = e.e_p;
          row.e_u = e.e_u;
        }
      }
      hs.push_back(row.h);
      eps_list.push_back(row.e_p);
      eus.push_back(row.e_u);
      res.rows.push_back(row);
      if (csv) {
        csv_row_line(*csv, row);
        csv->flush();
      }
    }
    if (hs.size() >= 2)
      res.rates.push_back({g, estimate_rate(hs, eps_list), estimate_rate(hs, eus)});
  }
  if (csv)
    for (const RateEntry& r : res.rates) csv_rate_line(*csv, r);
  return res;
}

void write_convergence_csv(std::ostream& os, const ConvergenceResult& res) {
  os << "h,dof,time_global,time_sub,e_p,e_u\n";
  double group = -1.0;
  for (const ErrorRow& r : res.rows) {
    if (r.eps_mult > 0.0 && r.eps_mult != group) {
      group = r.eps_mult;
      csv_group_line(os, group);
    }
    csv_row_line(os, r);
  }
  for (const RateEntry& r : res.rates) csv_rate_line(os, r);
}

std::vector<SpectrumRow> run_spectrum(const ExperimentConfig& cfg) {
  cfg.validate();
  const double tfs[] = {2e0, 2e-1, 2e-2, 2e-3};
  std::vector<SpectrumRow> rows;

  auto mm = build_mesh(cfg, cfg.spectrum_h_mixed);
  int n_mixed = mm->n_facets() + mm->n_cells();
  if (n_mixed > 5000)
    throw std::invalid_argument("spectrum: mixed mesh too large for the dense eigensolve");
  MixedBc mbc;
  for (int F = 0; F < mm->n_facets(); ++F) {
    const Facet& ft = mm->facets[F];
    if (ft.tag == FacetTag::dirichlet)
      mbc.dirichlet_mean.emplace(F, cfg.bc.value(ft.bc_id));
    else if (ft.tag == FacetTag::neumann)
      mbc.pinned_flux.emplace(F, 0.0);
  }
  for (double tf : tfs) {
    MixedSystem sys = assemble_mixed_system(*mm, tf, {}, mbc);
    int k = std::min(cfg.spectrum_k_mixed, n_mixed);
    std::vector<double> lam = eigs_extreme(sys.A, k, true);
    for (int i = 0; i < static_cast<int>(lam.size()); ++i)
      rows.push_back({"mixed", tf, i + 1, lam[i]});
  }

  auto cm = build_mesh(cfg, cfg.spectrum_h_cg);
  if (cm->n_verts() > 5000)
    throw std::invalid_argument("spectrum: cg mesh too large for the dense eigensolve");
  double base = (cm->dim == 2) ? cm->h_f : cm->h;
  for (double tf : tfs) {
    FaultGeometry fg = cfg.fault;
    fg.tf = tf;
    RegDelta delta(fg, cfg.spectrum_eps_mult * base);
    std::vector<double> rhs;
    CsrMatrix B = assemble_cg_operator(*cm, &delta, tf, cfg.bc, rhs);
    int k = std::min(cfg.spectrum_k_cg, cm->n_verts());
    std::vector<double> lam = eigs_extreme(B, k, true);
    for (int i = 0; i < static_cast<int>(lam.size()); ++i)
      rows.push_back({"cg", tf, i + 1, lam[i]});
  }
  return rows;
}

void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumRow>& rows) {
  os << "method,tf,index,lambda\n";
  char buf[128];
  for (const SpectrumRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6e,%d,%.6e\n", r.method.c_str(), r.tf, r.index,
                  r.lambda);
    os << buf;
  }
}

std::vector<CenterlineSample> sample_centerline(const Evaluator& ev,
                                                const ExperimentConfig& cfg, int n) {
  if (n < 2) throw std::invalid_argument("centerline: need at least two samples");
  double y = (cfg.dim == 2) ? 0.5 * cfg.Ly : 0.0;
  double dx = cfg.Lx / static_cast<double>(n - 1);
  double off = 1e-9 * cfg.Lx;
  std::vector<CenterlineSample> out;
  out.reserve(static_cast<size_t>(n) + 1);
  for (int i = 0; i < n; ++i) {
    double x = static_cast<double>(i) * dx;
    if (std::abs(x - cfg.fault.xg) < 0.5 * dx) {
      // straddle the fault instead of sampling on it
      for (double xs : {cfg.fault.xg - off, cfg.fault.xg + off}) {
        Vec2 pt{xs, y};
        out.push_back({xs, ev.p(pt), ev.u(pt).x});
      }
    } else {
      Vec2 pt{x, y};
      out.push_back({x, ev.p(pt), ev.u(pt).x});
    }
  }
  return out;
}

void write_centerline_csv(std::ostream& os, const std::vector<CenterlineSample>& rows) {
  os << "x,p,u_n\n";
  char buf[128];
  for (const CenterlineSample& r : rows) {
    std::snprintf(buf, sizeof buf, "%.9e,%.6e,%.6e\n", r.x, r.p, r.un);
    os << buf;
  }
}

}  // namespace faultflow
