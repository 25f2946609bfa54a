#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "faultflow/harness.hpp"

using namespace faultflow;

namespace {

GmresOptions tight(double tol) {
  GmresOptions o;
  o.tol_abs = tol;
  return o;
}

ExperimentConfig config_1d(const std::string& method) {
  ExperimentConfig c;
  c.dim = 1;
  c.Lx = 10.0;
  c.fault = FaultGeometry{1, 5.0, 0.0, 0.0, 0.2};
  c.method = method;
  c.h_ladder = {1.0, 0.5};
  c.ground_truth_h = 0.25;
  c.solver.tol_abs = 1e-12;
  return c;
}

// blank the two wall-time columns of data rows
std::string normalize_csv(const std::string& s) {
  std::istringstream in(s);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' && line[0] != 'h') {
      std::vector<std::string> f;
      std::istringstream ls(line);
      std::string tok;
      while (std::getline(ls, tok, ',')) f.push_back(tok);
      if (f.size() == 6) {
        f[2] = "T";
        f[3] = "T";
      }
      for (size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
      out << '\n';
    } else {
      out << line << '\n';
    }
  }
  return out.str();
}

}  // namespace

TEST_CASE("harness: config defaults from empty json") {
  const ExperimentConfig c = config_from_json_text("{}");
  CHECK(c.dim == 2);
  CHECK(c.Lx == 2.0);
  CHECK(c.Ly == 1.0);
  CHECK(c.fault.xg == 1.0);
  CHECK(c.fault.tau_min == 0.3);
  CHECK(c.fault.tau_max == 0.7);
  CHECK(c.fault.tf == 2.0);
  CHECK(c.bc.p_in == 1.0);
  CHECK(c.bc.p_out == 0.0);
  CHECK(c.method == "cg+correction");
  REQUIRE(c.h_ladder.size() == 3);
  CHECK(c.h_ladder[0] == 1e-1);
  CHECK(c.h_ladder[2] == 2.5e-2);
  REQUIRE(c.eps_mult.size() == 1);
  CHECK(c.eps_mult[0] == 3.0);
  CHECK(c.eps_tau_mult == -1.0);
  CHECK(c.ground_truth_h == 6.25e-3);
  CHECK(c.solver.tol_abs == 1e-8);
  CHECK(c.solver.restart == 200);
  CHECK(c.solver.max_iter == -1);
  CHECK(c.ls_factor == 20.0);
  CHECK(c.spectrum_h_mixed == 0.2);
  CHECK(c.spectrum_h_cg == 0.1);
  CHECK(c.spectrum_k_mixed == 80);
  CHECK(c.spectrum_k_cg == 1000);
  CHECK(c.spectrum_eps_mult == 3.0);
  CHECK(c.out_dir == ".");
}

TEST_CASE("harness: config overrides every field") {
  const char* text = R"({
    "dimension": 2,
    "domain": {"Lx": 4.0, "Ly": 2.0},
    "fault": {"x": 1.5, "tau_min": 0.5, "tau_max": 1.5, "tf": 0.5},
    "bc": {"p_in": 2.0, "p_out": -1.0},
    "method": "mixed",
    "h_ladder": [0.2, 0.1],
    "eps_multipliers": [1.0, 3.0, 5.0],
    "eps_tau_multiplier": 2.0,
    "ground_truth_h": 0.05,
    "solver": {"tol": 1e-10, "restart": 50, "max_iter": 9000},
    "ls_factor": 10.0,
    "spectrum": {"h_mixed": 0.3, "h_cg": 0.15, "k_mixed": 7, "k_cg": 9, "eps_mult": 2.0},
    "output_dir": "/tmp/out"
  })";
  const ExperimentConfig c = config_from_json_text(text);
  CHECK(c.Lx == 4.0);
  CHECK(c.Ly == 2.0);
  CHECK(c.fault.xg == 1.5);
  CHECK(c.fault.tau_min == 0.5);
  CHECK(c.fault.tau_max == 1.5);
  CHECK(c.fault.tf == 0.5);
  CHECK(c.bc.p_in == 2.0);
  CHECK(c.bc.p_out == -1.0);
  CHECK(c.method == "mixed");
  REQUIRE(c.h_ladder.size() == 2);
  CHECK(c.h_ladder[1] == 0.1);
  REQUIRE(c.eps_mult.size() == 3);
  CHECK(c.eps_mult[2] == 5.0);
  CHECK(c.eps_tau_mult == 2.0);
  CHECK(c.ground_truth_h == 0.05);
  CHECK(c.solver.tol_abs == 1e-10);
  CHECK(c.solver.restart == 50);
  CHECK(c.solver.max_iter == 9000);
  CHECK(c.ls_factor == 10.0);
  CHECK(c.spectrum_h_mixed == 0.3);
  CHECK(c.spectrum_h_cg == 0.15);
  CHECK(c.spectrum_k_mixed == 7);
  CHECK(c.spectrum_k_cg == 9);
  CHECK(c.spectrum_eps_mult == 2.0);
  CHECK(c.out_dir == "/tmp/out");
}

TEST_CASE("harness: config rejects unknown and malformed input") {
  CHECK_THROWS_AS(config_from_json_text("{\"frobnicate\": 1}"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"fault\": {\"plane\": 1}}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"solver\": {\"tolerance\": 1e-8}}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{oops"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("[]"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"h_ladder\": \"fine\"}"),
                  std::invalid_argument);
}

TEST_CASE("harness: config validation guards") {
  CHECK_THROWS_AS(config_from_json_text("{\"dimension\": 3}"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"method\": \"fem\"}"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"h_ladder\": []}"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"h_ladder\": [0.1, -0.1]}"),
                  std::invalid_argument);
  // 1D has no halo to correct on
  CHECK_THROWS_AS(config_from_json_text(
                      R"({"dimension": 1, "domain": {"Lx": 10.0},
                          "fault": {"x": 5.0, "tf": 0.2}, "method": "cg+correction"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"fault\": {\"x\": 2.5}}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"fault\": {\"tau_max\": 1.5}}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"fault\": {\"tf\": -1.0}}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"method\": \"cg\", \"eps_multipliers\": []}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"eps_multipliers\": [-2.0]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"ground_truth_h\": 0.0}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"solver\": {\"tol\": 0.0}}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"solver\": {\"restart\": 0}}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"ls_factor\": 0.0}"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"spectrum\": {\"k_mixed\": 0}}"),
                  std::invalid_argument);

  // a fully specified 1D config is fine
  const ExperimentConfig c = config_from_json_text(
      R"({"dimension": 1, "domain": {"Lx": 10.0}, "fault": {"x": 5.0, "tf": 0.2},
          "method": "cg", "h_ladder": [1.0], "ground_truth_h": 0.25})");
  CHECK(c.fault.dim == 1);
  CHECK(c.fault.tf == 0.2);
}

TEST_CASE("harness: config file round trip") {
  const char* path = "harness_cfg_tmp.json";
  {
    std::ofstream out(path);
    out << "{\"method\": \"mixed\", \"fault\": {\"tf\": 0.25}}";
  }
  const ExperimentConfig c = config_from_json_file(path);
  CHECK(c.method == "mixed");
  CHECK(c.fault.tf == 0.25);
  std::remove(path);

  CHECK_THROWS_AS(config_from_json_file("definitely_missing_cfg.json"),
                  std::invalid_argument);
}

TEST_CASE("harness: subdomain halfwidth snaps to whole cells") {
  ExperimentConfig cfg;  // defaults: xg = 1 in [0,2], tau in [0.3, 0.7], factor 20

  // frozen: cap 0.8*0.3 = 0.24, then snap so (tau_min - L_s) is a h_f multiple
  CHECK(subdomain_halfwidth(cfg, 0.04) == doctest::Approx(0.22).epsilon(1e-12));
  CHECK(subdomain_halfwidth(cfg, 0.02) == doctest::Approx(0.24).epsilon(1e-12));
  CHECK(subdomain_halfwidth(cfg, 0.01) == doctest::Approx(0.20).epsilon(1e-12));
  CHECK(subdomain_halfwidth(cfg, 0.0025) == doctest::Approx(0.05).epsilon(1e-12));

  for (double hf : {0.04, 0.02, 0.01, 0.0025}) {
    const double ls = subdomain_halfwidth(cfg, hf);
    CHECK(ls > 0.0);
    CHECK(ls <= 0.8 * 0.3 + 1e-12);
    const double k = (cfg.fault.tau_min - ls) / hf;
    CHECK(std::fabs(k - std::round(k)) <= 1e-9);
  }

  // no room between fault tip and boundary
  ExperimentConfig cramped;
  cramped.fault.tau_min = 0.04;
  cramped.fault.tau_max = 0.96;
  CHECK_THROWS_AS(subdomain_halfwidth(cramped, 0.04), std::invalid_argument);
}

TEST_CASE("harness: build_mesh wiring") {
  ExperimentConfig cfg;
  auto m = build_mesh(cfg, 0.1);
  CHECK(m->dim == 2);
  CHECK(m->h == 0.1);
  CHECK(m->h_f == doctest::Approx(0.04).epsilon(1e-15));
  CHECK(m->L_s == doctest::Approx(0.22).epsilon(1e-12));
  CHECK(m->sub_y0 == doctest::Approx(0.08).epsilon(1e-9));
  CHECK(m->fault.tf == 2.0);
  CHECK(m->fault_facets.size() == 10);

  const ExperimentConfig c1 = config_1d("mixed");
  auto line = build_mesh(c1, 1.0);
  CHECK(line->dim == 1);
  CHECK(line->n_cells() == 10);
  CHECK(line->verts[5].x == 5.0);
  CHECK(line->fault.tf == 0.2);
  CHECK(build_mesh(c1, 9.0)->n_cells() == 2);  // lround(10/9) = 1, floored to 2

  CHECK_THROWS_AS(build_mesh(c1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(c1, 10.0), std::invalid_argument);
}

TEST_CASE("harness: rate estimation") {
  CHECK(estimate_rate({0.1, 0.05}, {1e-2, 5e-3}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(estimate_rate({0.1, 0.05}, {1e-2, 1e-2 / std::sqrt(2.0)}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(estimate_rate({0.4, 0.2, 0.1}, {0.16, 0.04, 0.01}) ==
        doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(estimate_rate({0.1, 0.05}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_rate({0.1}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_rate({0.1, 0.0}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_rate({0.1, 0.1}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("harness: l2 error as exact integrator") {
  RectMeshSpec sa;
  sa.fault = FaultGeometry{2, 1.0, 0.3, 0.7, 2.0};
  sa.h = 0.25;
  sa.h_f = 0.1;
  sa.L_s = 0.2;
  const Mesh ma = generate_rect_mesh(sa);
  RectMeshSpec sb = sa;
  sb.h = 0.1;
  sb.h_f = 0.04;
  const Mesh mb = generate_rect_mesh(sb);

  // constants are exactly representable on both meshes
  Field pa = make_field(SpaceKind::P0, ma);
  for (double& v : pa.values) v = 3.5;
  Field ua = make_field(SpaceKind::RT0, ma);  // zero flux
  Field pb = make_field(SpaceKind::P1, mb);
  for (double& v : pb.values) v = 3.5;
  Field ub = make_field(SpaceKind::P1Vec, mb);
  for (int v = 0; v < mb.n_verts(); ++v) {
    ub.values[2 * v] = 1.0;
    ub.values[2 * v + 1] = 2.0;
  }
  const ErrorPair d = l2_error(pa, ua, FieldEvaluator(pb, ub));
  CHECK(d.e_p <= 1e-12);
  // |(1,2)| over area 2: sqrt(10)
  CHECK(d.e_u == doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));

  // distance of a solution to itself is identically zero
  const MixedSolution sol = solve_mixed(ma, 2.0, BcValues{}, tight(1e-10));
  REQUIRE(sol.report.converged);
  const ErrorPair z = l2_error(sol.p, sol.u, FieldEvaluator(sol.p, sol.u));
  CHECK(z.e_p == 0.0);
  CHECK(z.e_u == 0.0);

  CHECK_THROWS_AS(l2_error(pa, ub, FieldEvaluator(pb, ub)), std::invalid_argument);
}

TEST_CASE("harness: 1D mixed ladder reproduces the hand-computed errors") {
  const ExperimentConfig cfg = config_1d("mixed");
  const ConvergenceResult res = run_convergence(cfg);

  // Both rungs and the ground truth resolve the solution exactly: u is the
  // constant 1/15 everywhere and each cell pressure is the exact value at
  // the cell midpoint. The remaining e_p is the L2 distance between nested
  // midpoint interpolants of a line with slope 1/15:
  //   e^2 = n_cells * s^2 * w^3 * (k^3 - k)/12,  w = 0.25, k = h/w
  REQUIRE(res.rows.size() == 2);
  REQUIRE(res.rates.size() == 1);
  CHECK(res.rows[0].h == 1.0);
  CHECK(res.rows[1].h == 0.5);
  CHECK(res.rows[0].dof == 21);  // 11 flux + 10 pressure dofs
  CHECK(res.rows[1].dof == 41);
  CHECK(res.rows[0].eps_mult == 0.0);
  CHECK(res.rows[0].e_p == doctest::Approx(0.0589255650988790).epsilon(1e-6));
  CHECK(res.rows[1].e_p == doctest::Approx(0.0263523138347365).epsilon(1e-6));
  CHECK(res.rows[0].e_u <= 1e-8);
  CHECK(res.rows[1].e_u <= 1e-8);
  CHECK(res.rates[0].rate_p == doctest::Approx(1.1609640474436813).epsilon(1e-5));
  CHECK(res.rows[0].time_global >= 0.0);

  // ground truth must out-resolve the ladder
  ExperimentConfig coarse = cfg;
  coarse.ground_truth_h = 0.3;
  CHECK_THROWS_AS(run_convergence(coarse), std::invalid_argument);
}

TEST_CASE("harness: convergence csv is deterministic and well-formed") {
  const ExperimentConfig cfg = config_1d("cg");

  std::ostringstream s1, s2;
  const ConvergenceResult r1 = run_convergence(cfg, nullptr, &s1);
  const ConvergenceResult r2 = run_convergence(cfg, nullptr, &s2);

  CHECK(r1.rows[0].dof == 11);  // CG dofs are vertices
  CHECK(r1.rows[1].dof == 21);
  CHECK(r1.rows[0].eps_mult == 3.0);

  const std::string t1 = s1.str(), t2 = s2.str();
  CHECK(t1.rfind("h,dof,time_global,time_sub,e_p,e_u\n", 0) == 0);
  CHECK(t1.find("# eps_mult=3.000000e+00\n") != std::string::npos);
  CHECK(t1.find("# rate eps_mult=") != std::string::npos);
  CHECK(normalize_csv(t1) == normalize_csv(t2));

  // the batch writer reproduces the streamed layout
  std::ostringstream batch;
  write_convergence_csv(batch, r1);
  CHECK(batch.str() == t1);

  // identical runs yield bitwise identical errors
  REQUIRE(r1.rows.size() == r2.rows.size());
  for (size_t i = 0; i < r1.rows.size(); ++i) {
    CHECK(r1.rows[i].e_p == r2.rows[i].e_p);
    CHECK(r1.rows[i].e_u == r2.rows[i].e_u);
  }
}

TEST_CASE("harness: spectrum study ordering and guards") {
  ExperimentConfig cfg;
  cfg.spectrum_h_mixed = 0.4;
  cfg.spectrum_h_cg = 0.25;
  cfg.spectrum_k_mixed = 5;
  cfg.spectrum_k_cg = 5;
  const std::vector<SpectrumRow> rows = run_spectrum(cfg);

  const double tfs[4] = {2e0, 2e-1, 2e-2, 2e-3};
  REQUIRE(rows.size() == 40);
  for (int grp = 0; grp < 8; ++grp) {
    const bool mixed = grp < 4;
    for (int i = 0; i < 5; ++i) {
      const SpectrumRow& r = rows[static_cast<size_t>(grp) * 5 + i];
      CHECK(r.method == (mixed ? "mixed" : "cg"));
      CHECK(r.tf == tfs[grp % 4]);
      CHECK(r.index == i + 1);
      CHECK(std::isfinite(r.lambda));
      if (i > 0) CHECK(r.lambda <= rows[static_cast<size_t>(grp) * 5 + i - 1].lambda);
    }
  }

  // the mixed extreme eigenvalue blows up as tf drops; the cg one stays put
  const double m0 = rows[0].lambda, m3 = rows[15].lambda;
  CHECK(m3 > 50.0 * m0);
  double cmin = rows[20].lambda, cmax = rows[20].lambda;
  for (int g = 0; g < 4; ++g) {
    const double l = rows[20 + 5 * g].lambda;
    cmin = std::min(cmin, l);
    cmax = std::max(cmax, l);
  }
  CHECK(cmax < 10.0 * cmin);

  ExperimentConfig big = cfg;
  big.spectrum_h_mixed = 0.02;
  CHECK_THROWS_AS(run_spectrum(big), std::invalid_argument);
}

TEST_CASE("harness: centerline sampling straddles the fault") {
  ExperimentConfig cfg;  // defaults; evaluator decides the physics
  auto m = build_mesh(cfg, 0.2);
  const FaultGeometry rigid{2, 1.0, 0.3, 0.7, 1e12};
  const CgSolution sol =
      solve_cg(*m, rigid, 3.0 * m->h_f, -1.0, BcValues{}, tight(1e-10));
  REQUIRE(sol.report.converged);
  const FieldEvaluator ev(sol.p, sol.u);

  const auto samples = sample_centerline(ev, cfg, 11);
  REQUIRE(samples.size() == 12);  // one sample replaced by the straddling pair
  for (size_t i = 1; i < samples.size(); ++i) CHECK(samples[i].x >= samples[i - 1].x);
  CHECK(samples[5].x < 1.0);
  CHECK(samples[6].x > 1.0);
  CHECK(samples[6].x - samples[5].x <= 5e-9);

  // rigid fault: the profile is the plain linear drop
  for (const auto& s : samples) {
    CHECK(std::fabs(s.p - (1.0 - 0.5 * s.x)) <= 1e-6);
    CHECK(std::fabs(s.un - 0.5) <= 1e-6);
  }

  CHECK_THROWS_AS(sample_centerline(ev, cfg, 1), std::invalid_argument);
}

TEST_CASE("harness: centerline shows the pressure jump at low tf") {
  ExperimentConfig cfg;
  cfg.fault.tf = 0.02;
  auto m = build_mesh(cfg, 0.2);
  const MixedSolution sol = solve_mixed(*m, cfg.fault.tf, BcValues{}, tight(1e-10));
  REQUIRE(sol.report.converged);
  const FieldEvaluator ev(sol.p, sol.u);

  const auto samples = sample_centerline(ev, cfg, 21);
  REQUIRE(samples.size() == 22);

  // the largest consecutive drop is the fault pair, and it is a real jump
  size_t arg = 1;
  double best = 0.0;
  for (size_t i = 1; i < samples.size(); ++i) {
    const double d = std::fabs(samples[i].p - samples[i - 1].p);
    if (d > best) {
      best = d;
      arg = i;
    }
  }
  CHECK(samples[arg - 1].x < 1.0);
  CHECK(samples[arg].x > 1.0);
  CHECK(samples[arg - 1].p - samples[arg].p > 0.2);

  // the mixed normal velocity is continuous across the fault
  CHECK(std::fabs(samples[arg - 1].un - samples[arg].un) <= 1e-6);
}
