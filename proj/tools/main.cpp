#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "faultflow/harness.hpp"
#include "faultflow/kernels.hpp"
#include "faultflow/vtk.hpp"
#include "json.hpp"

namespace ff = faultflow;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  double h = -1.0;
  double tf = -1.0;
  double eps_mult = -1.0;
  int samples = 401;
  bool dump_system = false;
};

ff::ExperimentConfig load_config(const Options& o) {
  ff::ExperimentConfig cfg;
  if (!o.config_path.empty()) cfg = ff::config_from_json_file(o.config_path);
  if (o.tf > 0.0) cfg.fault.tf = o.tf;
  if (o.h > 0.0) cfg.h_ladder = {o.h};
  if (o.eps_mult > 0.0) cfg.eps_mult = {o.eps_mult};
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  cfg.validate();
  return cfg;
}

fs::path ensure_out(const ff::ExperimentConfig& cfg) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_report(const fs::path& path, const char* method,
                  const ff::ExperimentConfig& cfg, double h, int dof,
                  const ff::SolveReport& global, const ff::SolveReport* sub) {
  nlohmann::json j;
  j["method"] = method;
  j["h"] = h;
  j["tf"] = cfg.fault.tf;
  j["dof"] = dof;
  j["converged"] = global.converged && (sub == nullptr || sub->converged);
  j["global"] = {{"converged", global.converged},
                 {"iterations", global.iterations},
                 {"residual", global.residual},
                 {"wall_time_s", global.wall_time_s},
                 {"message", global.message}};
  if (sub != nullptr)
    j["sub"] = {{"converged", sub->converged},
                {"iterations", sub->iterations},
                {"residual", sub->residual},
                {"wall_time_s", sub->wall_time_s},
                {"message", sub->message}};
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

void dump_vector(const fs::path& path, const std::vector<double>& v) {
  std::ofstream out(path);
  char buf[64];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    out << buf;
  }
}

void check(const ff::SolveReport& rep, const char* what) {
  if (!rep.converged)
    throw std::runtime_error(std::string(what) + " failed: " + rep.message);
}

std::string brief(const ff::SolveReport& rep) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%ld iterations, residual %.3e", rep.iterations,
                rep.residual);
  return buf;
}

int cmd_solve_mixed(const Options& o) {
  ff::ExperimentConfig cfg = load_config(o);
  fs::path dir = ensure_out(cfg);
  double h = cfg.h_ladder.front();
  auto mesh = ff::build_mesh(cfg, h);

  if (o.dump_system) {
    ff::MixedBc mbc;
    for (int F = 0; F < mesh->n_facets(); ++F) {
      const ff::Facet& ft = mesh->facets[F];
      if (ft.tag == ff::FacetTag::dirichlet)
        mbc.dirichlet_mean.emplace(F, cfg.bc.value(ft.bc_id));
      else if (ft.tag == ff::FacetTag::neumann)
        mbc.pinned_flux.emplace(F, 0.0);
    }
    ff::MixedSystem sys = ff::assemble_mixed_system(*mesh, cfg.fault.tf, {}, mbc);
    ff::write_matrix_market((dir / "mixed_A.mtx").string(), sys.A);
    dump_vector(dir / "mixed_rhs.txt", sys.rhs);
  }

  ff::MixedSolution sol = ff::solve_mixed(*mesh, cfg.fault.tf, cfg.bc, cfg.solver);
  write_report(dir / "report.json", "mixed", cfg, h, mesh->n_facets() + mesh->n_cells(),
               sol.report, nullptr);
  check(sol.report, "mixed solve");

  ff::write_mesh_vtk((dir / "mesh.vtk").string(), *mesh);
  ff::write_cell_scalar_vtk((dir / "p.vtk").string(), *mesh, "p", sol.p.values);
  std::vector<ff::Vec2> uc(mesh->n_cells());
  for (int c = 0; c < mesh->n_cells(); ++c)
    uc[c] = ff::eval_vector(sol.u, c, mesh->centroid(c));
  ff::write_cell_vector_vtk((dir / "u.vtk").string(), *mesh, "u", uc);
  std::cout << "mixed solve: " << brief(sol.report) << ", outputs in " << dir.string()
            << "\n";
  return 0;
}

int cmd_solve_new(const Options& o) {
  ff::ExperimentConfig cfg = load_config(o);
  fs::path dir = ensure_out(cfg);
  double h = cfg.h_ladder.front();
  std::shared_ptr<ff::Mesh> mesh = ff::build_mesh(cfg, h);
  double base = (mesh->dim == 2) ? mesh->h_f : mesh->h;
  double eps = cfg.eps_mult.front() * base;
  double eps_tau = cfg.eps_tau_mult < 0.0 ? eps : cfg.eps_tau_mult * base;
  bool correct = cfg.dim == 2 && cfg.method != "cg";

  if (o.dump_system) {
    ff::RegDelta delta(cfg.fault, eps, eps_tau);
    std::vector<double> rhs;
    ff::CsrMatrix B = ff::assemble_cg_operator(*mesh, &delta, cfg.fault.tf, cfg.bc, rhs);
    ff::write_matrix_market((dir / "cg_A.mtx").string(), B);
    dump_vector(dir / "cg_rhs.txt", rhs);
  }

  ff::write_mesh_vtk((dir / "mesh.vtk").string(), *mesh);
  if (correct) {
    ff::CompositeSolution comp =
        ff::solve_corrected(mesh, cfg.fault, eps, eps_tau, cfg.bc, cfg.solver);
    write_report(dir / "report.json", "cg+correction", cfg, h, mesh->n_verts(),
                 comp.global.report, &comp.sub_report);
    check(comp.global.report, "cg solve");
    check(comp.sub_report, "correction solve");
    ff::write_point_scalar_vtk((dir / "p.vtk").string(), *mesh, "p",
                               comp.global.p.values);
    ff::write_point_vector_vtk((dir / "u.vtk").string(), *mesh, "u",
                               comp.global.u.values);
    ff::write_mesh_vtk((dir / "sub_mesh.vtk").string(), comp.sub->mesh);
    ff::write_cell_scalar_vtk((dir / "sub_p.vtk").string(), comp.sub->mesh, "p",
                              comp.sub_p.values);
    std::vector<ff::Vec2> uc(comp.sub->mesh.n_cells());
    for (int c = 0; c < comp.sub->mesh.n_cells(); ++c)
      uc[c] = ff::eval_vector(comp.sub_u, c, comp.sub->mesh.centroid(c));
    ff::write_cell_vector_vtk((dir / "sub_u.vtk").string(), comp.sub->mesh, "u", uc);
    std::cout << "cg+correction solve: " << brief(comp.global.report) << " / "
              << brief(comp.sub_report) << ", outputs in " << dir.string() << "\n";
  } else {
    ff::CgSolution cs = ff::solve_cg(*mesh, cfg.fault, eps, eps_tau, cfg.bc, cfg.solver);
    write_report(dir / "report.json", "cg", cfg, h, mesh->n_verts(), cs.report, nullptr);
    check(cs.report, "cg solve");
    ff::write_point_scalar_vtk((dir / "p.vtk").string(), *mesh, "p", cs.p.values);
    ff::write_point_vector_vtk((dir / "u.vtk").string(), *mesh, "u", cs.u.values);
    std::cout << "cg solve: " << brief(cs.report) << ", outputs in " << dir.string()
              << "\n";
  }
  return 0;
}

int cmd_converge(const Options& o) {
  ff::ExperimentConfig cfg = load_config(o);
  fs::path dir = ensure_out(cfg);
  std::ofstream out(dir / "errors.csv");
  ff::ConvergenceResult res = ff::run_convergence(cfg, nullptr, &out);
  ff::write_convergence_csv(std::cout, res);
  return 0;
}

int cmd_spectrum(const Options& o) {
  ff::ExperimentConfig cfg = load_config(o);
  fs::path dir = ensure_out(cfg);
  std::vector<ff::SpectrumRow> rows = ff::run_spectrum(cfg);
  std::ofstream out(dir / "spectrum.csv");
  ff::write_spectrum_csv(out, rows);
  std::cout << "spectrum: " << rows.size() << " eigenvalues written to "
            << (dir / "spectrum.csv").string() << "\n";
  return 0;
}

int cmd_centerline(const Options& o) {
  ff::ExperimentConfig cfg = load_config(o);
  fs::path dir = ensure_out(cfg);
  double h = cfg.h_ladder.front();
  std::shared_ptr<ff::Mesh> mesh = ff::build_mesh(cfg, h);
  std::vector<ff::CenterlineSample> rows;
  if (cfg.method == "mixed") {
    ff::MixedSolution sol = ff::solve_mixed(*mesh, cfg.fault.tf, cfg.bc, cfg.solver);
    check(sol.report, "mixed solve");
    ff::FieldEvaluator ev(sol.p, sol.u);
    rows = ff::sample_centerline(ev, cfg, o.samples);
  } else {
    double base = (mesh->dim == 2) ? mesh->h_f : mesh->h;
    double eps = cfg.eps_mult.front() * base;
    double eps_tau = cfg.eps_tau_mult < 0.0 ? eps : cfg.eps_tau_mult * base;
    if (cfg.method == "cg+correction") {
      ff::CompositeSolution comp =
          ff::solve_corrected(mesh, cfg.fault, eps, eps_tau, cfg.bc, cfg.solver);
      check(comp.global.report, "cg solve");
      check(comp.sub_report, "correction solve");
      ff::CompositeEvaluator ev(comp);
      rows = ff::sample_centerline(ev, cfg, o.samples);
    } else {
      ff::CgSolution cs =
          ff::solve_cg(*mesh, cfg.fault, eps, eps_tau, cfg.bc, cfg.solver);
      check(cs.report, "cg solve");
      ff::FieldEvaluator ev(cs.p, cs.u);
      rows = ff::sample_centerline(ev, cfg, o.samples);
    }
  }
  std::ofstream out(dir / "centerline.csv");
  ff::write_centerline_csv(out, rows);
  std::cout << "centerline: " << rows.size() << " samples written to "
            << (dir / "centerline.csv").string() << "\n";
  return 0;
}

void add_common(CLI::App* sub, Options& o) {
  sub->set_help_flag("--help", "print this help message and exit");  // frees -h for --h
  sub->add_option("--config", o.config_path, "JSON experiment config");
  sub->add_option("--out", o.out_dir, "output directory (overrides config)");
  sub->add_option("--h", o.h, "mesh spacing (overrides the config ladder)");
  sub->add_option("--tf", o.tf, "fault transmissibility override");
  sub->add_option("--eps-mult", o.eps_mult, "epsilon as a multiple of h_f");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Darcy flow with an immersed fault: mixed and regularized solvers"};
  app.require_subcommand(1);
  Options o;

  CLI::App* sm = app.add_subcommand("solve-mixed", "reference mixed RT0xP0 solve");
  add_common(sm, o);
  sm->add_flag("--dump-system", o.dump_system, "write system matrix and rhs");

  CLI::App* sn = app.add_subcommand("solve-new", "regularized solve (with correction in 2D)");
  add_common(sn, o);
  sn->add_flag("--dump-system", o.dump_system, "write system matrix and rhs");

  CLI::App* cv = app.add_subcommand("converge", "h-ladder study against a mixed ground truth");
  add_common(cv, o);

  CLI::App* sp = app.add_subcommand("spectrum", "eigenvalue study across tf");
  add_common(sp, o);

  CLI::App* cl = app.add_subcommand("centerline", "profile along the domain centerline");
  add_common(cl, o);
  cl->add_option("--samples", o.samples, "number of samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sm->parsed()) return cmd_solve_mixed(o);
    if (sn->parsed()) return cmd_solve_new(o);
    if (cv->parsed()) return cmd_converge(o);
    if (sp->parsed()) return cmd_spectrum(o);
    if (cl->parsed()) return cmd_centerline(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
