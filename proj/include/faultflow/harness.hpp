#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "faultflow/correct.hpp"
#include "faultflow/eigensolve.hpp"

namespace faultflow {

struct ExperimentConfig {
  int dim = 2;
  double Lx = 2.0, Ly = 1.0;  // 1D: Lx is the interval length
  FaultGeometry fault{2, 1.0, 0.3, 0.7, 2.0};
  BcValues bc;
  std::string method = "cg+correction";  // mixed | cg | cg+correction
  std::vector<double> h_ladder{1e-1, 5e-2, 2.5e-2};
  std::vector<double> eps_mult{3.0};  // epsilon as multiples of h_f
  double eps_tau_mult = -1.0;         // <0: eps_tau = eps
  double ground_truth_h = 6.25e-3;
  GmresOptions solver;
  double ls_factor = 20.0;  // halo half-width target L_s = ls_factor*h_f
  // spectrum study knobs
  double spectrum_h_mixed = 0.2, spectrum_h_cg = 0.1;
  int spectrum_k_mixed = 80, spectrum_k_cg = 1000;
  double spectrum_eps_mult = 3.0;
  std::string out_dir = ".";

  void validate() const;
};

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_json_file(const std::string& path);

// L_s = ls_factor*h_f, capped away from the domain boundary and snapped so
// the gap between halo and boundary is a whole number of h_f cells (keeps
// the grading ratio bounded on short segments).
double subdomain_halfwidth(const ExperimentConfig& cfg, double h_f);

// ladder/ground-truth mesh for target spacing h (h_f = 0.4*h in 2D)
std::shared_ptr<Mesh> build_mesh(const ExperimentConfig& cfg, double h);

// Uniform view over the three solution flavors for error integration.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual double p(Vec2 x) const = 0;
  virtual Vec2 u(Vec2 x) const = 0;
  virtual void sample(Vec2 x, double& p, Vec2& u) const;
};

class FieldEvaluator : public Evaluator {
 public:
  FieldEvaluator(const Field& p, const Field& u);
  double p(Vec2 x) const override;
  Vec2 u(Vec2 x) const override;
  void sample(Vec2 x, double& p, Vec2& u) const override;

 private:
  const Field *p_, *u_;
  PointLocator loc_;
};

// Piecewise selection: corrected fields on subdomain cells, the global CG
// fields elsewhere.
class CompositeEvaluator : public Evaluator {
 public:
  explicit CompositeEvaluator(const CompositeSolution& cs);
  double p(Vec2 x) const override;
  Vec2 u(Vec2 x) const override;
  void sample(Vec2 x, double& p, Vec2& u) const override;

 private:
  const CompositeSolution* cs_;
  PointLocator loc_;
};

struct ErrorPair {
  double e_p = 0.0, e_u = 0.0;
};

// L2 distances integrated with a degree-`degree` rule over the reference
// mesh; the approximate solution is evaluated through point location.
ErrorPair l2_error(const Field& p_ref, const Field& u_ref, const Evaluator& approx,
                   int degree = 4);

// least-squares slope of log(e) against log(h)
double estimate_rate(const std::vector<double>& h, const std::vector<double>& e);

struct GroundTruth {
  std::shared_ptr<Mesh> mesh;
  MixedSolution sol;
};
GroundTruth solve_ground_truth(const ExperimentConfig& cfg);

struct ErrorRow {
  double h = 0.0;
  double eps_mult = 0.0;  // 0 for mixed rows
  int dof = 0;
  double time_global = 0.0, time_sub = 0.0;
  double e_p = 0.0, e_u = 0.0;
};

struct RateEntry {
  double eps_mult;
  double rate_p, rate_u;
};

struct ConvergenceResult {
  std::vector<ErrorRow> rows;
  std::vector<RateEntry> rates;
};

// Ladder study against a mixed ground truth (solved here unless supplied).
// When csv is given, header and rows stream out as they complete, so a
// failing sub-solve still leaves a flushed partial table behind.
ConvergenceResult run_convergence(const ExperimentConfig& cfg,
                                  const GroundTruth* gt = nullptr,
                                  std::ostream* csv = nullptr);

// header h,dof,time_global,time_sub,e_p,e_u; %.6e columns; rates appended
// as comment lines
void write_convergence_csv(std::ostream& os, const ConvergenceResult& res);

struct SpectrumRow {
  std::string method;
  double tf;
  int index;  // 1-based, descending eigenvalue
  double lambda;
};
// Largest eigenvalues of the symmetrized system matrices on small fixed
// meshes, for tf in {2e0, 2e-1, 2e-2, 2e-3}.
std::vector<SpectrumRow> run_spectrum(const ExperimentConfig& cfg);
void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumRow>& rows);

struct CenterlineSample {
  double x, p, un;
};
// Profile along y = Ly/2 (the x-axis in 1D); a sample landing on the fault
// is replaced by a pair at xg -/+ 1e-9*Lx.
std::vector<CenterlineSample> sample_centerline(const Evaluator& ev,
                                                const ExperimentConfig& cfg, int n);
void write_centerline_csv(std::ostream& os, const std::vector<CenterlineSample>& rows);

}  // namespace faultflow
