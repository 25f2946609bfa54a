#pragma once

#include <string>
#include <vector>

#include "faultflow/sparse.hpp"

namespace faultflow {

struct SolveReport {
  bool converged = false;
  long iterations = 0;
  double residual = 0.0;  // final true residual ||b - Ax||_2
  double wall_time_s = 0.0;
  std::string message;
};

struct GmresOptions {
  double tol_abs = 1e-8;
  int restart = 200;
  long max_iter = -1;  // -1: 50 * n
};

// ILU(0): incomplete factorization on the sparsity pattern of A. Rows must
// contain their diagonal entry (assemble with force_diagonal for saddle
// systems); a vanishing pivot is replaced by a small shift and flagged.
class Ilu0 {
 public:
  explicit Ilu0(const CsrMatrix& A);

  // z = (LU)^{-1} r
  void apply(const double* r, double* z) const;

  bool shifted() const { return shift_count_ > 0; }
  int shift_count() const { return shift_count_; }

 private:
  int n_ = 0;
  std::vector<int> rowptr_, colidx_, diag_;
  std::vector<double> vals_;
  int shift_count_ = 0;
};

// Restarted GMRES, right-preconditioned when M is given. When x enters sized
// like b it is taken as the initial guess, otherwise the zero start is used.
// Stops on ||b - Ax||_2 <= tol_abs (verified against the true residual at
// each restart boundary).
SolveReport gmres(const CsrMatrix& A, const std::vector<double>& b,
                  std::vector<double>& x, const Ilu0* M,
                  const GmresOptions& opt = {});

}  // namespace faultflow
