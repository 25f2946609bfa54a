#include "faultflow/eigensolve.hpp"

#include <lapacke.h>

#include <algorithm>
#include <stdexcept>

namespace faultflow {

std::vector<double> sym_eigenvalues(const CsrMatrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("eigensolve needs a square matrix");
  const int n = A.rows();
  if (n > 5000) throw std::invalid_argument("dense eigensolve limited to n <= 5000");
  if (n == 0) return {};

  std::vector<double> full(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = A.rowptr()[i]; k < A.rowptr()[i + 1]; ++k) {
      const int j = A.colidx()[k];
      const double half = 0.5 * A.vals()[k];
      full[static_cast<std::size_t>(i) * n + j] += half;
      full[static_cast<std::size_t>(j) * n + i] += half;
    }

  std::vector<double> w(n);
  const int info = LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'N', 'U', n, full.data(), n, w.data());
  if (info != 0) throw std::runtime_error("dsyev failed, info=" + std::to_string(info));
  return w;  // ascending
}

std::vector<double> eigs_extreme(const CsrMatrix& A, int k, bool largest) {
  if (k < 1) throw std::invalid_argument("eigs_extreme: k < 1");
  std::vector<double> w = sym_eigenvalues(A);
  k = std::min<int>(k, static_cast<int>(w.size()));
  if (largest) {
    std::vector<double> out(w.end() - k, w.end());
    std::reverse(out.begin(), out.end());
    return out;
  }
  return std::vector<double>(w.begin(), w.begin() + k);
}

}  // namespace faultflow
