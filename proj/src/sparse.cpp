#include "faultflow/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "faultflow/kernels.hpp"

namespace faultflow {

CsrMatrix CsrMatrix::from_triplets(int nrows, int ncols, const Triplets& t,
                                   bool force_diagonal) {
  if (nrows < 0 || ncols < 0) throw std::invalid_argument("negative matrix size");
  if (force_diagonal && nrows != ncols)
    throw std::invalid_argument("force_diagonal requires a square matrix");

  const std::size_t nt = t.size();
  for (std::size_t k = 0; k < nt; ++k) {
    if (t.rows[k] < 0 || t.rows[k] >= nrows || t.cols[k] < 0 || t.cols[k] >= ncols)
      throw std::invalid_argument("triplet index out of range");
  }

  std::vector<std::size_t> order(nt);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (t.rows[a] != t.rows[b]) return t.rows[a] < t.rows[b];
    return t.cols[a] < t.cols[b];
  });

  CsrMatrix A;
  A.nrows_ = nrows;
  A.ncols_ = ncols;
  A.rowptr_.assign(nrows + 1, 0);
  A.colidx_.reserve(nt + (force_diagonal ? nrows : 0));
  A.vals_.reserve(nt + (force_diagonal ? nrows : 0));

  std::size_t k = 0;
  for (int r = 0; r < nrows; ++r) {
    bool has_diag = false;
    while (k < nt && t.rows[order[k]] == r) {
      const int c = t.cols[order[k]];
      if (force_diagonal && !has_diag && c >= r) {
        if (c > r) {
          A.colidx_.push_back(r);
          A.vals_.push_back(0.0);
        }
        has_diag = true;
      }
      double v = 0.0;
      while (k < nt && t.rows[order[k]] == r && t.cols[order[k]] == c)
        v += t.vals[order[k++]];
      A.colidx_.push_back(c);
      A.vals_.push_back(v);
    }
    if (force_diagonal && !has_diag) {
      A.colidx_.push_back(r);
      A.vals_.push_back(0.0);
    }
    A.rowptr_[r + 1] = static_cast<int>(A.colidx_.size());
  }
  return A;
}

void CsrMatrix::matvec(const double* x, double* y) const {
  kernels::csr_spmv(rowptr_.data(), colidx_.data(), vals_.data(),
                    static_cast<std::size_t>(nrows_), x, y);
}

std::vector<double> CsrMatrix::matvec(const std::vector<double>& x) const {
  assert(static_cast<int>(x.size()) == ncols_);
  std::vector<double> y(nrows_);
  matvec(x.data(), y.data());
  return y;
}

double CsrMatrix::value_at(int i, int j) const {
  assert(i >= 0 && i < nrows_);
  const auto b = colidx_.begin() + rowptr_[i];
  const auto e = colidx_.begin() + rowptr_[i + 1];
  const auto it = std::lower_bound(b, e, j);
  if (it != e && *it == j) return vals_[it - colidx_.begin()];
  return 0.0;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : vals_) m = std::max(m, std::fabs(v));
  return m;
}

void write_matrix_market(const std::string& path, const CsrMatrix& A) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate real general\n");
  std::fprintf(f, "%d %d %zu\n", A.rows(), A.cols(), A.nnz());
  for (int r = 0; r < A.rows(); ++r)
    for (int k = A.rowptr()[r]; k < A.rowptr()[r + 1]; ++k)
      std::fprintf(f, "%d %d %.17g\n", r + 1, A.colidx()[k] + 1, A.vals()[k]);
  std::fclose(f);
}

}  // namespace faultflow
