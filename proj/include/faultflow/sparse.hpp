#pragma once

#include <string>
#include <vector>

namespace faultflow {

// Accumulation buffer for matrix assembly; duplicate (i,j) entries sum.
struct Triplets {
  std::vector<int> rows, cols;
  std::vector<double> vals;
  void add(int i, int j, double v) {
    rows.push_back(i);
    cols.push_back(j);
    vals.push_back(v);
  }
  std::size_t size() const { return vals.size(); }
};

class CsrMatrix {
 public:
  CsrMatrix() = default;

  // force_diagonal inserts explicit zeros on structurally missing diagonal
  // entries (square matrices only); ILU(0) needs the diagonal in-pattern.
  static CsrMatrix from_triplets(int nrows, int ncols, const Triplets& t,
                                 bool force_diagonal = false);

  int rows() const { return nrows_; }
  int cols() const { return ncols_; }
  std::size_t nnz() const { return vals_.size(); }

  const std::vector<int>& rowptr() const { return rowptr_; }
  const std::vector<int>& colidx() const { return colidx_; }
  const std::vector<double>& vals() const { return vals_; }
  std::vector<double>& vals() { return vals_; }

  // y = A x
  void matvec(const double* x, double* y) const;
  std::vector<double> matvec(const std::vector<double>& x) const;

  double value_at(int i, int j) const;  // 0 if not stored

  double max_abs() const;

 private:
  int nrows_ = 0, ncols_ = 0;
  std::vector<int> rowptr_, colidx_;
  std::vector<double> vals_;
};

// Coordinate-format MatrixMarket export ("%%MatrixMarket matrix coordinate
// real general"), 1-based indices.
void write_matrix_market(const std::string& path, const CsrMatrix& A);

}  // namespace faultflow
