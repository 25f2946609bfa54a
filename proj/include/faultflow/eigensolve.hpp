#pragma once

#include <vector>

#include "faultflow/sparse.hpp"

namespace faultflow {

// All eigenvalues of the symmetric part (A + A^T)/2, ascending. Dense path
// (LAPACK dsyev); guarded to n <= 5000.
std::vector<double> sym_eigenvalues(const CsrMatrix& A);

// k largest (descending) or smallest (ascending) eigenvalues of (A + A^T)/2.
std::vector<double> eigs_extreme(const CsrMatrix& A, int k, bool largest = true);

}  // namespace faultflow
