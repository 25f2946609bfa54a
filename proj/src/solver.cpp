#include "faultflow/solver.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "faultflow/kernels.hpp"

namespace faultflow {

namespace {

int find_in_row(const std::vector<int>& colidx, int lo, int hi, int col) {
  auto b = colidx.begin() + lo, e = colidx.begin() + hi;
  auto it = std::lower_bound(b, e, col);
  if (it != e && *it == col) return static_cast<int>(it - colidx.begin());
  return -1;
}

}  // namespace

Ilu0::Ilu0(const CsrMatrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("ILU(0) needs a square matrix");
  n_ = A.rows();

  bool missing_diag = false;
  for (int i = 0; i < n_ && !missing_diag; ++i)
    if (find_in_row(A.colidx(), A.rowptr()[i], A.rowptr()[i + 1], i) < 0)
      missing_diag = true;

  if (!missing_diag) {
    rowptr_ = A.rowptr();
    colidx_ = A.colidx();
    vals_ = A.vals();
  } else {
    // pattern fallback: refit with explicit diagonal so the pivot is storable
    Triplets t;
    for (int i = 0; i < n_; ++i)
      for (int k = A.rowptr()[i]; k < A.rowptr()[i + 1]; ++k)
        t.add(i, A.colidx()[k], A.vals()[k]);
    CsrMatrix B = CsrMatrix::from_triplets(n_, n_, t, /*force_diagonal=*/true);
    rowptr_ = B.rowptr();
    colidx_ = B.colidx();
    vals_ = B.vals();
  }

  diag_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    diag_[i] = find_in_row(colidx_, rowptr_[i], rowptr_[i + 1], i);
    assert(diag_[i] >= 0);
  }

  const double amax = A.max_abs();
  const double tiny = std::max(1e-13 * amax, 1e-300);
  const double shift = std::max(1e-8 * amax, 1e-12);

  for (int i = 0; i < n_; ++i) {
    for (int kp = rowptr_[i]; kp < rowptr_[i + 1] && colidx_[kp] < i; ++kp) {
      const int k = colidx_[kp];
      vals_[kp] /= vals_[diag_[k]];
      const double lik = vals_[kp];
      for (int jp = diag_[k] + 1; jp < rowptr_[k + 1]; ++jp) {
        const int pos = find_in_row(colidx_, kp + 1, rowptr_[i + 1], colidx_[jp]);
        if (pos >= 0) vals_[pos] -= lik * vals_[jp];
      }
    }
    double& piv = vals_[diag_[i]];
    if (std::fabs(piv) <= tiny) {
      piv = (piv < 0.0) ? -shift : shift;
      ++shift_count_;
    }
  }
}

void Ilu0::apply(const double* r, double* z) const {
  // L has unit diagonal; strictly-lower entries sit left of diag_[i]
  for (int i = 0; i < n_; ++i) {
    double s = r[i];
    for (int k = rowptr_[i]; k < diag_[i]; ++k) s -= vals_[k] * z[colidx_[k]];
    z[i] = s;
  }
  for (int i = n_ - 1; i >= 0; --i) {
    double s = z[i];
    for (int k = diag_[i] + 1; k < rowptr_[i + 1]; ++k) s -= vals_[k] * z[colidx_[k]];
    z[i] = s / vals_[diag_[i]];
  }
}

namespace {

// threaded wrappers over the dispatched kernels for solver-sized vectors.
// chunk boundaries are fixed by n alone and partials combine in chunk order,
// so results do not depend on the thread count.
constexpr std::size_t kChunk = std::size_t{1} << 13;

double pdot(const double* a, const double* b, std::size_t n) {
  if (n < 2 * kChunk) return kernels::dot(a, b, n);
  const long nch = static_cast<long>((n + kChunk - 1) / kChunk);
  std::vector<double> part(nch);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < nch; ++c) {
    const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
    part[c] = kernels::dot(a + lo, b + lo, hi - lo);
  }
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

double pnrm2(const double* a, std::size_t n) { return std::sqrt(pdot(a, a, n)); }

void paxpy(double alpha, const double* x, double* y, std::size_t n) {
  if (n < 2 * kChunk) {
    kernels::axpy(alpha, x, y, n);
    return;
  }
  const long nch = static_cast<long>((n + kChunk - 1) / kChunk);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < nch; ++c) {
    const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
    kernels::axpy(alpha, x + lo, y + lo, hi - lo);
  }
}

void pspmv(const CsrMatrix& A, const double* x, double* y) {
  const std::size_t n = A.rows();
  if (n < 2 * kChunk) {
    A.matvec(x, y);
    return;
  }
  const int* rowptr = A.rowptr().data();
  const int* colidx = A.colidx().data();
  const double* vals = A.vals().data();
  const long nch = static_cast<long>((n + kChunk - 1) / kChunk);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < nch; ++c) {
    const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
    kernels::csr_spmv(rowptr + lo, colidx, vals, hi - lo, x, y + lo);
  }
}

void givens(double a, double b, double& c, double& s) {
  const double r = std::hypot(a, b);
  if (r == 0.0) {
    c = 1.0;
    s = 0.0;
  } else {
    c = a / r;
    s = b / r;
  }
}

}  // namespace

SolveReport gmres(const CsrMatrix& A, const std::vector<double>& b,
                  std::vector<double>& x, const Ilu0* M, const GmresOptions& opt) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  if (A.rows() != A.cols()) throw std::invalid_argument("gmres needs a square matrix");
  const int n = A.rows();
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("rhs size mismatch");
  if (opt.restart < 1 || opt.tol_abs <= 0.0) throw std::invalid_argument("bad gmres options");

  const long max_iter = opt.max_iter > 0 ? opt.max_iter : 50L * std::max(n, 1);
  const int m = opt.restart;

  SolveReport rep;
  std::vector<double> r(b);
  if (static_cast<int>(x.size()) == n) {
    std::vector<double> Ax(n);
    pspmv(A, x.data(), Ax.data());
    paxpy(-1.0, Ax.data(), r.data(), n);
  } else {
    x.assign(n, 0.0);
  }
  double beta = pnrm2(r.data(), n);
  if (beta <= opt.tol_abs) {
    rep.converged = true;
    rep.residual = beta;
    rep.wall_time_s = std::chrono::duration<double>(clock::now() - t0).count();
    return rep;
  }

  std::vector<std::vector<double>> V;
  std::vector<double> H(static_cast<std::size_t>(m + 1) * m, 0.0);
  auto Hat = [&](int i, int j) -> double& { return H[static_cast<std::size_t>(j) * (m + 1) + i]; };
  std::vector<double> cs(m), sn(m), g(m + 1);
  std::vector<double> w(n), z(n);

  bool exhausted = false;
  bool stagnated = false;
  double prev_beta = -1.0;
  int stalled = 0;
  while (true) {
    // restart cycle; r holds b - Ax
    beta = pnrm2(r.data(), n);
    if (beta <= opt.tol_abs) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= max_iter || exhausted) break;
    // a cycle that barely moves the true residual means the rounding floor
    // sits above tol_abs; more restarts cannot help
    if (prev_beta >= 0.0) {
      stalled = beta > 0.99 * prev_beta ? stalled + 1 : 0;
      if (stalled >= 2) {
        stagnated = true;
        break;
      }
    }
    prev_beta = beta;

    std::fill(H.begin(), H.end(), 0.0);
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    if (V.empty()) V.emplace_back(n);
    std::copy(r.begin(), r.end(), V[0].begin());
    kernels::scal(1.0 / beta, V[0].data(), n);

    int j = 0;
    int cols = 0;
    for (; j < m && rep.iterations < max_iter; ++j) {
      ++rep.iterations;
      const double* vj = V[j].data();
      if (M) {
        M->apply(vj, z.data());
        pspmv(A, z.data(), w.data());
      } else {
        pspmv(A, vj, w.data());
      }
      for (int i = 0; i <= j; ++i) {
        const double h = pdot(V[i].data(), w.data(), n);
        Hat(i, j) = h;
        paxpy(-h, V[i].data(), w.data(), n);
      }
      const double h1 = pnrm2(w.data(), n);
      Hat(j + 1, j) = h1;
      if (static_cast<int>(V.size()) < j + 2) V.emplace_back(n);
      if (h1 > 0.0) {
        std::copy(w.begin(), w.end(), V[j + 1].begin());
        kernels::scal(1.0 / h1, V[j + 1].data(), n);
      }

      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * Hat(i, j) + sn[i] * Hat(i + 1, j);
        Hat(i + 1, j) = -sn[i] * Hat(i, j) + cs[i] * Hat(i + 1, j);
        Hat(i, j) = t;
      }
      givens(Hat(j, j), Hat(j + 1, j), cs[j], sn[j]);
      Hat(j, j) = cs[j] * Hat(j, j) + sn[j] * Hat(j + 1, j);
      Hat(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];

      cols = j + 1;
      if (h1 == 0.0) {
        exhausted = true;  // Krylov space closed; best solution is in hand
        ++j;
        break;
      }
      if (std::fabs(g[j + 1]) <= opt.tol_abs) {
        ++j;
        break;
      }
    }

    // y = argmin ||g - H y||, upper triangular back substitution
    std::vector<double> y(cols, 0.0);
    for (int i = cols - 1; i >= 0; --i) {
      double s = g[i];
      for (int k = i + 1; k < cols; ++k) s -= Hat(i, k) * y[k];
      y[i] = (std::fabs(Hat(i, i)) > 0.0) ? s / Hat(i, i) : 0.0;
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (int i = 0; i < cols; ++i) paxpy(y[i], V[i].data(), w.data(), n);
    if (M) {
      M->apply(w.data(), z.data());
      paxpy(1.0, z.data(), x.data(), n);
    } else {
      paxpy(1.0, w.data(), x.data(), n);
    }

    pspmv(A, x.data(), w.data());
    std::copy(b.begin(), b.end(), r.begin());
    paxpy(-1.0, w.data(), r.data(), n);
  }

  rep.residual = pnrm2(r.data(), n);
  rep.converged = rep.residual <= opt.tol_abs;
  if (!rep.converged)
    rep.message = stagnated  ? "residual stagnated before reaching tolerance"
                  : exhausted ? "krylov space exhausted before reaching tolerance"
                              : "iteration limit reached";
  rep.wall_time_s = std::chrono::duration<double>(clock::now() - t0).count();
  return rep;
}

}  // namespace faultflow
