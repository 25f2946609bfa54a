#include "faultflow/kernels.hpp"

#include <cmath>
#include <stdexcept>

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace faultflow::kernels {

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void spmv_scalar(const int* rowptr, const int* colidx, const double* vals,
                 std::size_t nrows, const double* x, double* y) {
  for (std::size_t r = 0; r < nrows; ++r) {
    double s = 0.0;
    for (int k = rowptr[r]; k < rowptr[r + 1]; ++k) s += vals[k] * x[colidx[k]];
    y[r] = s;
  }
}

#if defined(__aarch64__)
double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal_neon(double alpha, double* x, std::size_t n) {
  float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

void spmv_neon(const int* rowptr, const int* colidx, const double* vals,
               std::size_t nrows, const double* x, double* y) {
  for (std::size_t r = 0; r < nrows; ++r) {
    int k = rowptr[r];
    const int end = rowptr[r + 1];
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; k + 2 <= end; k += 2) {
      float64x2_t xv = {x[colidx[k]], x[colidx[k + 1]]};
      acc = vfmaq_f64(acc, vld1q_f64(vals + k), xv);
    }
    double s = vaddvq_f64(acc);
    for (; k < end; ++k) s += vals[k] * x[colidx[k]];
    y[r] = s;
  }
}
#endif

}  // namespace detail

namespace {

struct Dispatch {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
  void (*spmv)(const int*, const int*, const double*, std::size_t,
               const double*, double*);
};

constexpr Dispatch kScalar{detail::dot_scalar, detail::axpy_scalar,
                           detail::scal_scalar, detail::spmv_scalar};
#if defined(__x86_64__) || defined(_M_X64)
constexpr Dispatch kAvx2{detail::dot_avx2, detail::axpy_avx2,
                         detail::scal_avx2, detail::spmv_avx2};
#endif
#if defined(__aarch64__)
constexpr Dispatch kNeon{detail::dot_neon, detail::axpy_neon,
                         detail::scal_neon, detail::spmv_neon};
#endif

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const Dispatch& table_for(Backend b) {
  switch (b) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2:
      return kAvx2;
#endif
#if defined(__aarch64__)
    case Backend::neon:
      return kNeon;
#endif
    default:
      return kScalar;
  }
}

Backend g_backend = [] {
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}();
const Dispatch* g_table = &table_for(g_backend);

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "?";
}

Backend active_backend() { return g_backend; }

Backend best_backend() {
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

void set_backend(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument(std::string("kernel backend not available: ") +
                                backend_name(b));
  g_backend = b;
  g_table = &table_for(b);
}

double dot(const double* a, const double* b, std::size_t n) {
  return g_table->dot(a, b, n);
}

double nrm2(const double* a, std::size_t n) {
  return std::sqrt(g_table->dot(a, a, n));
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  g_table->axpy(alpha, x, y, n);
}

void scal(double alpha, double* x, std::size_t n) {
  g_table->scal(alpha, x, n);
}

void csr_spmv(const int* rowptr, const int* colidx, const double* vals,
              std::size_t nrows, const double* x, double* y) {
  g_table->spmv(rowptr, colidx, vals, nrows, x, y);
}

}  // namespace faultflow::kernels
