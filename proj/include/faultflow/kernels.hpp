#pragma once

#include <cstddef>

// Hot vector loops behind the sparse solvers: dot/axpy/scal and CSR matvec.
// A scalar reference implementation always exists; on x86 an AVX2+FMA variant
// (and on aarch64 a NEON variant) is selected once at startup. Tests pin the
// backend explicitly and cross-check the variants against the scalar path.
namespace faultflow::kernels {

enum class Backend { scalar, avx2, neon };

const char* backend_name(Backend b);
Backend active_backend();
Backend best_backend();
// Throws std::invalid_argument if the requested backend is not available on
// this machine.
void set_backend(Backend b);

double dot(const double* a, const double* b, std::size_t n);
double nrm2(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scal(double alpha, double* x, std::size_t n);
void csr_spmv(const int* rowptr, const int* colidx, const double* vals,
              std::size_t nrows, const double* x, double* y);

namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void scal_scalar(double alpha, double* x, std::size_t n);
void spmv_scalar(const int* rowptr, const int* colidx, const double* vals,
                 std::size_t nrows, const double* x, double* y);

#if defined(__x86_64__) || defined(_M_X64)
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void scal_avx2(double alpha, double* x, std::size_t n);
void spmv_avx2(const int* rowptr, const int* colidx, const double* vals,
               std::size_t nrows, const double* x, double* y);
#endif
#if defined(__aarch64__)
double dot_neon(const double* a, const double* b, std::size_t n);
void axpy_neon(double alpha, const double* x, double* y, std::size_t n);
void scal_neon(double alpha, double* x, std::size_t n);
void spmv_neon(const int* rowptr, const int* colidx, const double* vals,
               std::size_t nrows, const double* x, double* y);
#endif
}  // namespace detail

}  // namespace faultflow::kernels
