#include "confcurv/kernels/esf_batch.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define CONFCURV_HAVE_X86 1
#endif

namespace confcurv::kernels::avx2 {

#if CONFCURV_HAVE_X86

namespace {

// hi[s] += x[s] * lo[s]. Multiply and add stay separate (no FMA) so the result
// is bit-identical to the scalar reference.
__attribute__((target("avx2"))) void axpy_rows(double* hi, const double* x, const double* lo,
                                                std::size_t count) {
    std::size_t s = 0;
    for (; s + 4 <= count; s += 4) {
        const __m256d h = _mm256_loadu_pd(hi + s);
        const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + s), _mm256_loadu_pd(lo + s));
        _mm256_storeu_pd(hi + s, _mm256_add_pd(h, p));
    }
    for (; s < count; ++s) hi[s] = hi[s] + x[s] * lo[s];
}

__attribute__((target("avx2"))) void fill_rows(double* row, double value, std::size_t count) {
    const __m256d v = _mm256_set1_pd(value);
    std::size_t s = 0;
    for (; s + 4 <= count; s += 4) _mm256_storeu_pd(row + s, v);
    for (; s < count; ++s) row[s] = value;
}

}  // namespace

__attribute__((target("avx2"))) void esf_batch(int n, std::size_t count, const double* lambda,
                                                double* sigma) {
    fill_rows(sigma, 1.0, count);
    for (int j = 1; j <= n; ++j) fill_rows(sigma + static_cast<std::size_t>(j) * count, 0.0, count);
    for (int i = 0; i < n; ++i) {
        const double* x = lambda + static_cast<std::size_t>(i) * count;
        for (int j = i + 1; j >= 1; --j) {
            axpy_rows(sigma + static_cast<std::size_t>(j) * count, x,
                      sigma + static_cast<std::size_t>(j - 1) * count, count);
        }
    }
}

__attribute__((target("avx2"))) void esf_excluding_batch(int n, std::size_t count, const double* lambda,
                                                          double* out) {
    const auto un = static_cast<std::size_t>(n);
    for (std::size_t skip = 0; skip < un; ++skip) {
        double* table = out + skip * un * count;
        fill_rows(table, 1.0, count);
        for (std::size_t j = 1; j < un; ++j) fill_rows(table + j * count, 0.0, count);
        std::size_t used = 0;
        for (std::size_t i = 0; i < un; ++i) {
            if (i == skip) continue;
            ++used;
            for (std::size_t j = used; j >= 1; --j) {
                axpy_rows(table + j * count, lambda + i * count, table + (j - 1) * count, count);
            }
        }
    }
}

#else

void esf_batch(int n, std::size_t count, const double* lambda, double* sigma) {
    scalar::esf_batch(n, count, lambda, sigma);
}

void esf_excluding_batch(int n, std::size_t count, const double* lambda, double* out) {
    scalar::esf_excluding_batch(n, count, lambda, out);
}

#endif

}  // namespace confcurv::kernels::avx2
