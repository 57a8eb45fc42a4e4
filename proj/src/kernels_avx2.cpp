#include "dpr/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace dpr::kernels::detail {
namespace {

// Horizontal sum in the contract order: (l0 + l2) + (l1 + l3).
inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);    // (l0, l1)
    const __m128d hi = _mm256_extractf128_pd(v, 1);  // (l2, l3)
    const __m128d s = _mm_add_pd(lo, hi);            // (l0+l2, l1+l3)
    return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

double squared_distance_avx2(const double* a, const double* b,
                             std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

double sum_squares_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(a + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        total += a[i] * a[i];
    }
    return total;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(
            acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        total += a[i] * b[i];
    }
    return total;
}

void add_into_avx2(double* acc, const double* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(
            acc + i,
            _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) {
        acc[i] += x[i];
    }
}

void scale_avx2(double* a, std::size_t n, double factor) {
    const __m256d f = _mm256_set1_pd(factor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(a + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), f));
    }
    for (; i < n; ++i) {
        a[i] *= factor;
    }
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{
        squared_distance_avx2, sum_squares_avx2, dot_avx2,
        add_into_avx2,         scale_avx2,
    };
    return table;
}

}  // namespace dpr::kernels::detail

#endif  // x86_64
