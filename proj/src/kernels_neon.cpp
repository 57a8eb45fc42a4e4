#include "dpr/kernels.hpp"

#if defined(__aarch64__) || defined(_M_ARM64)

#include <arm_neon.h>

// Two float64x2 registers stand in for the four contract lanes: accA holds
// lanes 0/1, accB lanes 2/3. vaddq_f64(accA, accB) yields (l0+l2, l1+l3),
// matching the combine order of the scalar reference.

namespace dpr::kernels::detail {
namespace {

inline double hsum(float64x2_t a, float64x2_t b) {
    const float64x2_t s = vaddq_f64(a, b);
    return vgetq_lane_f64(s, 0) + vgetq_lane_f64(s, 1);
}

double squared_distance_neon(const double* a, const double* b,
                             std::size_t n) {
    float64x2_t accA = vdupq_n_f64(0.0);
    float64x2_t accB = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        const float64x2_t d1 =
            vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
        accA = vaddq_f64(accA, vmulq_f64(d0, d0));
        accB = vaddq_f64(accB, vmulq_f64(d1, d1));
    }
    double total = hsum(accA, accB);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

double sum_squares_neon(const double* a, std::size_t n) {
    float64x2_t accA = vdupq_n_f64(0.0);
    float64x2_t accB = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float64x2_t v0 = vld1q_f64(a + i);
        const float64x2_t v1 = vld1q_f64(a + i + 2);
        accA = vaddq_f64(accA, vmulq_f64(v0, v0));
        accB = vaddq_f64(accB, vmulq_f64(v1, v1));
    }
    double total = hsum(accA, accB);
    for (; i < n; ++i) {
        total += a[i] * a[i];
    }
    return total;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t accA = vdupq_n_f64(0.0);
    float64x2_t accB = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        accA = vaddq_f64(accA, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        accB = vaddq_f64(
            accB, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double total = hsum(accA, accB);
    for (; i < n; ++i) {
        total += a[i] * b[i];
    }
    return total;
}

void add_into_neon(double* acc, const double* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vld1q_f64(x + i)));
    }
    for (; i < n; ++i) {
        acc[i] += x[i];
    }
}

void scale_neon(double* a, std::size_t n, double factor) {
    const float64x2_t f = vdupq_n_f64(factor);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(a + i, vmulq_f64(vld1q_f64(a + i), f));
    }
    for (; i < n; ++i) {
        a[i] *= factor;
    }
}

}  // namespace

const KernelTable& neon_table() {
    static const KernelTable table{
        squared_distance_neon, sum_squares_neon, dot_neon,
        add_into_neon,         scale_neon,
    };
    return table;
}

}  // namespace dpr::kernels::detail

#endif  // aarch64
