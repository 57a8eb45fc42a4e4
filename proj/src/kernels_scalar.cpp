#include "dpr/kernels.hpp"

// Reference kernels. These spell out the lane order documented in
// kernels.hpp; the SIMD variants must match them bit for bit.

namespace dpr::kernels::detail {
namespace {

double squared_distance_scalar(const double* a, const double* b,
                               std::size_t n) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        for (int j = 0; j < 4; ++j) {
            const double d = a[i + j] - b[i + j];
            lane[j] += d * d;
        }
    }
    double total = (lane[0] + lane[2]) + (lane[1] + lane[3]);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

double sum_squares_scalar(const double* a, std::size_t n) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        for (int j = 0; j < 4; ++j) {
            lane[j] += a[i + j] * a[i + j];
        }
    }
    double total = (lane[0] + lane[2]) + (lane[1] + lane[3]);
    for (; i < n; ++i) {
        total += a[i] * a[i];
    }
    return total;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        for (int j = 0; j < 4; ++j) {
            lane[j] += a[i + j] * b[i + j];
        }
    }
    double total = (lane[0] + lane[2]) + (lane[1] + lane[3]);
    for (; i < n; ++i) {
        total += a[i] * b[i];
    }
    return total;
}

void add_into_scalar(double* acc, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        acc[i] += x[i];
    }
}

void scale_scalar(double* a, std::size_t n, double factor) {
    for (std::size_t i = 0; i < n; ++i) {
        a[i] *= factor;
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{
        squared_distance_scalar, sum_squares_scalar, dot_scalar,
        add_into_scalar,         scale_scalar,
    };
    return table;
}

}  // namespace dpr::kernels::detail
