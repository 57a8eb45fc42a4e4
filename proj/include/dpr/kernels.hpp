#pragma once

#include <cstddef>
#include <string>

// Vector kernels backing the clustering stage. Every reduction follows one
// fixed accumulation order so that the scalar reference and the SIMD
// variants produce bit-identical doubles:
//
//   - four accumulator lanes, lane j sums the terms with index i % 4 == j,
//     in increasing i;
//   - lanes combine as (l0 + l2) + (l1 + l3);
//   - the n % 4 tail elements are added sequentially after the combine.
//
// AVX2 (4x double) realizes this order directly; NEON (2x double) uses two
// registers for lanes 0/1 and 2/3. Compile with -ffp-contract=off: a fused
// multiply-add would round differently from the reference.

namespace dpr::kernels {

enum class Backend { scalar, avx2, neon };

// Backend chosen at startup: the widest one the CPU supports, unless the
// DPR_KERNELS environment variable (scalar|avx2|neon|auto) says otherwise.
Backend active_backend();
const char* backend_name(Backend b);

// Overrides the dispatch, for equivalence tests. Throws std::runtime_error
// if the CPU cannot run the requested backend.
void force_backend(Backend b);
bool backend_supported(Backend b);

double squared_distance(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);

// Elementwise; no reduction, so any backend is trivially bit-equal.
void add_into(double* acc, const double* x, std::size_t n);
void scale(double* a, std::size_t n, double factor);

namespace detail {

struct KernelTable {
    double (*squared_distance)(const double*, const double*, std::size_t);
    double (*sum_squares)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    void (*add_into)(double*, const double*, std::size_t);
    void (*scale)(double*, std::size_t, double);
};

const KernelTable& scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
#endif
#if defined(__aarch64__) || defined(_M_ARM64)
const KernelTable& neon_table();
#endif

}  // namespace detail

}  // namespace dpr::kernels
