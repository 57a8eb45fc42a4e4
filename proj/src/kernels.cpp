#include "dpr/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace dpr::kernels {

namespace {

using detail::KernelTable;

bool cpu_supports(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2") != 0;
#else
            return false;
#endif
        case Backend::neon:
#if defined(__aarch64__) || defined(_M_ARM64)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table_for(Backend b) {
    switch (b) {
        case Backend::scalar:
            return detail::scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2:
            return detail::avx2_table();
#endif
#if defined(__aarch64__) || defined(_M_ARM64)
        case Backend::neon:
            return detail::neon_table();
#endif
        default:
            throw std::runtime_error("kernels: backend not compiled in");
    }
}

Backend pick_default() {
    if (const char* env = std::getenv("DPR_KERNELS")) {
        const std::string v(env);
        if (v == "scalar") return Backend::scalar;
        if (v == "avx2" && cpu_supports(Backend::avx2)) return Backend::avx2;
        if (v == "neon" && cpu_supports(Backend::neon)) return Backend::neon;
        // "auto" or an unusable request falls through to detection.
    }
    if (cpu_supports(Backend::avx2)) return Backend::avx2;
    if (cpu_supports(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

struct Dispatch {
    Backend backend;
    const KernelTable* table;
    Dispatch() : backend(pick_default()), table(&table_for(backend)) {}
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

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

bool backend_supported(Backend b) { return cpu_supports(b); }

void force_backend(Backend b) {
    if (!cpu_supports(b)) {
        throw std::runtime_error(std::string("kernels: CPU does not support ") +
                                 backend_name(b));
    }
    dispatch().backend = b;
    dispatch().table = &table_for(b);
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    return dispatch().table->squared_distance(a, b, n);
}

double sum_squares(const double* a, std::size_t n) {
    return dispatch().table->sum_squares(a, n);
}

double dot(const double* a, const double* b, std::size_t n) {
    return dispatch().table->dot(a, b, n);
}

void add_into(double* acc, const double* x, std::size_t n) {
    dispatch().table->add_into(acc, x, n);
}

void scale(double* a, std::size_t n, double factor) {
    dispatch().table->scale(a, n, factor);
}

}  // namespace dpr::kernels
