#include <doctest.h>

#include <cmath>
#include <vector>

#include "dpr/kernels.hpp"
#include "dpr/rng.hpp"

namespace k = dpr::kernels;

namespace {

std::vector<double> random_doubles(std::size_t n, std::uint64_t seed) {
    dpr::SplitMix64 rng(seed);
    std::vector<double> out(n);
    for (double& x : out) {
        x = 20.0 * rng.next_double() - 10.0;
    }
    return out;
}

struct BackendGuard {
    k::Backend saved;
    BackendGuard() : saved(k::active_backend()) {}
    ~BackendGuard() { k::force_backend(saved); }
};

}  // namespace

TEST_CASE("scalar reference matches a naive accumulation within tolerance") {
    BackendGuard guard;
    k::force_backend(k::Backend::scalar);
    const auto a = random_doubles(37, 1);
    const auto b = random_doubles(37, 2);
    double naive = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        naive += (a[i] - b[i]) * (a[i] - b[i]);
    }
    CHECK(k::squared_distance(a.data(), b.data(), a.size()) ==
          doctest::Approx(naive).epsilon(1e-12));
}

TEST_CASE("SIMD backends are bit-identical to the scalar reference") {
    BackendGuard guard;
    std::vector<k::Backend> simd;
    if (k::backend_supported(k::Backend::avx2)) simd.push_back(k::Backend::avx2);
    if (k::backend_supported(k::Backend::neon)) simd.push_back(k::Backend::neon);
    REQUIRE_FALSE(simd.empty());  // this suite expects a SIMD-capable host

    const std::vector<std::size_t> sizes{0, 1, 2, 3, 4, 5, 7, 8,
                                         15, 16, 24, 31, 64, 67};
    for (k::Backend backend : simd) {
        for (std::size_t n : sizes) {
            for (std::uint64_t trial = 0; trial < 8; ++trial) {
                const auto a = random_doubles(n, 100 + trial);
                const auto b = random_doubles(n, 200 + trial);

                k::force_backend(k::Backend::scalar);
                const double d_ref = k::squared_distance(a.data(), b.data(), n);
                const double s_ref = k::sum_squares(a.data(), n);
                const double dot_ref = k::dot(a.data(), b.data(), n);
                auto acc_ref = a;
                k::add_into(acc_ref.data(), b.data(), n);
                auto scaled_ref = a;
                k::scale(scaled_ref.data(), n, 0.3725);

                k::force_backend(backend);
                CHECK(k::squared_distance(a.data(), b.data(), n) == d_ref);
                CHECK(k::sum_squares(a.data(), n) == s_ref);
                CHECK(k::dot(a.data(), b.data(), n) == dot_ref);
                auto acc = a;
                k::add_into(acc.data(), b.data(), n);
                CHECK(acc == acc_ref);
                auto scaled = a;
                k::scale(scaled.data(), n, 0.3725);
                CHECK(scaled == scaled_ref);
            }
        }
    }
}

TEST_CASE("forcing an unsupported backend throws") {
    // At most one of the SIMD backends can be supported on one machine.
    if (!k::backend_supported(k::Backend::neon)) {
        CHECK_THROWS(k::force_backend(k::Backend::neon));
    }
    if (!k::backend_supported(k::Backend::avx2)) {
        CHECK_THROWS(k::force_backend(k::Backend::avx2));
    }
}

TEST_CASE("zero-length inputs reduce to zero") {
    CHECK(k::squared_distance(nullptr, nullptr, 0) == 0.0);
    CHECK(k::sum_squares(nullptr, 0) == 0.0);
    CHECK(k::dot(nullptr, nullptr, 0) == 0.0);
}
