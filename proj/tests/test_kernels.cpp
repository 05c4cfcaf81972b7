#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "homfem/kernels.hpp"

using namespace homfem;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937& rng) {
    std::normal_distribution<double> gauss;
    std::vector<double> v(n);
    for (auto& x : v) x = gauss(rng);
    return v;
}

}  // namespace

TEST_CASE("soft threshold semantics") {
    const auto& k = kernels::scalar_backend();
    const double z[] = {0.5, -0.15, 0.1, -2.0, 0.0};
    const double tau[] = {0.2, 0.2, 0.2, 0.0, 0.3};
    double out[5];
    k.soft_threshold(z, tau, out, 5);
    CHECK(out[0] == doctest::Approx(0.3));
    CHECK(out[1] == 0.0);  // |z| <= tau sticks at exactly zero
    CHECK(out[2] == 0.0);
    CHECK(out[3] == -2.0);  // tau = 0 is the identity
    CHECK(out[4] == 0.0);
    CHECK(!std::signbit(out[1]));
}

TEST_CASE("scalar and simd backends agree") {
    if (!kernels::avx2_available()) {
        MESSAGE("avx2 not available, skipping equivalence checks");
        return;
    }
    const auto& sc = kernels::scalar_backend();
    const auto& vx = kernels::avx2_backend();
    std::mt19937 rng(7u);

    for (const std::size_t n : {1u, 3u, 4u, 17u, 1024u, 1031u}) {
        const auto x = random_vec(n, rng);
        const auto y = random_vec(n, rng);

        const double d0 = sc.dot(x.data(), y.data(), n);
        const double d1 = vx.dot(x.data(), y.data(), n);
        CHECK(std::fabs(d0 - d1) <= 1e-13 * (std::fabs(d0) + 1.0));

        std::vector<double> w0(n), w1(n);
        sc.waxpby(0.3, x.data(), -1.7, y.data(), w0.data(), n);
        vx.waxpby(0.3, x.data(), -1.7, y.data(), w1.data(), n);
        CHECK(w0 == w1);  // elementwise ops must match bitwise

        std::vector<double> tau(n);
        for (auto& t : tau) t = std::fabs(random_vec(1, rng)[0]);
        sc.soft_threshold(x.data(), tau.data(), w0.data(), n);
        vx.soft_threshold(x.data(), tau.data(), w1.data(), n);
        CHECK(w0 == w1);
    }

    // CSR spmv on a banded random matrix
    const std::int32_t n = 257;
    std::vector<std::int32_t> ptr{0}, col;
    std::vector<double> val;
    std::normal_distribution<double> gauss;
    for (std::int32_t r = 0; r < n; ++r) {
        for (std::int32_t c = std::max(0, r - 4); c < std::min(n, r + 5); ++c) {
            col.push_back(c);
            val.push_back(gauss(rng));
        }
        ptr.push_back(static_cast<std::int32_t>(col.size()));
    }
    const auto x = random_vec(n, rng);
    std::vector<double> y0(n), y1(n);
    sc.spmv(ptr.data(), col.data(), val.data(), x.data(), y0.data(), n);
    vx.spmv(ptr.data(), col.data(), val.data(), x.data(), y1.data(), n);
    for (std::int32_t i = 0; i < n; ++i)
        CHECK(std::fabs(y0[i] - y1[i]) <= 1e-13 * (std::fabs(y0[i]) + 1.0));
}

TEST_CASE("backend selection") {
    CHECK_THROWS(kernels::select("neon"));
    kernels::select("scalar");
    CHECK(std::string(kernels::active().name) == "scalar");
    kernels::select("auto");
    if (kernels::avx2_available())
        CHECK(std::string(kernels::active().name) == "avx2");
}
