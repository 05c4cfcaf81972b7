#include "homfem/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace homfem::kernels {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void waxpby_scalar(double a, const double* x, double b, const double* y,
                   double* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) w[i] = a * x[i] + b * y[i];
}

void spmv_scalar(const std::int32_t* row_ptr, const std::int32_t* col,
                 const double* val, const double* x, double* y,
                 std::size_t n_rows) {
    for (std::size_t r = 0; r < n_rows; ++r) {
        double s = 0.0;
        for (std::int32_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
            s += val[k] * x[col[k]];
        y[r] = s;
    }
}

void soft_threshold_scalar(const double* z, const double* tau, double* out,
                           std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double m = std::fabs(z[i]) - tau[i];
        out[i] = m > 0.0 ? std::copysign(m, z[i]) : 0.0;
    }
}

const Backend kScalar{"scalar", dot_scalar, waxpby_scalar, spmv_scalar,
                      soft_threshold_scalar};

const Backend* g_active = nullptr;

}  // namespace

const Backend& scalar_backend() { return kScalar; }

#if defined(HOMFEM_WITH_AVX2)
// Defined in kernels_avx2.cpp (compiled with -mavx2).
const Backend& avx2_backend_impl();

bool avx2_available() { return __builtin_cpu_supports("avx2"); }

const Backend& avx2_backend() {
    if (!avx2_available())
        throw std::runtime_error("avx2 backend not supported on this CPU");
    return avx2_backend_impl();
}
#else
bool avx2_available() { return false; }

const Backend& avx2_backend() {
    throw std::runtime_error("avx2 backend not compiled in");
}
#endif

const Backend& active() {
    if (g_active == nullptr)
        g_active = avx2_available() ? &avx2_backend() : &kScalar;
    return *g_active;
}

void select(const std::string& name) {
    if (name == "scalar") {
        g_active = &kScalar;
    } else if (name == "avx2") {
        g_active = &avx2_backend();
    } else if (name == "auto") {
        g_active = nullptr;
        active();
    } else {
        throw std::invalid_argument("unknown kernel backend: " + name);
    }
}

}  // namespace homfem::kernels
