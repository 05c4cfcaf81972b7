#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace homfem::kernels {

// Hot inner loops of the solvers, routed through a runtime-selected backend.
// The scalar implementations are the reference; SIMD variants must match them
// elementwise exactly for the pointwise ops and to rounding for reductions
// (the summation order differs).
struct Backend {
    const char* name;

    double (*dot)(const double* x, const double* y, std::size_t n);

    // w[i] = a*x[i] + b*y[i]; w may alias x or y.
    void (*waxpby)(double a, const double* x, double b, const double* y,
                   double* w, std::size_t n);

    // y = A*x for a CSR matrix with n_rows rows (row_ptr has n_rows+1 entries).
    void (*spmv)(const std::int32_t* row_ptr, const std::int32_t* col,
                 const double* val, const double* x, double* y,
                 std::size_t n_rows);

    // out[i] = sign(z[i]) * max(|z[i]| - tau[i], 0). tau[i] == 0 is the identity.
    void (*soft_threshold)(const double* z, const double* tau, double* out,
                           std::size_t n);
};

const Backend& scalar_backend();

// True when AVX2 code was compiled in and the CPU supports it.
bool avx2_available();
const Backend& avx2_backend();  // throws std::runtime_error if unavailable

// Currently active backend, "auto"-selected at first use.
const Backend& active();

// Select "scalar", "avx2" or "auto". Throws std::invalid_argument on unknown
// names and std::runtime_error when avx2 is requested but unavailable.
void select(const std::string& name);

}  // namespace homfem::kernels
