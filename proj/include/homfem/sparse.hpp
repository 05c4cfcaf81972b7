#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace homfem {

// Square sparse matrix in CSR form. Assembled stiffness matrices are
// symmetric with the full pattern stored; multiply goes through the
// runtime-selected kernels.
struct CsrMatrix {
    std::int32_t n = 0;
    std::vector<std::int32_t> ptr;  // n+1
    std::vector<std::int32_t> col;  // sorted within each row
    std::vector<double> val;

    void multiply(std::span<const double> x, std::span<double> y) const;

    // Reference to the stored entry (r, c); throws std::out_of_range when the
    // position is not in the pattern.
    double& at(std::int32_t r, std::int32_t c);
    double entry(std::int32_t r, std::int32_t c) const;  // 0 when absent

    double max_abs() const;
    std::vector<double> diagonal() const;
};

// Largest eigenvalue estimate by power iteration (fixed seed, Rayleigh
// quotient stopped at 0.1% stagnation), without any safety factor.
double power_iteration_max_eigenvalue(const CsrMatrix& a, int max_iters = 1000);

}  // namespace homfem
