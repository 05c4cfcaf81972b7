#include "homfem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "homfem/kernels.hpp"

namespace homfem {

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    kernels::active().spmv(ptr.data(), col.data(), val.data(), x.data(),
                           y.data(), static_cast<std::size_t>(n));
}

double& CsrMatrix::at(std::int32_t r, std::int32_t c) {
    auto first = col.begin() + ptr[r];
    auto last = col.begin() + ptr[r + 1];
    auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c)
        throw std::out_of_range("entry not in sparsity pattern");
    return val[static_cast<std::size_t>(it - col.begin())];
}

double CsrMatrix::entry(std::int32_t r, std::int32_t c) const {
    auto first = col.begin() + ptr[r];
    auto last = col.begin() + ptr[r + 1];
    auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c) return 0.0;
    return val[static_cast<std::size_t>(it - col.begin())];
}

double CsrMatrix::max_abs() const {
    double m = 0.0;
    for (double v : val) m = std::max(m, std::fabs(v));
    return m;
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(n, 0.0);
    for (std::int32_t r = 0; r < n; ++r) d[r] = entry(r, r);
    return d;
}

double power_iteration_max_eigenvalue(const CsrMatrix& a, int max_iters) {
    if (a.n == 0) return 0.0;
    std::mt19937 rng(0x9e3779b9u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(a.n), w(a.n);
    for (auto& x : v) x = gauss(rng);

    const auto& k = kernels::active();
    double nrm = std::sqrt(k.dot(v.data(), v.data(), v.size()));
    for (auto& x : v) x /= nrm;

    double lambda = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        a.multiply(v, w);
        const double next = k.dot(v.data(), w.data(), v.size());
        nrm = std::sqrt(k.dot(w.data(), w.data(), w.size()));
        if (nrm == 0.0) return 0.0;
        k.waxpby(1.0 / nrm, w.data(), 0.0, w.data(), v.data(), v.size());
        if (it > 4 && std::fabs(next - lambda) <= 1e-3 * std::fabs(next)) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return lambda;
}

}  // namespace homfem
