#include "homfem/cg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "homfem/kernels.hpp"

namespace homfem {

CgResult cg_solve(const CsrMatrix& k, std::span<const double> b,
                  std::span<double> x, const CgOptions& opts,
                  const NullspaceProjector* projector) {
    const std::size_t n = static_cast<std::size_t>(k.n);
    const auto& kr = kernels::active();
    CgResult res;

    int maxit = opts.maxit;
    if (maxit <= 0)
        maxit = std::min(200000, 50 * static_cast<int>(std::sqrt(double(n))) + 50);

    std::vector<double> invdiag = k.diagonal();
    for (auto& d : invdiag) d = d > 0.0 ? 1.0 / d : 1.0;

    std::vector<double> r(n), z(n), p(n), q(n);

    const double bnorm = std::sqrt(kr.dot(b.data(), b.data(), n));
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        res.converged = true;
        return res;
    }

    if (projector) (*projector)(x);
    k.multiply(x, q);
    kr.waxpby(1.0, b.data(), -1.0, q.data(), r.data(), n);
    if (projector) (*projector)(r);

    auto precondition = [&](const std::vector<double>& in,
                            std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) out[i] = invdiag[i] * in[i];
        if (projector) (*projector)(out);
    };

    precondition(r, z);
    p = z;
    double rz = kr.dot(r.data(), z.data(), n);
    double rnorm = std::sqrt(kr.dot(r.data(), r.data(), n));

    while (rnorm > opts.tol * bnorm && res.iterations < maxit) {
        ++res.iterations;
        k.multiply(p, q);
        if (projector) (*projector)(q);
        const double pq = kr.dot(p.data(), q.data(), n);
        if (pq <= 0.0) break;  // lost positive definiteness
        const double alpha = rz / pq;
        kr.waxpby(alpha, p.data(), 1.0, x.data(), x.data(), n);
        kr.waxpby(-alpha, q.data(), 1.0, r.data(), r.data(), n);
        if (projector) {
            (*projector)(x);
            (*projector)(r);
        }
        precondition(r, z);
        const double rz_next = kr.dot(r.data(), z.data(), n);
        kr.waxpby(1.0, z.data(), rz_next / rz, p.data(), p.data(), n);
        rz = rz_next;
        rnorm = std::sqrt(kr.dot(r.data(), r.data(), n));
    }

    res.rel_residual = rnorm / bnorm;
    res.converged = rnorm <= opts.tol * bnorm;
    return res;
}

}  // namespace homfem
