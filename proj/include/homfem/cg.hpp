#pragma once

#include <functional>
#include <span>
#include <stdexcept>

#include "homfem/sparse.hpp"

namespace homfem {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CgOptions {
    double tol = 1e-12;  // on ||K x - b|| / ||b||
    int maxit = 0;       // 0: 50*sqrt(n), capped at 200000
};

struct CgResult {
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
};

// Re-applied to the iterate and residual every iteration when solving a
// semidefinite system; must be the orthogonal projector onto the complement
// of the nullspace.
using NullspaceProjector = std::function<void(std::span<double>)>;

// Jacobi-preconditioned conjugate gradients. `x` is the initial guess and
// holds the solution on return. Reports rather than throws on reaching maxit.
CgResult cg_solve(const CsrMatrix& k, std::span<const double> b,
                  std::span<double> x, const CgOptions& opts = {},
                  const NullspaceProjector* projector = nullptr);

}  // namespace homfem
