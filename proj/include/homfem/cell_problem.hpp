#pragma once

#include <array>
#include <span>
#include <vector>

#include "homfem/cell_geometry.hpp"
#include "homfem/mesh.hpp"
#include "homfem/sparse.hpp"
#include "homfem/tensor.hpp"

namespace homfem {

// Uniform bilinear mesh on the unit cell with periodically identified nodes:
// (n, j) = (0, j) and (i, n) = (i, 0). Independent nodes are indexed by the
// wrapped lattice position.
struct PeriodicCellMesh {
    int n = 0;

    double h() const { return 1.0 / n; }
    int n_nodes() const { return n * n; }
    int n_elems() const { return n * n; }

    int node(int i, int j) const { return (j % n) * n + (i % n); }

    std::array<int, 4> elem_nodes(int ex, int ey) const {
        return {node(ex, ey), node(ex + 1, ey), node(ex + 1, ey + 1),
                node(ex, ey + 1)};
    }
};

// The four periodic cell solutions chi_k^g (unit macroscopic strain in
// direction (k,g)), each stored as 2*n*n interleaved nodal components with
// zero mean.
struct CorrectorSet {
    int resolution = 0;
    std::array<std::array<std::vector<double>, 2>, 2> chi;  // [k-1][g-1]

    const std::vector<double>& field(int k, int g) const {
        return chi[k - 1][g - 1];
    }
};

struct EffectiveTensor {
    ElasticTensor4 tensor;
    Voigt3 raw{};  // cell-average before symmetrisation
    int resolution = 0;
    CellConfig config;
    double max_corrector_gradient = 0.0;  // recorded, not certified
};

// Solves the periodic Galerkin systems for all four correctors with CG
// (Jacobi, constant-nullspace deflation). Coefficients are sampled at element
// centroids. Throws SolverError when CG does not converge.
CorrectorSet solve_correctors(const CellConfig& config, int n,
                              double cg_tol = 1e-12);

// Cell average of A + A grad(chi), quadrature-consistent with the assembly.
EffectiveTensor effective_tensor(const CellConfig& config,
                                 const CorrectorSet& correctors);

// Evaluates corrector values and gradients anywhere in the cell through the
// containing element's bilinear interpolant.
class CorrectorSampler {
public:
    explicit CorrectorSampler(const CorrectorSet& set);

    int resolution() const { return mesh_.n; }

    // chi[k][g][a] and grad[k][g][a][i] = d_i chi_k^{a g} at local point (s,t)
    // of cell element (ex, ey); indices are 0-based here.
    void eval(int ex, int ey, double s, double t, double chi[2][2][2],
              double grad[2][2][2][2]) const;

    // Locate the cell element containing y in [0,1)^2.
    void locate(double y1, double y2, int& ex, int& ey, double& s,
                double& t) const;

private:
    PeriodicCellMesh mesh_;
    const CorrectorSet* set_;
};

// Gradient of the first-order two-scale expansion u0 + eps*chi(x/eps)*grad u0
// at the 2x2 Gauss points of every macro element. u0 is a full nodal field;
// the macro mesh must tile into whole cells (eps = 1/N with N*cellsize
// dividing the mesh resolution is the intended use).
struct ExpansionGradients {
    int nx = 0, ny = 0;
    // layout: ((ey*nx + ex)*4 + gauss)*4 + (2*a + i) for d_i u^a
    std::vector<double> data;

    std::span<const double> at(int ex, int ey, int gauss) const {
        return {data.data() + ((static_cast<std::size_t>(ey) * nx + ex) * 4 +
                               gauss) *
                                  4,
                4};
    }
};

ExpansionGradients expansion_gradient(const CorrectorSet& correctors,
                                      const StructuredMesh& mesh,
                                      std::span<const double> u0_nodal,
                                      double eps);

}  // namespace homfem
