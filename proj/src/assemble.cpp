#include "homfem/assemble.hpp"

#include <algorithm>
#include <stdexcept>

#include "homfem/q1.hpp"

namespace homfem {

namespace {

// Strain-displacement rows (e11, e22, 2 e12) of the 8 local dofs at one
// quadrature point.
struct BMatrix {
    std::array<std::array<double, 8>, 3> b{};
};

BMatrix b_matrix(double hx, double hy, double s, double t) {
    std::array<double, 4> ds, dt;
    q1_shape_grad(s, t, ds, dt);
    BMatrix bm;
    for (int a = 0; a < 4; ++a) {
        const double gx = ds[a] / hx;
        const double gy = dt[a] / hy;
        bm.b[0][2 * a] = gx;
        bm.b[1][2 * a + 1] = gy;
        bm.b[2][2 * a] = gy;
        bm.b[2][2 * a + 1] = gx;
    }
    return bm;
}

// CSR pattern over free dofs for a structured mesh: each node couples to the
// 3x3 node neighbourhood. Free dof numbering is monotone in node order, so
// columns come out sorted.
CsrMatrix stiffness_pattern(const StructuredMesh& mesh, const DofMap& dofs) {
    CsrMatrix k;
    k.n = dofs.n_free;
    k.ptr.assign(k.n + 1, 0);
    std::vector<std::int32_t> cols;
    cols.reserve(18);
    for (int j = 0; j <= mesh.ny; ++j)
        for (int i = 0; i <= mesh.nx; ++i)
            for (int c = 0; c < 2; ++c) {
                const std::int32_t r = dofs.reduced[2 * mesh.node(i, j) + c];
                if (r < 0) continue;
                cols.clear();
                for (int dj = -1; dj <= 1; ++dj) {
                    const int jj = j + dj;
                    if (jj < 0 || jj > mesh.ny) continue;
                    for (int di = -1; di <= 1; ++di) {
                        const int ii = i + di;
                        if (ii < 0 || ii > mesh.nx) continue;
                        const int nb = mesh.node(ii, jj);
                        for (int c2 = 0; c2 < 2; ++c2) {
                            const std::int32_t cc = dofs.reduced[2 * nb + c2];
                            if (cc >= 0) cols.push_back(cc);
                        }
                    }
                }
                std::sort(cols.begin(), cols.end());
                k.ptr[r + 1] = static_cast<std::int32_t>(cols.size());
                k.col.insert(k.col.end(), cols.begin(), cols.end());
            }
    for (std::int32_t r = 0; r < k.n; ++r) k.ptr[r + 1] += k.ptr[r];
    k.val.assign(k.col.size(), 0.0);
    return k;
}

void scatter_add(CsrMatrix& k, std::int32_t r, std::int32_t c, double v) {
    auto first = k.col.begin() + k.ptr[r];
    auto last = k.col.begin() + k.ptr[r + 1];
    auto it = std::lower_bound(first, last, c);
    k.val[static_cast<std::size_t>(it - k.col.begin())] += v;
}

}  // namespace

ElemStiffness element_stiffness(double hx, double hy, const ElasticTensor4& a) {
    ElemStiffness ke{};
    const auto& v = a.voigt_matrix();
    for (const auto& gp : q1_gauss_points()) {
        const BMatrix bm = b_matrix(hx, hy, gp.s, gp.t);
        const double w = gp.weight * hx * hy;
        // cb = C * B, then ke += w * B^T * cb
        std::array<std::array<double, 8>, 3> cb{};
        for (int r = 0; r < 3; ++r)
            for (int q = 0; q < 8; ++q)
                cb[r][q] = v[r][0] * bm.b[0][q] + v[r][1] * bm.b[1][q] +
                           v[r][2] * bm.b[2][q];
        for (int p = 0; p < 8; ++p)
            for (int q = 0; q < 8; ++q)
                ke[p][q] += w * (bm.b[0][p] * cb[0][q] + bm.b[1][p] * cb[1][q] +
                                 bm.b[2][p] * cb[2][q]);
    }
    return ke;
}

CsrMatrix assemble_stiffness(const StructuredMesh& mesh,
                             const CoefficientFn& coeff, const DofMap& dofs) {
    CsrMatrix k = stiffness_pattern(mesh, dofs);
    const double hx = mesh.hx(), hy = mesh.hy();
    for (int ey = 0; ey < mesh.ny; ++ey)
        for (int ex = 0; ex < mesh.nx; ++ex) {
            const ElasticTensor4& a = coeff(ex, ey);
            if (!(a.coercivity() > 0.0))
                throw std::invalid_argument(
                    "element tensor is not coercive at element (" +
                    std::to_string(ex) + "," + std::to_string(ey) + ")");
            const ElemStiffness ke = element_stiffness(hx, hy, a);
            const auto nodes = mesh.elem_nodes(ex, ey);
            std::array<std::int32_t, 8> red;
            for (int a8 = 0; a8 < 4; ++a8) {
                red[2 * a8] = dofs.reduced[2 * nodes[a8]];
                red[2 * a8 + 1] = dofs.reduced[2 * nodes[a8] + 1];
            }
            for (int p = 0; p < 8; ++p) {
                if (red[p] < 0) continue;
                for (int q = 0; q < 8; ++q)
                    if (red[q] >= 0) scatter_add(k, red[p], red[q], ke[p][q]);
            }
        }
    return k;
}

std::vector<double> assemble_body_load(const StructuredMesh& mesh,
                                       const std::array<double, 2>& f,
                                       const DofMap& dofs) {
    std::vector<double> load(dofs.n_free, 0.0);
    // 2x2 Gauss reduces to f_c * hx*hy/4 per element node for constant f.
    const double wcell = 0.25 * mesh.hx() * mesh.hy();
    for (int ey = 0; ey < mesh.ny; ++ey)
        for (int ex = 0; ex < mesh.nx; ++ex)
            for (const int n : mesh.elem_nodes(ex, ey))
                for (int c = 0; c < 2; ++c) {
                    const std::int32_t r = dofs.reduced[2 * n + c];
                    if (r >= 0) load[r] += wcell * f[c];
                }
    return load;
}

std::vector<double> assemble_traction(const StructuredMesh& mesh,
                                      const TractionFn& t_fn, double time,
                                      const DofMap& dofs) {
    std::vector<double> load(dofs.n_free, 0.0);
    const double hy = mesh.hy();
    constexpr double ga = 0.21132486540518711, gb = 0.78867513459481289;
    for (int j = 0; j < mesh.ny; ++j) {
        const int nlo = mesh.node(0, j);
        const int nhi = mesh.node(0, j + 1);
        for (const double g : {ga, gb}) {
            const double x2 = mesh.node_y(j) + g * hy;
            const auto t = t_fn(x2, time);
            const double w = 0.5 * hy;
            for (int c = 0; c < 2; ++c) {
                const std::int32_t rlo = dofs.reduced[2 * nlo + c];
                const std::int32_t rhi = dofs.reduced[2 * nhi + c];
                if (rlo >= 0) load[rlo] += w * (1.0 - g) * t[c];
                if (rhi >= 0) load[rhi] += w * g * t[c];
            }
        }
    }
    return load;
}

std::array<std::array<double, 2>, 2> q1_gradient(const StructuredMesh& mesh,
                                                 std::span<const double> nodal,
                                                 int ex, int ey, double s,
                                                 double t) {
    std::array<double, 4> ds, dt;
    q1_shape_grad(s, t, ds, dt);
    const auto nodes = mesh.elem_nodes(ex, ey);
    std::array<std::array<double, 2>, 2> g{};
    for (int a = 0; a < 4; ++a) {
        const double gx = ds[a] / mesh.hx();
        const double gy = dt[a] / mesh.hy();
        for (int c = 0; c < 2; ++c) {
            const double u = nodal[2 * nodes[a] + c];
            g[c][0] += gx * u;
            g[c][1] += gy * u;
        }
    }
    return g;
}

double grad_norm_sq(const StructuredMesh& mesh, std::span<const double> nodal) {
    double acc = 0.0;
    const double w = 0.25 * mesh.hx() * mesh.hy();
    for (int ey = 0; ey < mesh.ny; ++ey)
        for (int ex = 0; ex < mesh.nx; ++ex)
            for (const auto& gp : q1_gauss_points()) {
                const auto g = q1_gradient(mesh, nodal, ex, ey, gp.s, gp.t);
                acc += w * (g[0][0] * g[0][0] + g[0][1] * g[0][1] +
                            g[1][0] * g[1][0] + g[1][1] * g[1][1]);
            }
    return acc;
}

}  // namespace homfem
