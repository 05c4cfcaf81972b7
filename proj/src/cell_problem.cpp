#include "homfem/cell_problem.hpp"

#include <algorithm>
#include <cmath>

#include "homfem/assemble.hpp"
#include "homfem/cg.hpp"
#include "homfem/q1.hpp"

namespace homfem {

namespace {

// CSR pattern of the periodic cell operator. Neighbour node ids wrap, so the
// per-row columns need sorting and deduplication.
CsrMatrix periodic_pattern(const PeriodicCellMesh& mesh) {
    CsrMatrix k;
    k.n = 2 * mesh.n_nodes();
    k.ptr.assign(k.n + 1, 0);
    std::vector<std::int32_t> cols;
    for (int j = 0; j < mesh.n; ++j)
        for (int i = 0; i < mesh.n; ++i)
            for (int c = 0; c < 2; ++c) {
                const std::int32_t row = 2 * mesh.node(i, j) + c;
                cols.clear();
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di) {
                        const int nb = mesh.node(i + di + mesh.n, j + dj + mesh.n);
                        cols.push_back(2 * nb);
                        cols.push_back(2 * nb + 1);
                    }
                std::sort(cols.begin(), cols.end());
                cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
                k.ptr[row + 1] = static_cast<std::int32_t>(cols.size());
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

// Engineering strain of the linear field y_k e_g.
std::array<double, 3> unit_strain(int k, int g) {
    if (k == 1 && g == 1) return {1.0, 0.0, 0.0};
    if (k == 2 && g == 2) return {0.0, 1.0, 0.0};
    return {0.0, 0.0, 1.0};
}

void remove_mean(std::span<double> v) {
    const std::size_t nn = v.size() / 2;
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
        m0 += v[2 * i];
        m1 += v[2 * i + 1];
    }
    m0 /= double(nn);
    m1 /= double(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        v[2 * i] -= m0;
        v[2 * i + 1] -= m1;
    }
}

}  // namespace

CorrectorSet solve_correctors(const CellConfig& config, int n, double cg_tol) {
    if (n < 2) throw std::invalid_argument("cell resolution must be >= 2");
    const CellCoefficient coeff(config);
    const PeriodicCellMesh mesh{n};
    const double h = mesh.h();

    // Two-phase layouts need only two element matrices.
    const ElemStiffness ke_matrix =
        element_stiffness(h, h, coeff.matrix_tensor());
    const ElemStiffness ke_inclusion =
        element_stiffness(h, h, coeff.inclusion_tensor());

    std::vector<bool> in_incl(mesh.n_elems());
    CsrMatrix k = periodic_pattern(mesh);
    for (int ey = 0; ey < n; ++ey)
        for (int ex = 0; ex < n; ++ex) {
            const bool incl =
                in_inclusion(config.layout, (ex + 0.5) * h, (ey + 0.5) * h);
            in_incl[ey * n + ex] = incl;
            const ElemStiffness& ke = incl ? ke_inclusion : ke_matrix;
            const auto nodes = mesh.elem_nodes(ex, ey);
            for (int p = 0; p < 8; ++p) {
                const std::int32_t rp = 2 * nodes[p / 2] + p % 2;
                for (int q = 0; q < 8; ++q)
                    scatter_add(k, rp, 2 * nodes[q / 2] + q % 2, ke[p][q]);
            }
        }

    NullspaceProjector project = [](std::span<double> v) { remove_mean(v); };

    CorrectorSet set;
    set.resolution = n;
    const auto gauss = q1_gauss_points();
    for (int kk = 1; kk <= 2; ++kk)
        for (int g = 1; g <= 2; ++g) {
            // RHS: -int eps(v) : A : E for the unit strain E of (k, g).
            const auto ev = unit_strain(kk, g);
            std::vector<double> b(k.n, 0.0);
            for (int ey = 0; ey < n; ++ey)
                for (int ex = 0; ex < n; ++ex) {
                    const ElasticTensor4& a = in_incl[ey * n + ex]
                                                  ? coeff.inclusion_tensor()
                                                  : coeff.matrix_tensor();
                    const auto sigma = a.stress(ev[0], ev[1], 0.5 * ev[2]);
                    const auto nodes = mesh.elem_nodes(ex, ey);
                    for (const auto& gp : gauss) {
                        std::array<double, 4> ds, dt;
                        q1_shape_grad(gp.s, gp.t, ds, dt);
                        const double w = gp.weight * h * h;
                        for (int a4 = 0; a4 < 4; ++a4) {
                            const double gx = ds[a4] / h;
                            const double gy = dt[a4] / h;
                            b[2 * nodes[a4]] -= w * (gx * sigma[0] + gy * sigma[2]);
                            b[2 * nodes[a4] + 1] -=
                                w * (gy * sigma[1] + gx * sigma[2]);
                        }
                    }
                }
            remove_mean(b);
            std::vector<double> x(k.n, 0.0);
            const CgResult res = cg_solve(k, b, x, CgOptions{cg_tol, 0}, &project);
            if (!res.converged)
                throw SolverError("cell problem CG stalled at relative residual " +
                                  std::to_string(res.rel_residual));
            remove_mean(x);
            set.chi[kk - 1][g - 1] = std::move(x);
        }
    return set;
}

EffectiveTensor effective_tensor(const CellConfig& config,
                                 const CorrectorSet& correctors) {
    const CellCoefficient coeff(config);
    const int n = correctors.resolution;
    const PeriodicCellMesh mesh{n};
    const double h = mesh.h();
    const auto gauss = q1_gauss_points();

    EffectiveTensor eff;
    eff.resolution = n;
    eff.config = config;

    // Columns of the Voigt matrix come from the correctors of the matching
    // unit strain; (1,2) and (2,1) solve the same system, use (1,2).
    const std::array<std::pair<int, int>, 3> col_of = {{{1, 1}, {2, 2}, {1, 2}}};
    double max_grad_sq = 0.0;

    for (int cix = 0; cix < 3; ++cix) {
        const auto [kk, g] = col_of[cix];
        const auto ev = unit_strain(kk, g);
        const std::vector<double>& chi = correctors.field(kk, g);
        std::array<double, 3> col{};
        for (int ey = 0; ey < n; ++ey)
            for (int ex = 0; ex < n; ++ex) {
                const ElasticTensor4& a =
                    coeff.at((ex + 0.5) * h, (ey + 0.5) * h);
                const auto nodes = mesh.elem_nodes(ex, ey);
                for (const auto& gp : gauss) {
                    std::array<double, 4> ds, dt;
                    q1_shape_grad(gp.s, gp.t, ds, dt);
                    double e11 = ev[0], e22 = ev[1], e12 = 0.5 * ev[2];
                    double gsq = 0.0;
                    for (int a4 = 0; a4 < 4; ++a4) {
                        const double gx = ds[a4] / h;
                        const double gy = dt[a4] / h;
                        const double c1 = chi[2 * nodes[a4]];
                        const double c2 = chi[2 * nodes[a4] + 1];
                        e11 += gx * c1;
                        e22 += gy * c2;
                        e12 += 0.5 * (gy * c1 + gx * c2);
                        gsq += gx * c1 * gx * c1 + gy * c1 * gy * c1 +
                               gx * c2 * gx * c2 + gy * c2 * gy * c2;
                    }
                    max_grad_sq = std::max(max_grad_sq, gsq);
                    const auto sigma = a.stress(e11, e22, e12);
                    const double w = gp.weight * h * h;
                    col[0] += w * sigma[0];
                    col[1] += w * sigma[1];
                    col[2] += w * sigma[2];
                }
            }
        for (int r = 0; r < 3; ++r) eff.raw[r][cix] = col[r];
    }

    eff.max_corrector_gradient = std::sqrt(max_grad_sq);
    eff.tensor = ElasticTensor4::from_voigt(eff.raw);
    if (!(eff.tensor.coercivity() > 0.0))
        throw SolverError("effective tensor lost coercivity");
    return eff;
}

CorrectorSampler::CorrectorSampler(const CorrectorSet& set)
    : mesh_{set.resolution}, set_(&set) {}

void CorrectorSampler::locate(double y1, double y2, int& ex, int& ey, double& s,
                              double& t) const {
    const double cx = y1 * mesh_.n;
    const double cy = y2 * mesh_.n;
    ex = std::min(static_cast<int>(cx), mesh_.n - 1);
    ey = std::min(static_cast<int>(cy), mesh_.n - 1);
    s = cx - ex;
    t = cy - ey;
}

void CorrectorSampler::eval(int ex, int ey, double s, double t,
                            double chi[2][2][2], double grad[2][2][2][2]) const {
    const auto nodes = mesh_.elem_nodes(ex, ey);
    const auto nv = q1_shape(s, t);
    std::array<double, 4> ds, dt;
    q1_shape_grad(s, t, ds, dt);
    const double inv_h = mesh_.n;  // 1/h
    for (int k = 0; k < 2; ++k)
        for (int g = 0; g < 2; ++g) {
            const std::vector<double>& f = set_->chi[k][g];
            for (int a = 0; a < 2; ++a) {
                double v = 0.0, gx = 0.0, gy = 0.0;
                for (int a4 = 0; a4 < 4; ++a4) {
                    const double u = f[2 * nodes[a4] + a];
                    v += nv[a4] * u;
                    gx += ds[a4] * u;
                    gy += dt[a4] * u;
                }
                chi[k][g][a] = v;
                grad[k][g][a][0] = gx * inv_h;
                grad[k][g][a][1] = gy * inv_h;
            }
        }
}

ExpansionGradients expansion_gradient(const CorrectorSet& correctors,
                                      const StructuredMesh& mesh,
                                      std::span<const double> u0_nodal,
                                      double eps) {
    const CorrectorSampler sampler(correctors);
    const auto gauss = q1_gauss_points();
    ExpansionGradients out;
    out.nx = mesh.nx;
    out.ny = mesh.ny;
    out.data.assign(static_cast<std::size_t>(mesh.n_elems()) * 16, 0.0);

    const double hx = mesh.hx(), hy = mesh.hy();
    double chi[2][2][2], dchi[2][2][2][2];
    for (int ey = 0; ey < mesh.ny; ++ey)
        for (int ex = 0; ex < mesh.nx; ++ex) {
            const auto nodes = mesh.elem_nodes(ex, ey);
            // mixed second derivative d12 of each component, constant per element
            std::array<double, 2> mixed;
            for (int c = 0; c < 2; ++c)
                mixed[c] = (u0_nodal[2 * nodes[0] + c] - u0_nodal[2 * nodes[1] + c] +
                            u0_nodal[2 * nodes[2] + c] - u0_nodal[2 * nodes[3] + c]) /
                           (hx * hy);
            for (int gq = 0; gq < 4; ++gq) {
                const auto& gp = gauss[gq];
                const auto du0 = q1_gradient(mesh, u0_nodal, ex, ey, gp.s, gp.t);
                const double x1 = mesh.node_x(ex) + gp.s * hx;
                const double x2 = mesh.node_y(ey) + gp.t * hy;
                int ce_x, ce_y;
                double s, t;
                sampler.locate(wrap_unit(x1 / eps), wrap_unit(x2 / eps), ce_x,
                               ce_y, s, t);
                sampler.eval(ce_x, ce_y, s, t, chi, dchi);
                double* dst =
                    out.data.data() +
                    ((static_cast<std::size_t>(ey) * mesh.nx + ex) * 4 + gq) * 4;
                for (int a = 0; a < 2; ++a)
                    for (int i = 0; i < 2; ++i) {
                        double v = du0[a][i];
                        for (int j = 0; j < 2; ++j)
                            for (int b = 0; b < 2; ++b) {
                                v += dchi[j][b][a][i] * du0[b][j];
                                if (i != j) v += eps * chi[j][b][a] * mixed[b];
                            }
                        dst[2 * a + i] = v;
                    }
            }
        }
    return out;
}

}  // namespace homfem
