#include "homfem/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "homfem/assemble.hpp"
#include "homfem/q1.hpp"

namespace homfem {

ErrorAccumulator::ErrorAccumulator(const StructuredMesh& mesh,
                                   const DofMap& dofs,
                                   const CorrectorSet* correctors, double eps)
    : mesh_(&mesh), dofs_(&dofs), eps_(eps) {
    if (correctors) sampler_.emplace(*correctors);
}

StepErrors ErrorAccumulator::evaluate(std::span<const double> u_eps_reduced,
                                      std::span<const double> u0_reduced) {
    const StructuredMesh& mesh = *mesh_;
    const std::vector<double> ue = expand_to_nodes(u_eps_reduced, *dofs_);
    const std::vector<double> u0 = expand_to_nodes(u0_reduced, *dofs_);

    const auto gauss = q1_gauss_points();
    const double hx = mesh.hx(), hy = mesh.hy();
    const double wq = 0.25 * hx * hy;

    double denom = 0.0, num1 = 0.0, num2 = 0.0, corr = 0.0, l2 = 0.0;
    double chi[2][2][2], dchi[2][2][2][2];

    for (int ey = 0; ey < mesh.ny; ++ey)
        for (int ex = 0; ex < mesh.nx; ++ex) {
            const auto nodes = mesh.elem_nodes(ex, ey);
            std::array<double, 2> mixed{};
            if (sampler_)
                for (int c = 0; c < 2; ++c)
                    mixed[c] = (u0[2 * nodes[0] + c] - u0[2 * nodes[1] + c] +
                                u0[2 * nodes[2] + c] - u0[2 * nodes[3] + c]) /
                               (hx * hy);
            for (const auto& gp : gauss) {
                const auto ge = q1_gradient(mesh, ue, ex, ey, gp.s, gp.t);
                const auto g0 = q1_gradient(mesh, u0, ex, ey, gp.s, gp.t);
                for (int a = 0; a < 2; ++a)
                    for (int i = 0; i < 2; ++i) {
                        denom += wq * g0[a][i] * g0[a][i];
                        const double d = ge[a][i] - g0[a][i];
                        num1 += wq * d * d;
                    }
                if (sampler_) {
                    const double x1 = mesh.node_x(ex) + gp.s * hx;
                    const double x2 = mesh.node_y(ey) + gp.t * hy;
                    int cx, cy;
                    double s, t;
                    sampler_->locate(wrap_unit(x1 / eps_), wrap_unit(x2 / eps_),
                                     cx, cy, s, t);
                    sampler_->eval(cx, cy, s, t, chi, dchi);
                    for (int a = 0; a < 2; ++a)
                        for (int i = 0; i < 2; ++i) {
                            double gexp = g0[a][i];
                            for (int j = 0; j < 2; ++j)
                                for (int b = 0; b < 2; ++b) {
                                    gexp += dchi[j][b][a][i] * g0[b][j];
                                    if (i != j)
                                        gexp += eps_ * chi[j][b][a] * mixed[b];
                                }
                            const double d2 = ge[a][i] - gexp;
                            num2 += wq * d2 * d2;
                            const double dc = gexp - g0[a][i];
                            corr += wq * dc * dc;
                        }
                }
                const auto nv = q1_shape(gp.s, gp.t);
                for (int c = 0; c < 2; ++c) {
                    double v = 0.0;
                    for (int a4 = 0; a4 < 4; ++a4)
                        v += nv[a4] * (ue[2 * nodes[a4] + c] -
                                       u0[2 * nodes[a4] + c]);
                    l2 += wq * v * v;
                }
            }
        }

    if (!(denom > 0.0))
        throw SolverError("homogenised solution has zero gradient norm");

    StepErrors res;
    res.denom = std::sqrt(denom);
    res.err1 = std::sqrt(num1) / res.denom;
    res.err2 = sampler_ ? std::sqrt(num2) / res.denom : res.err1;
    res.corrector_term = sampler_ ? std::sqrt(corr) / res.denom : 0.0;
    res.l2_diff = std::sqrt(l2);
    max1_ = std::max(max1_, res.err1);
    max2_ = std::max(max2_, res.err2);
    ++steps_;
    return res;
}

namespace {

double max_over_steps(const StructuredMesh& mesh, const DofMap& dofs,
                      const QuasistaticSolution& u_eps,
                      const QuasistaticSolution& u0,
                      const CorrectorSet* correctors, double eps, bool second) {
    if (u_eps.displacements.size() != u0.displacements.size())
        throw std::invalid_argument("solutions have different step counts");
    ErrorAccumulator acc(mesh, dofs, correctors, eps);
    for (std::size_t m = 1; m < u_eps.displacements.size(); ++m)
        acc.evaluate(u_eps.displacements[m], u0.displacements[m]);
    return second ? acc.max_err2() : acc.max_err1();
}

}  // namespace

double compute_err1(const StructuredMesh& mesh, const DofMap& dofs,
                    const QuasistaticSolution& u_eps,
                    const QuasistaticSolution& u0) {
    return max_over_steps(mesh, dofs, u_eps, u0, nullptr, 1.0, false);
}

double compute_err2(const StructuredMesh& mesh, const DofMap& dofs,
                    const QuasistaticSolution& u_eps,
                    const QuasistaticSolution& u0,
                    const CorrectorSet& correctors, double eps) {
    return max_over_steps(mesh, dofs, u_eps, u0, &correctors, eps, true);
}

}  // namespace homfem
