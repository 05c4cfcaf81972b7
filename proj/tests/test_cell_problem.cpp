#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "homfem/assemble.hpp"
#include "homfem/cell_problem.hpp"
#include "homfem/laminate.hpp"
#include "homfem/q1.hpp"

using namespace homfem;

namespace {

const CellConfig kInset{CellLayout::cross_inset, {117.0, 0.43}, {77.2, 0.33}};

double field_max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

}  // namespace

TEST_CASE("homogeneous cell has zero correctors and effective = base") {
    const CellConfig cfg{CellLayout::homogeneous, {77.2, 0.33}, {}};
    const CorrectorSet set = solve_correctors(cfg, 8);
    for (int k = 1; k <= 2; ++k)
        for (int g = 1; g <= 2; ++g) CHECK(field_max_abs(set.field(k, g)) < 1e-12);

    const EffectiveTensor eff = effective_tensor(cfg, set);
    const ElasticTensor4 base = isotropic_plane_stress(cfg.matrix);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            CHECK(eff.tensor.voigt(a, b) ==
                  doctest::Approx(base.voigt(a, b)).epsilon(1e-12));
}

TEST_CASE("correctors have zero mean and mixed-index symmetry") {
    const CorrectorSet set = solve_correctors(kInset, 16);
    const int nn = 16 * 16;
    for (int k = 1; k <= 2; ++k)
        for (int g = 1; g <= 2; ++g) {
            const auto& f = set.field(k, g);
            double m0 = 0.0, m1 = 0.0, l2 = 0.0;
            for (int i = 0; i < nn; ++i) {
                m0 += f[2 * i];
                m1 += f[2 * i + 1];
                l2 += f[2 * i] * f[2 * i] + f[2 * i + 1] * f[2 * i + 1];
            }
            const double h2 = 1.0 / nn;
            l2 = std::sqrt(l2 * h2);
            CHECK(std::fabs(m0 * h2) <= 1e-10 * l2);
            CHECK(std::fabs(m1 * h2) <= 1e-10 * l2);
        }

    // chi_1^2 and chi_2^1 solve the same discrete system
    const auto& c12 = set.field(1, 2);
    const auto& c21 = set.field(2, 1);
    double dev = 0.0;
    for (std::size_t i = 0; i < c12.size(); ++i)
        dev = std::max(dev, std::fabs(c12[i] - c21[i]));
    CHECK(dev <= 1e-8 * std::max(1.0, field_max_abs(c12)));
}

TEST_CASE("cross-inset correctors respect the diagonal reflection") {
    const int n = 16;
    const CorrectorSet set = solve_correctors(kInset, n);
    const PeriodicCellMesh mesh{n};
    const auto& f11 = set.field(1, 1);
    const auto& f22 = set.field(2, 2);
    const double scale = std::max(field_max_abs(f11), 1e-300);
    double dev = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            // component 1 of chi_1^1 at (y1,y2) = component 2 of chi_2^2 at (y2,y1)
            const double a = f11[2 * mesh.node(i, j)];
            const double b = f22[2 * mesh.node(j, i) + 1];
            dev = std::max(dev, std::fabs(a - b));
        }
    CHECK(dev <= 1e-8 * scale);
}

TEST_CASE("layered cell matches the direct-integration reference") {
    CellConfig cfg{CellLayout::layered, {117.0, 0.43}, {77.2, 0.33}};
    const int n = 16;
    const CorrectorSet set = solve_correctors(cfg, n);
    const EffectiveTensor eff = effective_tensor(cfg, set);
    const LaminateReference ref = laminate_reference(cfg, 8 * n);

    double dev = 0.0, scale = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            dev = std::max(dev,
                           std::fabs(eff.tensor.voigt(a, b) - ref.effective[a][b]));
            scale = std::max(scale, std::fabs(ref.effective[a][b]));
        }
    CHECK(dev <= 1e-6 * scale);

    const PeriodicCellMesh mesh{n};
    double l2 = 0.0, rl2 = 0.0;
    for (int k = 1; k <= 2; ++k)
        for (int g = 1; g <= 2; ++g)
            for (int j = 0; j < n; ++j)
                for (int c = 0; c < 2; ++c) {
                    const double a = set.field(k, g)[2 * mesh.node(3, j) + c];
                    const double b = ref.chi[k - 1][g - 1][2 * (j * 8) + c];
                    l2 += (a - b) * (a - b);
                    rl2 += b * b;
                }
    CHECK(std::sqrt(l2) <= 1e-6 * std::sqrt(rl2));
}

TEST_CASE("effective tensor stabilises in resolution for the cross cell") {
    const EffectiveTensor c16 = effective_tensor(kInset, solve_correctors(kInset, 16));
    const EffectiveTensor c32 = effective_tensor(kInset, solve_correctors(kInset, 32));
    std::mt19937 rng(31u);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < 100; ++i) {
        const double x11 = gauss(rng), x22 = gauss(rng), x12 = gauss(rng);
        const double q16 = c16.tensor.quadratic_form(x11, x22, x12);
        const double q32 = c32.tensor.quadratic_form(x11, x22, x12);
        CHECK(std::fabs(q16 - q32) <= 0.02 * std::fabs(q32));
    }
}

TEST_CASE("expansion gradient with zero correctors is the plain gradient") {
    const CellConfig cfg{CellLayout::homogeneous, {77.2, 0.33}, {}};
    const CorrectorSet set = solve_correctors(cfg, 4);
    const StructuredMesh mesh = build_mesh(8, 8, Rect{}, BoundaryRule::all_free);

    std::mt19937 rng(13u);
    std::normal_distribution<double> gauss;
    std::vector<double> u0(2 * mesh.n_nodes());
    for (auto& v : u0) v = gauss(rng);

    const ExpansionGradients eg = expansion_gradient(set, mesh, u0, 0.5);
    const auto gp = q1_gauss_points();
    for (int ey = 0; ey < 8; ++ey)
        for (int ex = 0; ex < 8; ++ex)
            for (int q = 0; q < 4; ++q) {
                const auto ref = q1_gradient(mesh, u0, ex, ey, gp[q].s, gp[q].t);
                const auto got = eg.at(ex, ey, q);
                for (int a = 0; a < 2; ++a)
                    for (int i = 0; i < 2; ++i)
                        CHECK(got[2 * a + i] ==
                              doctest::Approx(ref[a][i]).epsilon(1e-12));
            }
}

TEST_CASE("expansion of a linear field averages back to its gradient") {
    const int n = 8;
    const CorrectorSet set = solve_correctors(kInset, n);
    const StructuredMesh mesh = build_mesh(2 * n, 2 * n, Rect{}, BoundaryRule::all_free);
    const double eps = 0.5;

    std::vector<double> u0(2 * mesh.n_nodes(), 0.0);
    for (int j = 0; j <= mesh.ny; ++j)
        for (int i = 0; i <= mesh.nx; ++i)
            u0[2 * mesh.node(i, j)] = mesh.node_x(i);  // u = x1 e1

    const ExpansionGradients eg = expansion_gradient(set, mesh, u0, eps);
    // average over the first full cell (elements [0,n) x [0,n))
    double avg[4] = {0, 0, 0, 0};
    for (int ey = 0; ey < n; ++ey)
        for (int ex = 0; ex < n; ++ex)
            for (int q = 0; q < 4; ++q) {
                const auto g = eg.at(ex, ey, q);
                for (int c = 0; c < 4; ++c) avg[c] += g[c];
            }
    for (int c = 0; c < 4; ++c) avg[c] /= 4.0 * n * n;
    CHECK(avg[0] == doctest::Approx(1.0).epsilon(1e-10));  // d1 u1
    CHECK(std::fabs(avg[1]) < 1e-10);
    CHECK(std::fabs(avg[2]) < 1e-10);
    CHECK(std::fabs(avg[3]) < 1e-10);
}

TEST_CASE("eps = 1 expansion reproduces the corrector field itself") {
    const int n = 8;
    const CorrectorSet set = solve_correctors(kInset, n);
    const StructuredMesh mesh = build_mesh(n, n, Rect{}, BoundaryRule::all_free);

    std::vector<double> u0(2 * mesh.n_nodes(), 0.0);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            u0[2 * mesh.node(i, j)] = mesh.node_x(i);

    const ExpansionGradients eg = expansion_gradient(set, mesh, u0, 1.0);
    const CorrectorSampler sampler(set);
    const auto gp = q1_gauss_points();
    double chi[2][2][2], dchi[2][2][2][2];
    for (int ey = 0; ey < n; ++ey)
        for (int ex = 0; ex < n; ++ex)
            for (int q = 0; q < 4; ++q) {
                sampler.eval(ex, ey, gp[q].s, gp[q].t, chi, dchi);
                const auto got = eg.at(ex, ey, q);
                for (int a = 0; a < 2; ++a)
                    for (int i = 0; i < 2; ++i) {
                        const double expect =
                            (a == 0 && i == 0 ? 1.0 : 0.0) + dchi[0][0][a][i];
                        CHECK(got[2 * a + i] ==
                              doctest::Approx(expect).epsilon(1e-12));
                    }
            }
}

TEST_CASE("degenerate resolutions are rejected") {
    CHECK_THROWS_AS(solve_correctors(kInset, 1), std::invalid_argument);
}
