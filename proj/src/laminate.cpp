#include "homfem/laminate.hpp"

#include <stdexcept>

namespace homfem {

namespace {

using Mat2 = std::array<std::array<double, 2>, 2>;
using Vec2 = std::array<double, 2>;

Mat2 inv2(const Mat2& m) {
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (det == 0.0) throw std::invalid_argument("singular layer block");
    return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

Vec2 mul(const Mat2& m, const Vec2& v) {
    return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

// Block of A pairing the y2-derivatives: row/col order (chi'1, chi'2),
// rows are the (sigma12, sigma22) fluxes.
Mat2 direction_block(const ElasticTensor4& a) {
    const auto& v = a.voigt_matrix();
    return {{{v[2][2], v[2][1]}, {v[1][2], v[1][1]}}};
}

std::array<double, 3> unit_strain(int k, int g) {
    if (k == 1 && g == 1) return {1.0, 0.0, 0.0};
    if (k == 2 && g == 2) return {0.0, 1.0, 0.0};
    return {0.0, 0.0, 1.0};
}

}  // namespace

LaminateReference laminate_reference(const CellConfig& config, int m) {
    if (m < 2) throw std::invalid_argument("laminate sampling too coarse");
    const CellCoefficient coeff(config);
    const double dy = 1.0 / m;

    LaminateReference ref;
    ref.samples = m;

    // Midpoint layer data; exact when the layer interfaces sit on the grid.
    std::vector<const ElasticTensor4*> layer(m);
    std::vector<Mat2> dinv(m);
    Mat2 dinv_sum{};
    for (int j = 0; j < m; ++j) {
        layer[j] = &coeff.at(0.5, (j + 0.5) * dy);
        dinv[j] = inv2(direction_block(*layer[j]));
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) dinv_sum[r][c] += dy * dinv[j][r][c];
    }
    const Mat2 dinv_sum_inv = inv2(dinv_sum);

    const std::array<std::pair<int, int>, 4> cases = {
        {{1, 1}, {1, 2}, {2, 1}, {2, 2}}};
    for (const auto& [k, g] : cases) {
        const auto ev = unit_strain(k, g);

        // Constant flux c from periodicity and zero-mean of chi'.
        Vec2 rhs{};
        std::vector<Vec2> gvec(m);
        for (int j = 0; j < m; ++j) {
            const auto s = layer[j]->stress(ev[0], ev[1], 0.5 * ev[2]);
            gvec[j] = {s[2], s[1]};
            const Vec2 dg = mul(dinv[j], gvec[j]);
            rhs[0] += dy * dg[0];
            rhs[1] += dy * dg[1];
        }
        const Vec2 c = mul(dinv_sum_inv, rhs);

        std::vector<double>& chi = ref.chi[k - 1][g - 1];
        chi.assign(2 * (m + 1), 0.0);
        Voigt3& eff = ref.effective;
        const int col = (k == 1 && g == 1) ? 0 : (k == 2 && g == 2) ? 1 : 2;
        Vec2 mean{};
        for (int j = 0; j < m; ++j) {
            const Vec2 slope =
                mul(dinv[j], {c[0] - gvec[j][0], c[1] - gvec[j][1]});
            chi[2 * (j + 1)] = chi[2 * j] + dy * slope[0];
            chi[2 * (j + 1) + 1] = chi[2 * j + 1] + dy * slope[1];
            mean[0] += 0.5 * dy * (chi[2 * j] + chi[2 * (j + 1)]);
            mean[1] += 0.5 * dy * (chi[2 * j + 1] + chi[2 * (j + 1) + 1]);
            // total strain of y_k e_g + chi: engineering components
            const double e11 = ev[0];
            const double e22 = ev[1] + slope[1];
            const double e12 = 0.5 * (ev[2] + slope[0]);
            const auto s = layer[j]->stress(e11, e22, e12);
            if (k <= g) {  // fill each column once ((2,1) repeats (1,2))
                eff[0][col] += dy * s[0];
                eff[1][col] += dy * s[1];
                eff[2][col] += dy * s[2];
            }
        }
        for (int j = 0; j <= m; ++j) {
            chi[2 * j] -= mean[0];
            chi[2 * j + 1] -= mean[1];
        }
    }
    return ref;
}

}  // namespace homfem
