#include "homfem/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace homfem {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Voigt index of the symmetric pair (i,j), i,j in {1,2}.
inline int voigt_index(int i, int j) { return i == j ? i - 1 : 2; }

// Mandel form of a Voigt matrix: T V T with T = diag(1, 1, sqrt(2)).
// Its eigenvalues give the sharp coercivity/boundedness constants on
// symmetric matrices with the Frobenius norm.
Voigt3 mandel(const Voigt3& v) {
    Voigt3 m = v;
    for (int a = 0; a < 3; ++a) {
        m[a][2] *= kSqrt2;
        m[2][a] *= kSqrt2;
    }
    return m;
}

Voigt3 invert3(const Voigt3& a) {
    const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                       a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                       a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if (det == 0.0) throw std::invalid_argument("singular elasticity tensor");
    const double id = 1.0 / det;
    Voigt3 r;
    r[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) * id;
    r[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) * id;
    r[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) * id;
    r[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) * id;
    r[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) * id;
    r[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) * id;
    r[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) * id;
    r[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) * id;
    r[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) * id;
    return r;
}

}  // namespace

std::array<double, 3> sym3_eigenvalues(const Voigt3& m) {
    // Cyclic Jacobi iteration; stays accurate for the repeated eigenvalues of
    // isotropic tensors where the closed-form cubic loses half the digits.
    double a[3][3];
    double scale = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            a[r][c] = m[r][c];
            scale = std::max(scale, std::fabs(a[r][c]));
        }
    if (scale == 0.0) return {0.0, 0.0, 0.0};

    for (int sweep = 0; sweep < 32; ++sweep) {
        const double off = std::fabs(a[0][1]) + std::fabs(a[0][2]) +
                           std::fabs(a[1][2]);
        if (off <= 1e-300 || off <= 4e-16 * scale) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t =
                    std::copysign(1.0, theta) /
                    (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double app = a[p][p] - t * a[p][q];
                const double aqq = a[q][q] + t * a[p][q];
                const int r = 3 - p - q;  // the remaining index
                const double arp = c * a[r][p] - s * a[r][q];
                const double arq = s * a[r][p] + c * a[r][q];
                a[p][p] = app;
                a[q][q] = aqq;
                a[p][q] = a[q][p] = 0.0;
                a[r][p] = a[p][r] = arp;
                a[r][q] = a[q][r] = arq;
            }
    }
    std::array<double, 3> ev{a[0][0], a[1][1], a[2][2]};
    std::sort(ev.begin(), ev.end());
    return ev;
}

ElasticTensor4 ElasticTensor4::from_voigt(const Voigt3& v) {
    ElasticTensor4 t;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) t.v_[a][b] = 0.5 * (v[a][b] + v[b][a]);
    const auto ev = sym3_eigenvalues(mandel(t.v_));
    t.coercivity_ = ev[0];
    t.bound_ = ev[2];
    return t;
}

ElasticTensor4 ElasticTensor4::isotropic(double lambda, double mu) {
    Voigt3 v{};
    v[0][0] = lambda + 2.0 * mu;
    v[1][1] = lambda + 2.0 * mu;
    v[0][1] = v[1][0] = lambda;
    v[2][2] = mu;
    return from_voigt(v);
}

double ElasticTensor4::component(int i, int j, int a, int b) const {
    return v_[voigt_index(i, j)][voigt_index(a, b)];
}

std::array<double, 3> ElasticTensor4::stress(double e11, double e22,
                                             double e12) const {
    const double g = 2.0 * e12;
    return {v_[0][0] * e11 + v_[0][1] * e22 + v_[0][2] * g,
            v_[1][0] * e11 + v_[1][1] * e22 + v_[1][2] * g,
            v_[2][0] * e11 + v_[2][1] * e22 + v_[2][2] * g};
}

double ElasticTensor4::quadratic_form(double x11, double x22,
                                      double x12) const {
    const auto s = stress(x11, x22, x12);
    return s[0] * x11 + s[1] * x22 + 2.0 * s[2] * x12;
}

ElasticTensor4 ElasticTensor4::inverse() const {
    // Invert in Mandel form, then undo the scaling: the result stores the
    // compliance in the same Voigt convention.
    const Voigt3 minv = invert3(mandel(v_));
    Voigt3 v = minv;
    for (int a = 0; a < 3; ++a) {
        v[a][2] /= kSqrt2;
        v[2][a] /= kSqrt2;
    }
    return from_voigt(v);
}

ElasticTensor4& ElasticTensor4::operator+=(const ElasticTensor4& o) {
    Voigt3 v = v_;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) v[a][b] += o.v_[a][b];
    *this = from_voigt(v);
    return *this;
}

ElasticTensor4& ElasticTensor4::operator*=(double s) {
    Voigt3 v = v_;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) v[a][b] *= s;
    *this = from_voigt(v);
    return *this;
}

ElasticTensor4 isotropic_plane_stress(const IsotropicPhase& phase) {
    const double E = phase.youngs_modulus;
    const double nu = phase.poisson_ratio;
    if (!(E > 0.0))
        throw std::invalid_argument("Young's modulus must be positive, got " +
                                    std::to_string(E));
    if (!(nu > -1.0 && nu < 0.5))
        throw std::invalid_argument("Poisson ratio must lie in (-1, 0.5), got " +
                                    std::to_string(nu));
    const double lambda = E * nu / ((1.0 + nu) * (1.0 - nu));
    const double mu = E / (2.0 * (1.0 + nu));
    return ElasticTensor4::isotropic(lambda, mu);
}

}  // namespace homfem
