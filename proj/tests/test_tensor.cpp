#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "homfem/tensor.hpp"

using namespace homfem;

namespace {

Eigen::Matrix3d mandel_of(const ElasticTensor4& t) {
    const double s2 = std::sqrt(2.0);
    Eigen::Matrix3d m;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            double v = t.voigt(a, b);
            if (a == 2) v *= s2;
            if (b == 2) v *= s2;
            m(a, b) = v;
        }
    return m;
}

}  // namespace

TEST_CASE("nu = 0 decouples the normal and shear response") {
    const ElasticTensor4 a = isotropic_plane_stress({1.0, 0.0});
    CHECK(a.component(1, 1, 1, 1) == doctest::Approx(1.0));
    CHECK(a.component(1, 2, 1, 2) == doctest::Approx(0.5));
    CHECK(a.component(1, 1, 2, 2) == doctest::Approx(0.0));
}

TEST_CASE("plane-stress moduli of the reference phases") {
    // lambda = E nu / ((1+nu)(1-nu)), mu = E / (2(1+nu))
    const ElasticTensor4 a = isotropic_plane_stress({77.2, 0.33});
    const double lambda = 28.58938390753002;
    const double mu = 29.022556390977442;
    CHECK(a.voigt(0, 0) == doctest::Approx(lambda + 2 * mu).epsilon(1e-14));
    CHECK(a.voigt(0, 1) == doctest::Approx(lambda).epsilon(1e-14));
    CHECK(a.voigt(2, 2) == doctest::Approx(mu).epsilon(1e-14));

    const ElasticTensor4 b = isotropic_plane_stress({117.0, 0.43});
    CHECK(b.voigt(0, 1) == doctest::Approx(61.72248803827751).epsilon(1e-14));
    CHECK(b.voigt(2, 2) == doctest::Approx(40.909090909090914).epsilon(1e-14));
}

TEST_CASE("coercivity of the stiff phase is 2 mu on random strains") {
    const ElasticTensor4 a = isotropic_plane_stress({117.0, 0.43});
    const double mu = 40.909090909090914;
    CHECK(a.coercivity() == doctest::Approx(2 * mu).epsilon(1e-12));

    // eigen-decomposition oracle for the sharp constant
    const Eigen::Vector3d ev =
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(mandel_of(a)).eigenvalues();
    CHECK(a.coercivity() == doctest::Approx(ev(0)).epsilon(1e-12));
    CHECK(a.bound() == doctest::Approx(ev(2)).epsilon(1e-12));

    std::mt19937 rng(11u);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < 100; ++i) {
        const double x11 = gauss(rng), x22 = gauss(rng), x12 = gauss(rng);
        const double norm_sq = x11 * x11 + x22 * x22 + 2 * x12 * x12;
        CHECK(a.quadratic_form(x11, x22, x12) >=
              a.coercivity() * norm_sq * (1.0 - 1e-12));
    }
}

TEST_CASE("invalid phases are rejected") {
    CHECK_THROWS_AS(isotropic_plane_stress({-1.0, 0.3}), std::invalid_argument);
    CHECK_THROWS_AS(isotropic_plane_stress({0.0, 0.3}), std::invalid_argument);
    CHECK_THROWS_AS(isotropic_plane_stress({1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(isotropic_plane_stress({1.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(isotropic_plane_stress({1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("random valid phases give symmetric coercive tensors") {
    std::mt19937 rng(23u);
    std::uniform_real_distribution<double> emod(0.1, 300.0);
    std::uniform_real_distribution<double> pois(-0.95, 0.49);
    for (int i = 0; i < 200; ++i) {
        const ElasticTensor4 a = isotropic_plane_stress({emod(rng), pois(rng)});
        for (int p = 1; p <= 2; ++p)
            for (int q = 1; q <= 2; ++q)
                for (int r = 1; r <= 2; ++r)
                    for (int s = 1; s <= 2; ++s) {
                        CHECK(a.component(p, q, r, s) == a.component(q, p, r, s));
                        CHECK(a.component(p, q, r, s) == a.component(p, q, s, r));
                        CHECK(a.component(p, q, r, s) == a.component(r, s, p, q));
                    }
        CHECK(a.coercivity() > 0.0);
        const Eigen::Vector3d ev =
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(mandel_of(a))
                .eigenvalues();
        CHECK(a.coercivity() ==
              doctest::Approx(ev(0)).epsilon(1e-10).scale(ev(2)));
    }
}

TEST_CASE("analytic 3x3 eigenvalues match the dense oracle") {
    std::mt19937 rng(5u);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < 200; ++i) {
        Voigt3 m{};
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b) m[a][b] = m[b][a] = gauss(rng);
        const auto ours = sym3_eigenvalues(m);
        Eigen::Matrix3d em;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) em(a, b) = m[a][b];
        const Eigen::Vector3d ev =
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(em).eigenvalues();
        const double scale = std::max(1.0, std::fabs(ev(2)));
        for (int j = 0; j < 3; ++j)
            CHECK(ours[j] == doctest::Approx(ev(j)).epsilon(1e-10).scale(scale));
    }
}

TEST_CASE("compliance inverts the tensor") {
    const ElasticTensor4 a = isotropic_plane_stress({77.2, 0.33});
    const ElasticTensor4 ainv = a.inverse();
    const Eigen::Matrix3d prod = mandel_of(a) * mandel_of(ainv);
    CHECK((prod - Eigen::Matrix3d::Identity()).norm() < 1e-13);
}
