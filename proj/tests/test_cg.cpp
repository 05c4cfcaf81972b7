#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "homfem/cg.hpp"

using namespace homfem;

namespace {

CsrMatrix dense_to_csr(const Eigen::MatrixXd& d) {
    CsrMatrix k;
    k.n = static_cast<std::int32_t>(d.rows());
    k.ptr.push_back(0);
    for (std::int32_t r = 0; r < k.n; ++r) {
        for (std::int32_t c = 0; c < k.n; ++c)
            if (d(r, c) != 0.0) {
                k.col.push_back(c);
                k.val.push_back(d(r, c));
            }
        k.ptr.push_back(static_cast<std::int32_t>(k.col.size()));
    }
    return k;
}

}  // namespace

TEST_CASE("identity converges in one iteration") {
    const CsrMatrix k = dense_to_csr(Eigen::MatrixXd::Identity(6, 6));
    std::vector<double> b{1, -2, 3, 0.5, 0, 9}, x(6, 0.0);
    const CgResult res = cg_solve(k, b, x);
    CHECK(res.converged);
    CHECK(res.iterations == 1);
    for (int i = 0; i < 6; ++i) CHECK(x[i] == doctest::Approx(b[i]));
}

TEST_CASE("diagonal system") {
    Eigen::MatrixXd d(2, 2);
    d << 2, 0, 0, 8;
    const CsrMatrix k = dense_to_csr(d);
    std::vector<double> b{2, 8}, x(2, 0.0);
    CHECK(cg_solve(k, b, x).converged);
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("random SPD system matches the dense factorization oracle") {
    std::mt19937 rng(42u);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd b(50, 50);
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j) b(i, j) = gauss(rng);
    const Eigen::MatrixXd spd =
        b * b.transpose() + 50.0 * Eigen::MatrixXd::Identity(50, 50);
    Eigen::VectorXd rhs(50);
    for (int i = 0; i < 50; ++i) rhs(i) = gauss(rng);

    const Eigen::VectorXd oracle = spd.llt().solve(rhs);

    const CsrMatrix k = dense_to_csr(spd);
    std::vector<double> bb(rhs.data(), rhs.data() + 50), x(50, 0.0);
    const CgResult res = cg_solve(k, bb, x, CgOptions{1e-13, 0});
    CHECK(res.converged);
    for (int i = 0; i < 50; ++i)
        CHECK(x[i] == doctest::Approx(oracle(i)).epsilon(1e-9));

    // non-convergence is reported, not thrown
    std::vector<double> y(50, 0.0);
    const CgResult capped = cg_solve(k, bb, y, CgOptions{1e-13, 2});
    CHECK(!capped.converged);
    CHECK(capped.iterations == 2);
    CHECK(capped.rel_residual > 0.0);
}

TEST_CASE("zero right-hand side returns zero") {
    const CsrMatrix k = dense_to_csr(Eigen::MatrixXd::Identity(4, 4));
    std::vector<double> b(4, 0.0), x{1, 2, 3, 4};
    const CgResult res = cg_solve(k, b, x);
    CHECK(res.converged);
    for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("semidefinite system with a nullspace projector") {
    // path-graph Laplacian with periodic wrap: nullspace = constants
    const int n = 12;
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        lap(i, i) = 2.0;
        lap(i, (i + 1) % n) -= 1.0;
        lap(i, (i + n - 1) % n) -= 1.0;
    }
    const CsrMatrix k = dense_to_csr(lap);

    NullspaceProjector proj = [](std::span<double> v) {
        double mean = 0.0;
        for (double q : v) mean += q;
        mean /= double(v.size());
        for (double& q : v) q -= mean;
    };

    std::mt19937 rng(9u);
    std::normal_distribution<double> gauss;
    std::vector<double> b(n), x(n, 0.0);
    for (auto& v : b) v = gauss(rng);
    proj(b);  // consistent right-hand side

    const CgResult res = cg_solve(k, b, x, CgOptions{1e-12, 0}, &proj);
    CHECK(res.converged);

    double mean = 0.0, rmax = 0.0;
    std::vector<double> kx(n);
    k.multiply(x, kx);
    for (int i = 0; i < n; ++i) {
        mean += x[i];
        rmax = std::max(rmax, std::fabs(kx[i] - b[i]));
    }
    CHECK(std::fabs(mean) < 1e-12);
    CHECK(rmax < 1e-10);
}
