#pragma once

#include <array>

namespace homfem {

using Voigt3 = std::array<std::array<double, 3>, 3>;

// Rank-4 plane elasticity tensor with both minor symmetries and the major
// symmetry, stored as the symmetric 3x3 Voigt matrix acting on engineering
// strain (e11, e22, 2*e12). Component order of the Voigt axes is 11, 22, 12.
class ElasticTensor4 {
public:
    ElasticTensor4() = default;

    // From a (possibly slightly asymmetric) 3x3; the stored matrix is the
    // symmetric part. Coercivity and boundedness constants come from the
    // eigenvalues of the Mandel form.
    static ElasticTensor4 from_voigt(const Voigt3& v);

    // A = lambda I (x) I + 2 mu I_sym with the plane-stress lambda.
    static ElasticTensor4 isotropic(double lambda, double mu);

    double voigt(int a, int b) const { return v_[a][b]; }
    const Voigt3& voigt_matrix() const { return v_; }

    // Component A_{ij}^{ab} with sigma_ij = A_{ij}^{ab} eps_ab; indices in {1,2}.
    double component(int i, int j, int a, int b) const;

    // sigma = A : eps for symmetric eps given as (e11, e22, e12);
    // returns (s11, s22, s12).
    std::array<double, 3> stress(double e11, double e22, double e12) const;

    // xi : A : xi for symmetric xi.
    double quadratic_form(double x11, double x22, double x12) const;

    // Largest m with xi:A:xi >= m |xi|^2 (smallest Mandel eigenvalue), and the
    // matching upper bound M.
    double coercivity() const { return coercivity_; }
    double bound() const { return bound_; }

    // Compliance tensor: quadratic_form of the result on a stress sigma equals
    // sigma : A^{-1} : sigma.
    ElasticTensor4 inverse() const;

    ElasticTensor4& operator+=(const ElasticTensor4& o);
    ElasticTensor4& operator*=(double s);

private:
    Voigt3 v_{};  // zero-initialised
    double coercivity_ = 0.0;
    double bound_ = 0.0;
};

// Eigenvalues of a symmetric 3x3 matrix, ascending (analytic, Cardano form).
std::array<double, 3> sym3_eigenvalues(const Voigt3& m);

struct IsotropicPhase {
    double youngs_modulus = 0.0;  // GPa
    double poisson_ratio = 0.0;   // in (-1, 0.5)
};

// Plane-stress constitutive tensor of an isotropic phase,
// lambda = E nu / ((1+nu)(1-nu)), mu = E / (2(1+nu)).
// Throws std::invalid_argument when E <= 0 or nu is outside (-1, 0.5).
ElasticTensor4 isotropic_plane_stress(const IsotropicPhase& phase);

}  // namespace homfem
