#pragma once

#include <optional>
#include <span>

#include "homfem/cell_problem.hpp"
#include "homfem/mesh.hpp"
#include "homfem/quasistatic.hpp"

namespace homfem {

struct StepErrors {
    double err1 = 0.0;            // |grad(u_eps - u_0)| / |grad u_0|
    double err2 = 0.0;            // expansion-gradient error / |grad u_0|
    double corrector_term = 0.0;  // |grad(expansion - u_0)| / |grad u_0|
    double denom = 0.0;           // |grad u_0|
    double l2_diff = 0.0;         // |u_eps - u_0|_{L2}, reported only
};

// Per-step relative H1-seminorm errors between the oscillating and the
// homogenised solution, both living on the same mesh and dof map. With a
// corrector set attached the expansion error (err2) is evaluated from the
// cell fields at frac(x/eps); without one err2 falls back to err1
// (chi == 0). Keeps running maxima over the evaluated steps.
class ErrorAccumulator {
public:
    ErrorAccumulator(const StructuredMesh& mesh, const DofMap& dofs,
                     const CorrectorSet* correctors, double eps);

    // Throws SolverError when |grad u_0| vanishes.
    StepErrors evaluate(std::span<const double> u_eps_reduced,
                        std::span<const double> u0_reduced);

    double max_err1() const { return max1_; }
    double max_err2() const { return max2_; }
    int steps_evaluated() const { return steps_; }

private:
    const StructuredMesh* mesh_;
    const DofMap* dofs_;
    std::optional<CorrectorSampler> sampler_;
    double eps_;
    double max1_ = 0.0, max2_ = 0.0;
    int steps_ = 0;
};

// Maximum over the steps m = 1..M (t = 0 excluded).
double compute_err1(const StructuredMesh& mesh, const DofMap& dofs,
                    const QuasistaticSolution& u_eps,
                    const QuasistaticSolution& u0);
double compute_err2(const StructuredMesh& mesh, const DofMap& dofs,
                    const QuasistaticSolution& u_eps,
                    const QuasistaticSolution& u0,
                    const CorrectorSet& correctors, double eps);

}  // namespace homfem
