#pragma once

#include <functional>
#include <span>
#include <vector>

#include "homfem/cg.hpp"
#include "homfem/mesh.hpp"
#include "homfem/sparse.hpp"

namespace homfem {

struct FistaOptions {
    double tol = 1e-10;     // on the composite gradient mapping,
                            // relative to max(1, |grad smooth(w_init)|)
    int maxit = 20000;      // per time step
    double vi_guard = 1e-9; // extra cap tol_m <= vi_guard * |L(t_m)|; <= 0 disables
};

struct StepDiagnostics {
    int iterations = 0;
    double mapping_norm = 0.0;
    double threshold = 0.0;
    bool converged = true;
};

// Time-discrete quasistatic friction problem over the reduced dofs. The
// unknown of each step is the velocity w = (u^m - u^{m-1}) / dt, minimising
//   F(w) = dt/2 w'Kw + (K u_prev - L(t_m))' w + H_T sum_i omega_i |w_i|
// over the contact-tangential dofs i.
struct QuasistaticProblem {
    const CsrMatrix* stiffness = nullptr;
    std::function<void(double t, std::span<double>)> load;  // reduced L(t)
    double friction_bound = 0.0;                            // H_T
    std::vector<std::int32_t> contact_dofs;                 // reduced u1 dofs on the contact edge
    std::vector<double> contact_node_weights;               // matching trapezoid weights
    double horizon = 1.0;                                   // T
    int steps = 1;                                          // M
    FistaOptions fista;
    CgOptions cg;

    double dt() const { return horizon / steps; }
    // |w_i| coefficients per reduced dof: H_T * omega_i, zero off contact.
    std::vector<double> friction_tau() const;
};

// Fill contact_dofs/contact_node_weights from the tagged mesh (free u1 dofs
// of the bottom edge; the Dirichlet corner carries no unknown).
void attach_contact(QuasistaticProblem& problem, const StructuredMesh& mesh,
                    const DofMap& dofs);

// Soft-threshold operator of the lumped friction term for a fixed prox step.
struct FrictionProx {
    std::vector<double> tau_step;  // per reduced dof, already times the step

    void apply(std::span<const double> z, std::span<double> out) const;
};

FrictionProx make_friction_prox(std::span<const double> tau, double step);
std::vector<double> friction_prox(std::span<const double> z,
                                  const FrictionProx& prox);

// One time step as a quadratic-plus-nonsmooth functional.
struct StepObjective {
    const CsrMatrix* stiffness = nullptr;
    double scale = 1.0;          // dt
    std::vector<double> linear;  // K u_prev - L(t_m)
    std::vector<double> tau;     // |w_i| coefficients

    // kw must hold K*w.
    double smooth_value(std::span<const double> w, std::span<const double> kw) const;
    double value(std::span<const double> w, std::span<const double> kw) const;
    void smooth_gradient(std::span<const double> kw, std::span<double> g) const;
};

StepObjective step_objective(const QuasistaticProblem& problem,
                             std::span<const double> u_prev, double t_m);

// Monotone FISTA (function-value restart, fixed 1/L step). Converges when
// the composite gradient mapping norm falls below
//   min(tol * max(1, |grad smooth(w_init)|), threshold_cap).
// Reaching maxit is reported, not thrown. w holds the warm start on entry and
// the minimiser on return (a prox output, so stick dofs are exact zeros).
StepDiagnostics fista_minimize(const StepObjective& objective,
                               std::vector<double>& w, double lipschitz,
                               const FistaOptions& opts,
                               double threshold_cap = -1.0);

// L >= lambda_max(dt K), power iteration with a 1.1 safety factor.
double estimate_lipschitz(const CsrMatrix& k, double scale);

struct QuasistaticSolution {
    double dt = 0.0;
    std::vector<std::vector<double>> displacements;  // u^0 .. u^M, reduced
    std::vector<StepDiagnostics> diagnostics;        // steps 1 .. M
};

// K u = L(0); throws SolverError when CG fails.
std::vector<double> solve_initial(const QuasistaticProblem& problem);

// Incremental driver: initial solve on construction, then advance() once per
// step, warm-starting each minimisation from the previous velocity.
class QuasistaticMarcher {
public:
    explicit QuasistaticMarcher(const QuasistaticProblem& problem);

    int step() const { return m_; }
    double time() const { return m_ * problem_->dt(); }
    std::span<const double> displacement() const { return u_; }
    std::span<const double> velocity() const { return w_; }
    std::span<const double> load() const { return load_; }
    const StepDiagnostics& diagnostics() const { return diag_; }
    double lipschitz() const { return lipschitz_; }

    const StepDiagnostics& advance();

private:
    const QuasistaticProblem* problem_;
    double lipschitz_ = 0.0;
    std::vector<double> tau_;
    std::vector<double> u_, w_, load_, linear_;
    StepDiagnostics diag_;
    int m_ = 0;
};

QuasistaticSolution march(const QuasistaticProblem& problem);

}  // namespace homfem
