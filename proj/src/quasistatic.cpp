#include "homfem/quasistatic.hpp"

#include <algorithm>
#include <cmath>

#include "homfem/kernels.hpp"

namespace homfem {

namespace {

double norm2(std::span<const double> v) {
    return std::sqrt(kernels::active().dot(v.data(), v.data(), v.size()));
}

}  // namespace

std::vector<double> QuasistaticProblem::friction_tau() const {
    std::vector<double> tau(stiffness->n, 0.0);
    for (std::size_t i = 0; i < contact_dofs.size(); ++i)
        tau[contact_dofs[i]] = friction_bound * contact_node_weights[i];
    return tau;
}

void attach_contact(QuasistaticProblem& problem, const StructuredMesh& mesh,
                    const DofMap& dofs) {
    const std::vector<double> w = contact_weights(mesh);
    problem.contact_dofs.clear();
    problem.contact_node_weights.clear();
    for (int i = 0; i <= mesh.nx; ++i) {
        const std::int32_t r = dofs.reduced[2 * mesh.node(i, 0)];
        if (r < 0) continue;
        problem.contact_dofs.push_back(r);
        problem.contact_node_weights.push_back(w[i]);
    }
}

void FrictionProx::apply(std::span<const double> z, std::span<double> out) const {
    kernels::active().soft_threshold(z.data(), tau_step.data(), out.data(),
                                     z.size());
}

FrictionProx make_friction_prox(std::span<const double> tau, double step) {
    FrictionProx prox;
    prox.tau_step.resize(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) prox.tau_step[i] = step * tau[i];
    return prox;
}

std::vector<double> friction_prox(std::span<const double> z,
                                  const FrictionProx& prox) {
    std::vector<double> out(z.size());
    prox.apply(z, out);
    return out;
}

double StepObjective::smooth_value(std::span<const double> w,
                                   std::span<const double> kw) const {
    const auto& kr = kernels::active();
    return 0.5 * scale * kr.dot(w.data(), kw.data(), w.size()) +
           kr.dot(linear.data(), w.data(), w.size());
}

double StepObjective::value(std::span<const double> w,
                            std::span<const double> kw) const {
    double j = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (tau[i] != 0.0) j += tau[i] * std::fabs(w[i]);
    return smooth_value(w, kw) + j;
}

void StepObjective::smooth_gradient(std::span<const double> kw,
                                    std::span<double> g) const {
    kernels::active().waxpby(scale, kw.data(), 1.0, linear.data(), g.data(),
                             g.size());
}

StepObjective step_objective(const QuasistaticProblem& problem,
                             std::span<const double> u_prev, double t_m) {
    StepObjective obj;
    obj.stiffness = problem.stiffness;
    obj.scale = problem.dt();
    obj.linear.resize(problem.stiffness->n);
    obj.tau = problem.friction_tau();
    std::vector<double> l(problem.stiffness->n);
    problem.load(t_m, l);
    problem.stiffness->multiply(u_prev, obj.linear);
    kernels::active().waxpby(1.0, obj.linear.data(), -1.0, l.data(),
                             obj.linear.data(), l.size());
    return obj;
}

double estimate_lipschitz(const CsrMatrix& k, double scale) {
    return 1.1 * scale * power_iteration_max_eigenvalue(k);
}

StepDiagnostics fista_minimize(const StepObjective& objective,
                               std::vector<double>& w, double lipschitz,
                               const FistaOptions& opts, double threshold_cap) {
    const std::size_t n = w.size();
    const auto& kr = kernels::active();
    const CsrMatrix& K = *objective.stiffness;
    StepDiagnostics diag;

    double L = lipschitz;
    FrictionProx prox = make_friction_prox(objective.tau, 1.0 / L);

    std::vector<double> kw(n), kw_prev(n), w_prev(n), y(n), ky(n), g(n), z(n),
        p(n), kcand(n), cand(n);

    K.multiply(w, kw);
    objective.smooth_gradient(kw, g);
    const double g0 = norm2(g);
    double threshold = opts.tol * std::max(1.0, g0);
    if (threshold_cap > 0.0) threshold = std::min(threshold, threshold_cap);
    diag.threshold = threshold;

    auto mapping_norm_at = [&](std::span<const double> wv,
                               std::span<const double> kwv) {
        objective.smooth_gradient(kwv, g);
        kr.waxpby(1.0, wv.data(), -1.0 / L, g.data(), z.data(), n);
        prox.apply(z, p);
        kr.waxpby(1.0, wv.data(), -1.0, p.data(), z.data(), n);
        return L * norm2(z);
    };

    diag.mapping_norm = mapping_norm_at(w, kw);
    if (diag.mapping_norm <= threshold) return diag;

    double f_cur = objective.value(w, kw);
    w_prev = w;
    kw_prev = kw;
    double theta = 1.0, theta_prev = 1.0;

    while (diag.iterations < opts.maxit) {
        ++diag.iterations;
        const double beta = (theta_prev - 1.0) / theta;
        kr.waxpby(1.0 + beta, w.data(), -beta, w_prev.data(), y.data(), n);
        kr.waxpby(1.0 + beta, kw.data(), -beta, kw_prev.data(), ky.data(), n);

        objective.smooth_gradient(ky, g);
        kr.waxpby(1.0, y.data(), -1.0 / L, g.data(), z.data(), n);
        prox.apply(z, cand);
        K.multiply(cand, kcand);
        double f_cand = objective.value(cand, kcand);

        auto increased = [&] {
            return f_cand > f_cur + 1e-14 * (std::fabs(f_cur) + std::fabs(f_cand)) + 1e-300;
        };
        if (increased()) {
            // Restart from the last accepted point: a plain prox step there
            // cannot increase F while L majorises the curvature.
            for (int tries = 0; tries < 4; ++tries) {
                theta = 1.0;
                theta_prev = 1.0;
                objective.smooth_gradient(kw, g);
                kr.waxpby(1.0, w.data(), -1.0 / L, g.data(), z.data(), n);
                prox.apply(z, cand);
                K.multiply(cand, kcand);
                f_cand = objective.value(cand, kcand);
                if (!increased()) break;
                L *= 1.5;  // Lipschitz estimate was too small
                prox = make_friction_prox(objective.tau, 1.0 / L);
            }
        }

        w_prev.swap(w);
        kw_prev.swap(kw);
        w.swap(cand);
        kw.swap(kcand);
        f_cur = f_cand;

        theta_prev = theta;
        theta = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));

        diag.mapping_norm = mapping_norm_at(w, kw);
        if (diag.mapping_norm <= threshold) return diag;
    }
    diag.converged = false;
    return diag;
}

std::vector<double> solve_initial(const QuasistaticProblem& problem) {
    std::vector<double> l(problem.stiffness->n), u(problem.stiffness->n, 0.0);
    problem.load(0.0, l);
    const CgResult res = cg_solve(*problem.stiffness, l, u, problem.cg);
    if (!res.converged)
        throw SolverError("initial solve stalled at relative residual " +
                          std::to_string(res.rel_residual));
    return u;
}

QuasistaticMarcher::QuasistaticMarcher(const QuasistaticProblem& problem)
    : problem_(&problem),
      lipschitz_(estimate_lipschitz(*problem.stiffness, problem.dt())),
      tau_(problem.friction_tau()),
      u_(solve_initial(problem)),
      w_(problem.stiffness->n, 0.0),
      load_(problem.stiffness->n, 0.0),
      linear_(problem.stiffness->n, 0.0) {
    problem.load(0.0, load_);
}

const StepDiagnostics& QuasistaticMarcher::advance() {
    ++m_;
    const double t = time();
    const double dt = problem_->dt();
    problem_->load(t, load_);

    StepObjective obj;
    obj.stiffness = problem_->stiffness;
    obj.scale = dt;
    obj.tau = tau_;
    obj.linear.resize(linear_.size());
    problem_->stiffness->multiply(u_, obj.linear);
    kernels::active().waxpby(1.0, obj.linear.data(), -1.0, load_.data(),
                             obj.linear.data(), load_.size());

    double cap = -1.0;
    if (problem_->fista.vi_guard > 0.0)
        cap = problem_->fista.vi_guard * norm2(load_);

    diag_ = fista_minimize(obj, w_, lipschitz_, problem_->fista, cap);
    kernels::active().waxpby(dt, w_.data(), 1.0, u_.data(), u_.data(),
                             u_.size());
    return diag_;
}

QuasistaticSolution march(const QuasistaticProblem& problem) {
    QuasistaticMarcher marcher(problem);
    QuasistaticSolution sol;
    sol.dt = problem.dt();
    sol.displacements.reserve(problem.steps + 1);
    sol.displacements.emplace_back(marcher.displacement().begin(),
                                   marcher.displacement().end());
    for (int m = 1; m <= problem.steps; ++m) {
        sol.diagnostics.push_back(marcher.advance());
        sol.displacements.emplace_back(marcher.displacement().begin(),
                                       marcher.displacement().end());
    }
    return sol;
}

}  // namespace homfem
