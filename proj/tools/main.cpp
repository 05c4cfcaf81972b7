// Command-line driver: cell problems, single quasistatic runs, convergence
// sweeps and the property suite.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "homfem/checks.hpp"
#include "homfem/experiment.hpp"
#include "homfem/kernels.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitVerdict = 3;

struct CommonArgs {
    std::string config;
    std::string profile = "desk";
    std::string out;
    int threads = 1;
};

homfem::ExperimentConfig load_config(const CommonArgs& args) {
    using namespace homfem;
    const Profile profile =
        args.profile == "paper" ? Profile::paper : Profile::desk;
    ExperimentConfig cfg;
    apply_profile(cfg, profile);
    // File values win over the profile for everything they set.
    if (!args.config.empty()) cfg = parse_config_file(args.config, cfg);
    if (!args.out.empty()) cfg.out = args.out;
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "key = value configuration file");
    cmd->add_option("--profile", args.profile, "desk or paper discretisation")
        ->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--out", args.out, "output directory");
    cmd->add_option("--threads", args.threads, "worker count (sweep cases)")
        ->check(CLI::PositiveNumber);
}

int run_cell(const CommonArgs& args) {
    using namespace homfem;
    const ExperimentConfig cfg = load_config(args);
    const CorrectorSet set = solve_correctors(cfg.cell(), cfg.cellres, cfg.tol_cg);
    const EffectiveTensor eff = effective_tensor(cfg.cell(), set);
    write_file(cfg.out + "/correctors.csv", corrector_csv(set));
    write_file(cfg.out + "/effective_tensor.csv", effective_tensor_csv(eff));
    std::printf("effective tensor (Voigt rows 11,22,12):\n");
    for (int a = 0; a < 3; ++a)
        std::printf("  % .8f % .8f % .8f\n", eff.tensor.voigt(a, 0),
                    eff.tensor.voigt(a, 1), eff.tensor.voigt(a, 2));
    std::printf("coercivity m = %.6f, resolution %d, max |grad chi| = %.4f\n",
                eff.tensor.coercivity(), eff.resolution,
                eff.max_corrector_gradient);
    std::printf("wrote %s/correctors.csv and %s/effective_tensor.csv\n",
                cfg.out.c_str(), cfg.out.c_str());
    return kExitOk;
}

int run_solve(const CommonArgs& args) {
    using namespace homfem;
    const ExperimentConfig cfg = load_config(args);
    AssembledCase parts = assemble_case(cfg);
    const QuasistaticProblem problem = make_problem(cfg, parts, parts.k_eps);
    QuasistaticMarcher marcher(problem);

    std::string log = "step time iterations mapping_norm threshold converged\n";
    bool clean = true;
    char line[160];
    for (int m = 1; m <= cfg.M; ++m) {
        const StepDiagnostics d = marcher.advance();
        clean = clean && d.converged;
        std::snprintf(line, sizeof line, "%d %.6f %d %.3e %.3e %d\n", m,
                      marcher.time(), d.iterations, d.mapping_norm, d.threshold,
                      d.converged ? 1 : 0);
        log += line;
    }
    write_file(cfg.out + "/diagnostics.txt", log);
    write_file(cfg.out + "/snapshot_final.csv",
               snapshot_csv(parts.mesh, parts.dofs, marcher.displacement()));
    std::printf("marched %d steps on a %dx%d mesh; final |u| stored in "
                "%s/snapshot_final.csv\n",
                cfg.M, parts.mesh.nx, parts.mesh.ny, cfg.out.c_str());
    if (!clean)
        std::printf("warning: optimizer hit the iteration cap on some steps "
                    "(see diagnostics.txt)\n");
    return kExitOk;
}

int run_sweep_cmd(const CommonArgs& args) {
    using namespace homfem;
    const Profile profile =
        args.profile == "paper" ? Profile::paper : Profile::desk;
    const ExperimentConfig base = load_config(args);
    const SweepReport rep = run_sweep(base, profile_sweep_cells(profile),
                                      profile_rate_tol(profile), args.threads);
    write_file(base.out + "/report.csv", report_csv(rep.rows));
    write_file(base.out + "/rates.txt", rates_txt(rep));
    std::printf("%s", report_csv(rep.rows).c_str());
    std::printf("%s", rates_txt(rep).c_str());
    return rep.pass ? kExitOk : kExitVerdict;
}

int run_verify(const CommonArgs&) {
    bool all = true;
    for (const auto& r : homfem::checks::run_fast_suite()) {
        std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        all = all && r.pass;
    }
    return all ? kExitOk : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasistatic friction contact on periodic composites"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string kernel = "auto";
    app.add_option("--kernels", kernel, "vector kernel backend")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    auto* cell = app.add_subcommand("cell", "correctors and effective tensor");
    auto* solve = app.add_subcommand("solve", "single quasistatic run");
    auto* sweep = app.add_subcommand("sweep", "convergence study and verdict");
    auto* verify = app.add_subcommand("verify", "fast property suite");
    for (auto* cmd : {cell, solve, sweep, verify}) add_common(cmd, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        homfem::kernels::select(kernel);
        if (cell->parsed()) return run_cell(args);
        if (solve->parsed()) return run_solve(args);
        if (sweep->parsed()) return run_sweep_cmd(args);
        if (verify->parsed()) return run_verify(args);
    } catch (const homfem::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    }
    return kExitUsage;
}
