#pragma once

#include <string>
#include <vector>

#include "homfem/cell_geometry.hpp"
#include "homfem/cell_problem.hpp"
#include "homfem/metrics.hpp"
#include "homfem/quasistatic.hpp"

namespace homfem {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Discretisation presets. `desk` is the scaled configuration used by the
// default test runs; `paper` is the full-resolution long-running mode.
enum class Profile { desk, paper };

// One experiment case: unit square, N x N cells of the chosen layout,
// Dirichlet right / traction left / friction bottom, loads linear in time.
// Defaults carry the reference two-phase data: the cross inclusion is the
// (77.2 GPa, 0.33) material, the matrix is (117.0 GPa, 0.43).
struct ExperimentConfig {
    CellLayout layout = CellLayout::cross_inset;
    double E0 = 117.0, nu0 = 0.43;  // phase 0, matrix
    double E1 = 77.2, nu1 = 0.33;   // phase 1, inclusion
    int N = 4;                      // cells per axis, eps = 1/N
    int cellres = 8;                // elements per cell edge
    int M = 128;                    // time steps
    double T = 1.0;                 // s
    double HT = 0.004;              // GPa
    double f2 = -1.0e-4;            // body force, GN/m^3 (f1 = 0)
    double trac_a = 0.08;           // traction (a*(1.25 - x2)*t, b*t), GPa
    double trac_b = -0.01;
    double tol_opt = 1e-10;
    double tol_cg = 1e-12;
    std::string out = "out";

    double eps() const { return 1.0 / N; }
    int mesh_n() const { return N * cellres; }
    CellConfig cell() const {
        return {layout, {E0, nu0}, {E1, nu1}};
    }
};

// Line-oriented `key = value` file; '#' starts a comment. Unknown keys and
// malformed values raise ConfigError with the line number. Parsed values
// overlay `base`, so a file only has to name what it changes.
ExperimentConfig parse_config_file(const std::string& path,
                                   ExperimentConfig base = {});
void apply_key_value(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value);

void apply_profile(ExperimentConfig& cfg, Profile profile);
std::vector<int> profile_sweep_cells(Profile profile);
double profile_rate_tol(Profile profile);

struct CaseResult {
    int N = 0;
    double eps = 0.0, h = 0.0;
    double err1 = 0.0, err2 = 0.0;
    double seconds = 0.0;
    bool optimizer_clean = true;  // no step hit maxit
};

// Named stages for error reporting of run_case.
struct StageError : std::runtime_error {
    std::string stage;
    StageError(std::string stage_, const std::string& what)
        : std::runtime_error("[" + stage_ + "] " + what), stage(std::move(stage_)) {}
};

// Correctors + effective tensor, oscillating and homogenised march on the
// shared mesh/time grid, error maxima over t in (0, T].
CaseResult run_case(const ExperimentConfig& cfg);

struct SweepReport {
    std::vector<CaseResult> rows;
    double rate = 0.0;           // fitted err2 ~ C eps^rate
    double plateau_ratio = 0.0;  // max/min of err1 across rows
    double rate_tol = 0.1;
    bool pass = false;
};

// log2 least-squares slope of err2 against eps.
double fit_rate(const std::vector<double>& eps, const std::vector<double>& err2);

// Verdict on already-computed rows: rate within [0.5 - rate_tol, 0.5 + rate_tol]
// and err1 plateau ratio <= 1.15.
SweepReport evaluate_rows(std::vector<CaseResult> rows, double rate_tol);

// Cases are independent; with threads > 1 they run concurrently (each case
// itself stays sequential, so the rows do not depend on the thread count).
SweepReport run_sweep(const ExperimentConfig& base, const std::vector<int>& cells,
                      double rate_tol, int threads = 1);

// report.csv with header N,eps,h,err1,err2, values at five decimals.
std::string report_csv(const std::vector<CaseResult>& rows);
std::string rates_txt(const SweepReport& report);
void write_file(const std::string& path, const std::string& content);

// Helpers shared with the CLI.
std::string corrector_csv(const CorrectorSet& set);
std::string effective_tensor_csv(const EffectiveTensor& eff);
std::string snapshot_csv(const StructuredMesh& mesh, const DofMap& dofs,
                         std::span<const double> u_reduced);

// Problem assembly for one coefficient field (shared by run_case and tests).
struct AssembledCase {
    StructuredMesh mesh;
    DofMap dofs;
    CsrMatrix k_eps;   // oscillating coefficients A(x/eps)
    CsrMatrix k_hom;   // constant effective tensor
    std::vector<double> body;           // reduced
    std::vector<double> traction_unit;  // reduced, at t = 1
    CorrectorSet correctors;
    EffectiveTensor effective;
};
AssembledCase assemble_case(const ExperimentConfig& cfg);
QuasistaticProblem make_problem(const ExperimentConfig& cfg,
                                const AssembledCase& parts, const CsrMatrix& k);

}  // namespace homfem
