#pragma once

#include <string>
#include <vector>

namespace homfem::checks {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Acceptance checks, one per criterion. Each returns pass/fail plus a short
// summary of the measured quantities.
CheckResult trivial_homogenization();       // homogeneous cell collapses
CheckResult effective_tensor_properties();  // symmetry, coercivity, bounds, D4
CheckResult laminate_oracle();              // layered cell vs 1D integration
CheckResult vi_optimality();                // per-step VI residual + stick-slip
CheckResult ht_zero_degeneration();         // H_T = 0 equals direct solves
CheckResult rate_reproduction_desk();       // scaled sweep rate window
CheckResult full_paper_profile();           // table reproduction (hours)
CheckResult negative_control();             // verdict logic on injected data

// The fast subset (criteria without a time march) used by `verify`.
std::vector<CheckResult> run_fast_suite();

}  // namespace homfem::checks
