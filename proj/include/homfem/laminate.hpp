#pragma once

#include <array>
#include <vector>

#include "homfem/cell_geometry.hpp"
#include "homfem/tensor.hpp"

namespace homfem {

// Semi-analytic reference for cells that vary only in y2 (the layered
// layout). The cell problem reduces to a two-point ODE in y2 whose flux is
// constant, so chi' and the effective tensor follow from direct integration
// of the layer data. Independent of the finite-element solver; used as the
// cross-check oracle.
struct LaminateReference {
    // chi_k^g sampled at the m+1 uniform grid nodes (zero mean, periodic);
    // component a of corrector (k, g) at node j is chi[k-1][g-1][2*j + a].
    std::array<std::array<std::vector<double>, 2>, 2> chi;
    Voigt3 effective{};
    int samples = 0;
};

// `m` is the sampling resolution of the returned corrector profiles; the
// effective tensor is exact for piecewise-constant layers resolved by m.
LaminateReference laminate_reference(const CellConfig& config, int m);

}  // namespace homfem
