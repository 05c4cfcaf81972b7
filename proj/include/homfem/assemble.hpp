#pragma once

#include <array>
#include <functional>

#include "homfem/mesh.hpp"
#include "homfem/sparse.hpp"
#include "homfem/tensor.hpp"

namespace homfem {

using ElemStiffness = std::array<std::array<double, 8>, 8>;

// 8x8 bilinear element stiffness for a constant tensor, 2x2 Gauss (exact
// here). Local dof order: (n0 u1, n0 u2, n1 u1, ..., n3 u2) with nodes
// counterclockwise.
ElemStiffness element_stiffness(double hx, double hy, const ElasticTensor4& a);

using CoefficientFn = std::function<const ElasticTensor4&(int ex, int ey)>;

// Stiffness over the free dofs; rows/columns of fixed dofs are eliminated
// (their prescribed value is zero). The coefficient is constant per element.
// Throws std::invalid_argument when an element tensor is not coercive.
CsrMatrix assemble_stiffness(const StructuredMesh& mesh,
                             const CoefficientFn& coeff, const DofMap& dofs);

// Reduced load vector of a constant body force (f1, f2).
std::vector<double> assemble_body_load(const StructuredMesh& mesh,
                                       const std::array<double, 2>& f,
                                       const DofMap& dofs);

// Traction on the Neumann (left) edge as a function of x2 and time,
// integrated with 2-point Gauss per boundary segment.
using TractionFn = std::function<std::array<double, 2>(double x2, double time)>;
std::vector<double> assemble_traction(const StructuredMesh& mesh,
                                      const TractionFn& t_fn, double time,
                                      const DofMap& dofs);

// Gradient g[a][i] = d_i u^a of a Q1 field at local point (s,t) of element
// (ex,ey); `nodal` holds 2*n_nodes interleaved components.
std::array<std::array<double, 2>, 2> q1_gradient(const StructuredMesh& mesh,
                                                 std::span<const double> nodal,
                                                 int ex, int ey, double s,
                                                 double t);

// L2 norm squared of the gradient over the mesh (2x2 Gauss).
double grad_norm_sq(const StructuredMesh& mesh, std::span<const double> nodal);

}  // namespace homfem
