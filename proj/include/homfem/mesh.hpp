#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace homfem {

enum class NodeTag : std::uint8_t { free, dirichlet, neumann, contact };

// Boundary classification rule applied by build_mesh.
//   contact_problem: right edge Dirichlet, left edge Neumann, bottom edge
//     contact, top edge free. The (nx,0) corner is Dirichlet, the (0,0)
//     corner is contact.
//   all_free: no constrained nodes (used for unconstrained operators).
enum class BoundaryRule { contact_problem, all_free };

struct Rect {
    double x0 = 0.0, y0 = 0.0;
    double lx = 1.0, ly = 1.0;
};

// Uniform quadrilateral mesh with bilinear elements.
struct StructuredMesh {
    int nx = 0, ny = 0;
    Rect rect;
    std::vector<NodeTag> tags;  // per node

    double hx() const { return rect.lx / nx; }
    double hy() const { return rect.ly / ny; }
    int n_nodes() const { return (nx + 1) * (ny + 1); }
    int n_elems() const { return nx * ny; }

    int node(int i, int j) const { return j * (nx + 1) + i; }
    double node_x(int i) const { return rect.x0 + i * hx(); }
    double node_y(int j) const { return rect.y0 + j * hy(); }

    // Counterclockwise corner nodes of element (ex, ey).
    std::array<int, 4> elem_nodes(int ex, int ey) const {
        const int n0 = node(ex, ey);
        return {n0, n0 + 1, n0 + nx + 2, n0 + nx + 1};
    }
};

StructuredMesh build_mesh(int nx, int ny, const Rect& rect, BoundaryRule rule);

// Two displacement unknowns per node; full dof index is 2*node + component.
// Dirichlet nodes fix both components, contact nodes fix the normal (u2)
// component on the bottom edge and leave the tangential (u1) free.
struct DofMap {
    int n_nodes = 0;
    int n_free = 0;
    std::vector<std::int32_t> reduced;  // 2*n_nodes entries, -1 when fixed

    bool is_free(int dof) const { return reduced[dof] >= 0; }
};

DofMap build_dofmap(const StructuredMesh& mesh);

// Trapezoid weights of the contact-boundary nodes, left to right: h/2 at the
// two ends, h inside; they sum to the length of the contact edge.
// Throws std::invalid_argument when the mesh has no contact boundary.
std::vector<double> contact_weights(const StructuredMesh& mesh);

// Scatter a reduced vector to 2*n_nodes nodal values, zero on fixed dofs.
std::vector<double> expand_to_nodes(std::span<const double> reduced,
                                    const DofMap& dofs);
// Gather the free entries of a full nodal vector.
std::vector<double> restrict_to_free(std::span<const double> full,
                                     const DofMap& dofs);

// Plain-text dump of node tags and dof numbering (debugging aid).
std::string debug_dump(const StructuredMesh& mesh, const DofMap& dofs);

}  // namespace homfem
