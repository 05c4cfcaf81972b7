#include "homfem/mesh.hpp"

#include <sstream>
#include <stdexcept>

namespace homfem {

StructuredMesh build_mesh(int nx, int ny, const Rect& rect, BoundaryRule rule) {
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("mesh needs at least one element per axis");
    StructuredMesh mesh;
    mesh.nx = nx;
    mesh.ny = ny;
    mesh.rect = rect;
    mesh.tags.assign(mesh.n_nodes(), NodeTag::free);
    if (rule == BoundaryRule::contact_problem) {
        // Precedence at corners: Dirichlet beats contact beats Neumann.
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i <= nx; ++i) {
                NodeTag t = NodeTag::free;
                if (i == nx)
                    t = NodeTag::dirichlet;
                else if (j == 0)
                    t = NodeTag::contact;
                else if (i == 0)
                    t = NodeTag::neumann;
                mesh.tags[mesh.node(i, j)] = t;
            }
    }
    return mesh;
}

DofMap build_dofmap(const StructuredMesh& mesh) {
    DofMap dofs;
    dofs.n_nodes = mesh.n_nodes();
    dofs.reduced.assign(2 * dofs.n_nodes, -1);
    std::int32_t next = 0;
    for (int n = 0; n < dofs.n_nodes; ++n) {
        const NodeTag t = mesh.tags[n];
        const bool u1_free = t != NodeTag::dirichlet;
        const bool u2_free = t != NodeTag::dirichlet && t != NodeTag::contact;
        if (u1_free) dofs.reduced[2 * n] = next++;
        if (u2_free) dofs.reduced[2 * n + 1] = next++;
    }
    dofs.n_free = next;
    return dofs;
}

std::vector<double> contact_weights(const StructuredMesh& mesh) {
    bool any = false;
    for (int i = 0; i <= mesh.nx; ++i)
        any = any || mesh.tags[mesh.node(i, 0)] == NodeTag::contact;
    if (!any)
        throw std::invalid_argument("mesh has no contact boundary");
    std::vector<double> w(mesh.nx + 1, mesh.hx());
    w.front() = 0.5 * mesh.hx();
    w.back() = 0.5 * mesh.hx();
    return w;
}

std::vector<double> expand_to_nodes(std::span<const double> reduced,
                                    const DofMap& dofs) {
    std::vector<double> full(2 * dofs.n_nodes, 0.0);
    for (int d = 0; d < 2 * dofs.n_nodes; ++d) {
        const std::int32_t r = dofs.reduced[d];
        if (r >= 0) full[d] = reduced[r];
    }
    return full;
}

std::vector<double> restrict_to_free(std::span<const double> full,
                                     const DofMap& dofs) {
    std::vector<double> out(dofs.n_free, 0.0);
    for (int d = 0; d < 2 * dofs.n_nodes; ++d) {
        const std::int32_t r = dofs.reduced[d];
        if (r >= 0) out[r] = full[d];
    }
    return out;
}

std::string debug_dump(const StructuredMesh& mesh, const DofMap& dofs) {
    static const char* names[] = {"free", "dirichlet", "neumann", "contact"};
    std::ostringstream os;
    os << "mesh " << mesh.nx << "x" << mesh.ny << ", h=(" << mesh.hx() << ","
       << mesh.hy() << "), free dofs " << dofs.n_free << "\n";
    for (int j = mesh.ny; j >= 0; --j) {
        for (int i = 0; i <= mesh.nx; ++i) {
            const int n = mesh.node(i, j);
            os << "(" << i << "," << j << ") "
               << names[static_cast<int>(mesh.tags[n])] << " ["
               << dofs.reduced[2 * n] << "," << dofs.reduced[2 * n + 1] << "] ";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace homfem
