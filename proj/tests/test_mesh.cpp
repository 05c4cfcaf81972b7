#include <doctest.h>

#include <numeric>
#include <stdexcept>

#include "homfem/mesh.hpp"

using namespace homfem;

TEST_CASE("mesh counts and spacing") {
    const StructuredMesh m = build_mesh(4, 4, Rect{}, BoundaryRule::all_free);
    CHECK(m.n_nodes() == 25);
    CHECK(m.n_elems() == 16);
    CHECK(m.hx() == doctest::Approx(0.25));

    // four cells at 32 elements each on the unit square
    const StructuredMesh fine =
        build_mesh(4 * 32, 4 * 32, Rect{}, BoundaryRule::contact_problem);
    CHECK(fine.hx() == doctest::Approx(1.0 / 128));

    CHECK_THROWS_AS(build_mesh(0, 4, Rect{}, BoundaryRule::all_free),
                    std::invalid_argument);
}

TEST_CASE("boundary tags on the 2x2 mesh") {
    const StructuredMesh m = build_mesh(2, 2, Rect{}, BoundaryRule::contact_problem);
    CHECK(m.tags[m.node(1, 0)] == NodeTag::contact);   // interior bottom
    CHECK(m.tags[m.node(0, 0)] == NodeTag::contact);   // contact corner
    CHECK(m.tags[m.node(2, 0)] == NodeTag::dirichlet); // Dirichlet wins
    CHECK(m.tags[m.node(2, 2)] == NodeTag::dirichlet);
    CHECK(m.tags[m.node(0, 1)] == NodeTag::neumann);
    CHECK(m.tags[m.node(0, 2)] == NodeTag::neumann);
    CHECK(m.tags[m.node(1, 2)] == NodeTag::free);
    CHECK(m.tags[m.node(1, 1)] == NodeTag::free);
}

TEST_CASE("dof map fixes Dirichlet pairs and contact normals") {
    const StructuredMesh m = build_mesh(2, 2, Rect{}, BoundaryRule::contact_problem);
    const DofMap dofs = build_dofmap(m);
    // Dirichlet node: both fixed
    CHECK(dofs.reduced[2 * m.node(2, 1)] == -1);
    CHECK(dofs.reduced[2 * m.node(2, 1) + 1] == -1);
    // contact node: tangential free, normal fixed
    CHECK(dofs.reduced[2 * m.node(1, 0)] >= 0);
    CHECK(dofs.reduced[2 * m.node(1, 0) + 1] == -1);
    // 9 nodes: 3 dirichlet (0 dofs), 2 contact (1 dof), 4 others (2 dofs)
    CHECK(dofs.n_free == 2 * 1 + 4 * 2);

    const auto full = expand_to_nodes(std::vector<double>(dofs.n_free, 1.5), dofs);
    CHECK(full[2 * m.node(2, 1)] == 0.0);
    CHECK(full[2 * m.node(1, 1)] == 1.5);
    const auto back = restrict_to_free(full, dofs);
    for (double v : back) CHECK(v == 1.5);
}

TEST_CASE("contact weights form the trapezoid rule") {
    const StructuredMesh m = build_mesh(4, 4, Rect{}, BoundaryRule::contact_problem);
    const auto w = contact_weights(m);
    REQUIRE(w.size() == 5);
    CHECK(w[0] == doctest::Approx(0.125));
    CHECK(w[1] == doctest::Approx(0.25));
    CHECK(w[4] == doctest::Approx(0.125));
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0));

    for (int nx : {1, 3, 17}) {
        const StructuredMesh mm =
            build_mesh(nx, 2, Rect{}, BoundaryRule::contact_problem);
        const auto ww = contact_weights(mm);
        CHECK(std::accumulate(ww.begin(), ww.end(), 0.0) == doctest::Approx(1.0));
    }

    const StructuredMesh untagged = build_mesh(4, 4, Rect{}, BoundaryRule::all_free);
    CHECK_THROWS_AS(contact_weights(untagged), std::invalid_argument);
}
