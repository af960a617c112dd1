#pragma once

/**
 * @file spaces.hpp
 * @brief Degree-of-freedom maps and reference-element bases for the
 *        P1-vector, Crouzeix-Raviart-vector, P0 and RT0 spaces.
 */

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "stokesfem/geometry.hpp"
#include "stokesfem/mesh.hpp"

namespace stokesfem {

struct TriangleGeometry {
    std::array<Vec2, 3> v;
    double area = 0.0;
    std::array<Vec2, 3> grad_lambda; ///< gradients of the barycentric coordinates
};

/// Gradients of the three barycentric coordinates; they sum to the zero vector.
inline std::array<Vec2, 3> p1_gradients(const std::array<Vec2, 3>& v) {
    const double area2 = 2.0 * signed_area(v[0], v[1], v[2]);
    if (!(std::abs(area2) > 0.0))
        throw std::invalid_argument("p1_gradients: degenerate triangle");
    std::array<Vec2, 3> g;
    for (int i = 0; i < 3; ++i) {
        const Vec2& a = v[(i + 1) % 3];
        const Vec2& b = v[(i + 2) % 3];
        g[i] = Vec2{a.y - b.y, b.x - a.x} / area2;
    }
    return g;
}

inline TriangleGeometry triangle_geometry(const Mesh& mesh, int t) {
    TriangleGeometry geo;
    for (int i = 0; i < 3; ++i) geo.v[i] = mesh.vertices[mesh.triangles[t][i]];
    geo.area = signed_area(geo.v[0], geo.v[1], geo.v[2]);
    geo.grad_lambda = p1_gradients(geo.v);
    return geo;
}

/// Values of the Crouzeix-Raviart basis at a barycentric point; function i is
/// attached to the edge opposite vertex i and equals 1 - 2 lambda_i.
inline std::array<double, 3> cr_values(const std::array<double, 3>& lambda) {
    return {1.0 - 2.0 * lambda[0], 1.0 - 2.0 * lambda[1], 1.0 - 2.0 * lambda[2]};
}

inline std::array<Vec2, 3> cr_gradients(const std::array<Vec2, 3>& v) {
    auto g = p1_gradients(v);
    for (auto& gi : g) gi = gi * -2.0;
    return g;
}

enum class SpaceKind { P1Vector, CRVector, P0, RT0 };

/**
 * Dof layout: P1-vector dofs are 2*vertex+component, CR-vector dofs are
 * 2*edge+component, P0 dofs are triangle indices, RT0 dofs are edge indices
 * (signed flux along the global lower->higher orientation). For the velocity
 * spaces every boundary-entity dof is constrained, holding the Dirichlet value.
 */
struct DofMap {
    SpaceKind kind = SpaceKind::P0;
    int total = 0;
    int n_free = 0;
    std::vector<int> free_index;          ///< dof -> free slot, or -1 if constrained
    std::vector<int> free_dofs;           ///< free slot -> dof
    std::vector<double> boundary_values;  ///< prescribed value per dof (0 where free)

    bool constrained(int dof) const { return free_index[dof] < 0; }

    static int vertex_dof(int v, int comp) { return 2 * v + comp; }
    static int edge_dof(int e, int comp) { return 2 * e + comp; }

    /// Scatter a free-dof vector into a full coefficient vector with the
    /// prescribed boundary values filled in.
    template <class VecIn, class VecOut>
    void expand(const VecIn& free_values, VecOut& full) const {
        for (int dof = 0; dof < total; ++dof)
            full[dof] = constrained(dof) ? boundary_values[dof] : free_values[free_index[dof]];
    }
};

inline DofMap make_dofmap(const Mesh& mesh, SpaceKind kind) {
    DofMap dm;
    dm.kind = kind;
    switch (kind) {
    case SpaceKind::P1Vector: dm.total = 2 * mesh.num_vertices(); break;
    case SpaceKind::CRVector: dm.total = 2 * mesh.num_edges(); break;
    case SpaceKind::P0: dm.total = mesh.num_triangles(); break;
    case SpaceKind::RT0: dm.total = mesh.num_edges(); break;
    }
    dm.free_index.assign(dm.total, -1);
    dm.boundary_values.assign(dm.total, 0.0);
    auto dof_constrained = [&](int dof) {
        switch (kind) {
        case SpaceKind::P1Vector: return mesh.vertex_on_boundary[dof / 2] != 0;
        case SpaceKind::CRVector: return mesh.edges[dof / 2].on_boundary();
        default: return false;
        }
    };
    for (int dof = 0; dof < dm.total; ++dof) {
        if (!dof_constrained(dof)) {
            dm.free_index[dof] = dm.n_free++;
            dm.free_dofs.push_back(dof);
        }
    }
    return dm;
}

/// Interpolate the Dirichlet trace `g` into the constrained velocity dofs
/// (vertex values for P1, edge-midpoint values for CR).
inline void set_dirichlet_values(DofMap& dm, const Mesh& mesh,
                                 const std::function<Vec2(const Vec2&)>& g) {
    if (dm.kind == SpaceKind::P1Vector) {
        for (int v = 0; v < mesh.num_vertices(); ++v) {
            if (!mesh.vertex_on_boundary[v]) continue;
            const Vec2 val = g(mesh.vertices[v]);
            dm.boundary_values[DofMap::vertex_dof(v, 0)] = val.x;
            dm.boundary_values[DofMap::vertex_dof(v, 1)] = val.y;
        }
    } else if (dm.kind == SpaceKind::CRVector) {
        for (int e = 0; e < mesh.num_edges(); ++e) {
            if (!mesh.edges[e].on_boundary()) continue;
            const Vec2 val = g(mesh.edge_midpoint(e));
            dm.boundary_values[DofMap::edge_dof(e, 0)] = val.x;
            dm.boundary_values[DofMap::edge_dof(e, 1)] = val.y;
        }
    } else {
        throw std::invalid_argument("set_dirichlet_values: not a velocity space");
    }
}

} // namespace stokesfem
