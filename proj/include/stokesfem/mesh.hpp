#pragma once

/**
 * @file mesh.hpp
 * @brief Structured (optionally graded) simplicial triangulations of the unit square.
 */

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stokesfem/geometry.hpp"

namespace stokesfem {

struct MeshEdge {
    int v0 = -1; ///< lower vertex index (global orientation is v0 -> v1)
    int v1 = -1; ///< higher vertex index
    int t0 = -1; ///< first adjacent triangle
    int t1 = -1; ///< second adjacent triangle, -1 on the boundary

    bool on_boundary() const { return t1 < 0; }
};

/// Which diagonal splits each grid cell.
enum class Diagonal { Right, Left };

/// Immutable after construction; safe to share across threads read-only.
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles; ///< counterclockwise vertex triples
    std::vector<MeshEdge> edges;
    std::vector<std::array<int, 3>> tri_edges; ///< tri_edges[t][i] = edge opposite vertex i
    std::vector<char> vertex_on_boundary;
    double nominal_h = 0.0;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    double triangle_area(int t) const {
        const auto& tri = triangles[t];
        return signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
    }

    Vec2 edge_midpoint(int e) const {
        return (vertices[edges[e].v0] + vertices[edges[e].v1]) * 0.5;
    }

    double edge_length(int e) const {
        return (vertices[edges[e].v1] - vertices[edges[e].v0]).norm();
    }

    /// Unit normal of the global edge orientation (lower -> higher vertex index).
    Vec2 edge_normal(int e) const {
        const Vec2 t = vertices[edges[e].v1] - vertices[edges[e].v0];
        return t.perp() / t.norm();
    }

    /// +1 if the globally oriented normal of edge tri_edges[t][i] points out of t.
    double outward_sign(int t, int i) const {
        const int e = tri_edges[t][i];
        const Vec2 mid = edge_midpoint(e);
        const Vec2 opp = vertices[triangles[t][i]];
        return edge_normal(e).dot(mid - opp) > 0.0 ? 1.0 : -1.0;
    }
};

struct MeshStats {
    int vertices = 0;
    int edges = 0;
    int triangles = 0;
    double h_max = 0.0;
    double h_min = 0.0;
    double min_area = 0.0;
};

namespace detail {

inline void build_connectivity(Mesh& mesh) {
    std::map<std::pair<int, int>, int> edge_of;
    mesh.tri_edges.assign(mesh.triangles.size(), {-1, -1, -1});
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int i = 0; i < 3; ++i) {
            int a = tri[(i + 1) % 3];
            int b = tri[(i + 2) % 3];
            if (a > b) std::swap(a, b);
            auto [it, inserted] = edge_of.try_emplace({a, b}, mesh.num_edges());
            if (inserted) {
                mesh.edges.push_back(MeshEdge{a, b, t, -1});
            } else {
                MeshEdge& e = mesh.edges[it->second];
                if (e.t1 >= 0)
                    throw std::runtime_error("mesh: edge shared by more than two triangles");
                e.t1 = t;
            }
            mesh.tri_edges[t][i] = it->second;
        }
    }
    mesh.vertex_on_boundary.assign(mesh.vertices.size(), 0);
    for (const MeshEdge& e : mesh.edges) {
        if (e.on_boundary()) {
            mesh.vertex_on_boundary[e.v0] = 1;
            mesh.vertex_on_boundary[e.v1] = 1;
        }
    }
}

} // namespace detail

/// Throws std::runtime_error naming the offending entity on any broken invariant.
inline void validate_mesh(const Mesh& mesh) {
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        if (!(mesh.triangle_area(t) > 0.0))
            throw std::runtime_error("mesh: non-positive area in triangle " + std::to_string(t));
    }
    const long euler = static_cast<long>(mesh.num_vertices()) - mesh.num_edges() + mesh.num_triangles();
    if (euler != 1)
        throw std::runtime_error("mesh: Euler relation V-E+T=1 violated (got " +
                                 std::to_string(euler) + ")");
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const MeshEdge& edge = mesh.edges[e];
        if (edge.t0 < 0)
            throw std::runtime_error("mesh: edge " + std::to_string(e) + " has no adjacent triangle");
        if (edge.on_boundary() &&
            (!mesh.vertex_on_boundary[edge.v0] || !mesh.vertex_on_boundary[edge.v1]))
            throw std::runtime_error("mesh: boundary edge " + std::to_string(e) +
                                     " with interior endpoint");
    }
}

/// Uniform n x n grid of the unit square, each cell split along one fixed diagonal.
inline Mesh structured_unit_square(int n, Diagonal diagonal = Diagonal::Right) {
    if (n < 1) throw std::invalid_argument("structured_unit_square: n must be >= 1");
    Mesh mesh;
    mesh.nominal_h = 1.0 / n;
    mesh.vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            mesh.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});

    mesh.triangles.reserve(static_cast<std::size_t>(2) * n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = j * (n + 1) + i;
            const int v10 = v00 + 1;
            const int v01 = v00 + (n + 1);
            const int v11 = v01 + 1;
            if (diagonal == Diagonal::Right) {
                mesh.triangles.push_back({v00, v10, v11});
                mesh.triangles.push_back({v00, v11, v01});
            } else {
                mesh.triangles.push_back({v00, v10, v01});
                mesh.triangles.push_back({v10, v11, v01});
            }
        }
    }
    detail::build_connectivity(mesh);
    validate_mesh(mesh);
    return mesh;
}

namespace detail {

/// Distance from `center` to the unit-square boundary along direction `dir` (unit).
inline double ray_to_boundary(const Vec2& center, const Vec2& dir) {
    double t = std::numeric_limits<double>::infinity();
    if (dir.x > 0) t = std::min(t, (1.0 - center.x) / dir.x);
    if (dir.x < 0) t = std::min(t, (0.0 - center.x) / dir.x);
    if (dir.y > 0) t = std::min(t, (1.0 - center.y) / dir.y);
    if (dir.y < 0) t = std::min(t, (0.0 - center.y) / dir.y);
    return t;
}

} // namespace detail

/**
 * Uniform grid with interior vertices radially remapped toward `center` by the
 * power law r -> R (r/R)^grading, R being the boundary distance along the ray.
 * The boundary and the connectivity are untouched; grading = 1 is the identity.
 */
inline Mesh graded_unit_square(int n, Vec2 center = {0.5, 0.5}, double grading = 2.0,
                               Diagonal diagonal = Diagonal::Right) {
    if (!(center.x > 0.0 && center.x < 1.0 && center.y > 0.0 && center.y < 1.0))
        throw std::invalid_argument("graded_unit_square: center must lie in the open square");
    if (!(grading >= 1.0))
        throw std::invalid_argument("graded_unit_square: grading must be >= 1");
    Mesh mesh = structured_unit_square(n, diagonal);
    if (grading == 1.0) return mesh;
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        if (mesh.vertex_on_boundary[v]) continue;
        const Vec2 d = mesh.vertices[v] - center;
        const double r = d.norm();
        if (r == 0.0) continue;
        const Vec2 dir = d / r;
        const double R = detail::ray_to_boundary(center, dir);
        const double s = std::min(r / R, 1.0);
        mesh.vertices[v] = center + dir * (R * std::pow(s, grading));
    }
    validate_mesh(mesh);
    return mesh;
}

inline MeshStats mesh_statistics(const Mesh& mesh) {
    MeshStats s;
    s.vertices = mesh.num_vertices();
    s.edges = mesh.num_edges();
    s.triangles = mesh.num_triangles();
    s.h_max = 0.0;
    s.h_min = std::numeric_limits<double>::infinity();
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const double len = mesh.edge_length(e);
        s.h_max = std::max(s.h_max, len);
        s.h_min = std::min(s.h_min, len);
    }
    s.min_area = std::numeric_limits<double>::infinity();
    for (int t = 0; t < mesh.num_triangles(); ++t)
        s.min_area = std::min(s.min_area, mesh.triangle_area(t));
    return s;
}

/// Debug dump: "V E T" header, vertex coordinates, then triangle index triples.
inline void dump_mesh(const Mesh& mesh, std::ostream& out) {
    out << mesh.num_vertices() << ' ' << mesh.num_edges() << ' ' << mesh.num_triangles() << '\n';
    out.precision(17);
    for (const Vec2& v : mesh.vertices) out << v.x << ' ' << v.y << '\n';
    for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

} // namespace stokesfem
