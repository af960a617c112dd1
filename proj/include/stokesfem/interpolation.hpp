#pragma once

/**
 * @file interpolation.hpp
 * @brief Interpolation and projection operators: vertex interpolation (P1),
 *        edge-midpoint interpolation (CR), elementwise L2 projection (P0) and
 *        the lowest-order Raviart-Thomas edge-flux interpolant.
 */

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "stokesfem/mesh.hpp"
#include "stokesfem/quadrature.hpp"
#include "stokesfem/spaces.hpp"

namespace stokesfem {

using Vector = Eigen::VectorXd;

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

inline Vector interpolate_p1_scalar(const Mesh& mesh, const ScalarField& f) {
    Vector c(mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v) c[v] = f(mesh.vertices[v]);
    return c;
}

/// Nodal values at vertices, componentwise; layout matches the P1-vector DofMap.
inline Vector interpolate_p1(const Mesh& mesh, const VectorField& f) {
    Vector c(2 * mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        const Vec2 val = f(mesh.vertices[v]);
        c[2 * v] = val.x;
        c[2 * v + 1] = val.y;
    }
    return c;
}

inline Vector interpolate_cr_scalar(const Mesh& mesh, const ScalarField& f) {
    Vector c(mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) c[e] = f(mesh.edge_midpoint(e));
    return c;
}

/// Edge-midpoint values, componentwise; layout matches the CR-vector DofMap.
inline Vector interpolate_cr(const Mesh& mesh, const VectorField& f) {
    Vector c(2 * mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const Vec2 val = f(mesh.edge_midpoint(e));
        c[2 * e] = val.x;
        c[2 * e + 1] = val.y;
    }
    return c;
}

/// Elementwise mean by quadrature; the exact L2 projection onto P0 for
/// integrands the rule resolves.
inline Vector project_p0(const Mesh& mesh, const ScalarField& f, int quad_degree = 5) {
    const TriangleQuadrature quad = triangle_quadrature(quad_degree);
    Vector c(mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        double mean = 0.0;
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const Vec2 x = barycentric_point(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                             mesh.vertices[tri[2]], quad.points[q]);
            mean += quad.weights[q] * f(x);
        }
        c[t] = 2.0 * mean; // weights sum to 1/2, the reference area
    }
    return c;
}

/// P0 input is already its own projection.
inline Vector project_p0(const Mesh& mesh, const Vector& p0_field) {
    if (p0_field.size() != mesh.num_triangles())
        throw std::invalid_argument("project_p0: field size does not match triangle count");
    return p0_field;
}

// --- field evaluation helpers ------------------------------------------------

inline Vec2 eval_p1_vector(const Mesh& mesh, const Vector& coeffs, int t,
                           const std::array<double, 3>& lambda) {
    Vec2 val;
    for (int i = 0; i < 3; ++i) {
        const int v = mesh.triangles[t][i];
        val += Vec2{coeffs[2 * v], coeffs[2 * v + 1]} * lambda[i];
    }
    return val;
}

inline Vec2 eval_cr_vector(const Mesh& mesh, const Vector& coeffs, int t,
                           const std::array<double, 3>& lambda) {
    const auto phi = cr_values(lambda);
    Vec2 val;
    for (int i = 0; i < 3; ++i) {
        const int e = mesh.tri_edges[t][i];
        val += Vec2{coeffs[2 * e], coeffs[2 * e + 1]} * phi[i];
    }
    return val;
}

/// Constant Jacobian of a P1-vector or CR-vector field on triangle t.
inline Mat22 fe_vector_gradient(const Mesh& mesh, SpaceKind kind, const Vector& coeffs, int t) {
    const TriangleGeometry geo = triangle_geometry(mesh, t);
    Mat22 J;
    for (int i = 0; i < 3; ++i) {
        Vec2 g;
        Vec2 c;
        if (kind == SpaceKind::P1Vector) {
            g = geo.grad_lambda[i];
            const int v = mesh.triangles[t][i];
            c = {coeffs[2 * v], coeffs[2 * v + 1]};
        } else {
            g = geo.grad_lambda[i] * -2.0;
            const int e = mesh.tri_edges[t][i];
            c = {coeffs[2 * e], coeffs[2 * e + 1]};
        }
        J.xx += c.x * g.x;
        J.xy += c.x * g.y;
        J.yx += c.y * g.x;
        J.yy += c.y * g.y;
    }
    return J;
}

/// Elementwise (broken) divergence of a velocity field, one value per triangle.
inline Vector broken_divergence(const Mesh& mesh, SpaceKind kind, const Vector& coeffs) {
    Vector div(mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t)
        div[t] = fe_vector_gradient(mesh, kind, coeffs, t).trace();
    return div;
}

// --- Raviart-Thomas (lowest order) -------------------------------------------

/// Edge fluxes of a vector function: coefficient per edge is the integral of
/// f.n along the globally oriented edge (Gauss quadrature).
inline Vector rt0_interpolate(const Mesh& mesh, const VectorField& f) {
    const EdgeQuadrature eq = edge_quadrature();
    Vector c(mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const Vec2 a = mesh.vertices[mesh.edges[e].v0];
        const Vec2 b = mesh.vertices[mesh.edges[e].v1];
        const Vec2 n = mesh.edge_normal(e);
        const double len = mesh.edge_length(e);
        double flux = 0.0;
        for (std::size_t q = 0; q < eq.size(); ++q) {
            const Vec2 x = a + (b - a) * eq.points[q];
            flux += eq.weights[q] * f(x).dot(n);
        }
        c[e] = flux * len;
    }
    return c;
}

/// Edge fluxes of a CR-vector field. CR traces are affine with a single-valued
/// midpoint, so the midpoint rule is exact and side-independent.
inline Vector rt0_interpolate_cr(const Mesh& mesh, const Vector& cr_coeffs) {
    Vector c(mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const Vec2 mid{cr_coeffs[2 * e], cr_coeffs[2 * e + 1]};
        c[e] = mid.dot(mesh.edge_normal(e)) * mesh.edge_length(e);
    }
    return c;
}

/// Evaluate an RT0 field inside triangle t. The basis function of the edge
/// opposite vertex i is sigma/(2|T|) (x - v_i) with unit flux along the
/// globally oriented normal; sigma flips where that normal points inward.
inline Vec2 eval_rt0(const Mesh& mesh, const Vector& coeffs, int t, const Vec2& x) {
    const double area = mesh.triangle_area(t);
    Vec2 val;
    for (int i = 0; i < 3; ++i) {
        const int e = mesh.tri_edges[t][i];
        const double sigma = mesh.outward_sign(t, i);
        const Vec2 opp = mesh.vertices[mesh.triangles[t][i]];
        val += (x - opp) * (sigma * coeffs[e] / (2.0 * area));
    }
    return val;
}

/// Per-triangle (constant) divergence of an RT0 field: outward flux sum / area.
inline Vector rt0_divergence(const Mesh& mesh, const Vector& coeffs) {
    Vector div(mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        double flux = 0.0;
        for (int i = 0; i < 3; ++i)
            flux += mesh.outward_sign(t, i) * coeffs[mesh.tri_edges[t][i]];
        div[t] = flux / mesh.triangle_area(t);
    }
    return div;
}

} // namespace stokesfem
