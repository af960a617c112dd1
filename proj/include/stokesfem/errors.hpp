#pragma once

/**
 * @file errors.hpp
 * @brief Discrete error metrics: L2 distances to the interpolated exact
 *        velocity and the projected exact pressure, the H1 indicator, the
 *        divergence indicator, all normalized by the viscosity-weighted norm
 *        of the exact pair, plus the computable right-hand sides of the
 *        a-priori bounds.
 */

#include <cmath>

#include "stokesfem/cases.hpp"
#include "stokesfem/interpolation.hpp"
#include "stokesfem/mesh.hpp"
#include "stokesfem/solvers.hpp"
#include "stokesfem/spaces.hpp"

namespace stokesfem {

/// ||(u,p)||_{X,nu} = sqrt(|u|_{H1}^2 + nu^{-2} ||p||_{L2}^2), degree-5 quadrature.
inline double xnorm_exact(const Mesh& mesh, const ManufacturedCase& cs, double nu) {
    const TriangleQuadrature quad = triangle_quadrature(5);
    double grad2 = 0.0, p2 = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double area = mesh.triangle_area(t);
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const Vec2 x = barycentric_point(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                             mesh.vertices[tri[2]], quad.points[q]);
            const double w = 2.0 * area * quad.weights[q];
            grad2 += w * cs.velocity_gradient(x).squared_norm();
            const double p = cs.pressure(x);
            p2 += w * p * p;
        }
    }
    return std::sqrt(grad2 + p2 / (nu * nu));
}

/// Exact L2 norm of an FE velocity field (elementwise mass matrices).
inline double fe_l2_norm(const Mesh& mesh, SpaceKind kind, const Vector& coeffs) {
    double sum = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double area = mesh.triangle_area(t);
        for (int c = 0; c < 2; ++c) {
            double d[3];
            for (int i = 0; i < 3; ++i) {
                const int dof = kind == SpaceKind::P1Vector
                                    ? DofMap::vertex_dof(mesh.triangles[t][i], c)
                                    : DofMap::edge_dof(mesh.tri_edges[t][i], c);
                d[i] = coeffs[dof];
            }
            if (kind == SpaceKind::P1Vector) {
                const double s = d[0] + d[1] + d[2];
                sum += area / 12.0 * (s * s + d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
            } else {
                // CR basis functions are L2-orthogonal on each triangle
                sum += area / 3.0 * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
            }
        }
    }
    return std::sqrt(sum);
}

/// Exact broken H1 seminorm of an FE velocity field (constant gradients).
inline double fe_h1_seminorm(const Mesh& mesh, SpaceKind kind, const Vector& coeffs) {
    double sum = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t)
        sum += mesh.triangle_area(t) * fe_vector_gradient(mesh, kind, coeffs, t).squared_norm();
    return std::sqrt(sum);
}

/// Broken H1 distance of an FE velocity field to the exact velocity (degree 5).
inline double h1_error_vs_exact(const Mesh& mesh, SpaceKind kind, const Vector& coeffs,
                                const ManufacturedCase& cs) {
    const TriangleQuadrature quad = triangle_quadrature(5);
    double sum = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double area = mesh.triangle_area(t);
        const Mat22 jh = fe_vector_gradient(mesh, kind, coeffs, t);
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const Vec2 x = barycentric_point(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                             mesh.vertices[tri[2]], quad.points[q]);
            const Mat22 je = cs.velocity_gradient(x);
            Mat22 d;
            d.xx = jh.xx - je.xx; d.xy = jh.xy - je.xy;
            d.yx = jh.yx - je.yx; d.yy = jh.yy - je.yy;
            sum += 2.0 * area * quad.weights[q] * d.squared_norm();
        }
    }
    return std::sqrt(sum);
}

/// |p - q|_M over the P0 space.
inline double p0_distance(const Vector& m_diag, const Vector& p, const Vector& q) {
    const Vector d = p - q;
    return std::sqrt(d.dot(m_diag.cwiseProduct(d)));
}

struct ErrorReport {
    double e0_u = 0.0; ///< ||I_h u - u_h||_L2 / xnorm
    double e0_p = 0.0; ///< nu^{-1} ||Pi0 p - p_h||_L2 / xnorm
    double e1 = 0.0;   ///< |I_h u - u_h|_H1(broken) / xnorm
    double eD = 0.0;   ///< ||div u_h||_L2 / xnorm
    double xnorm = 0.0;
};

/// The interpolation operator is the one native to the velocity space (vertex
/// values for P1, edge-midpoint values for CR).
inline ErrorReport compute_errors(const Mesh& mesh, const ManufacturedCase& cs,
                                  const StokesSolution& sol, SpaceKind velocity_kind, double nu) {
    ErrorReport r;
    r.xnorm = xnorm_exact(mesh, cs, nu);
    const Vector interp = velocity_kind == SpaceKind::P1Vector
                              ? interpolate_p1(mesh, cs.velocity)
                              : interpolate_cr(mesh, cs.velocity);
    const Vector diff = interp - sol.velocity;
    r.e0_u = fe_l2_norm(mesh, velocity_kind, diff) / r.xnorm;
    r.e1 = fe_h1_seminorm(mesh, velocity_kind, diff) / r.xnorm;

    const Vector m = assemble_pressure_mass(mesh);
    const Vector pi0 = project_p0(mesh, cs.pressure);
    r.e0_p = p0_distance(m, pi0, sol.pressure) / (nu * r.xnorm);

    const Vector div = broken_divergence(mesh, velocity_kind, sol.velocity);
    double div2 = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t)
        div2 += mesh.triangle_area(t) * div[t] * div[t];
    r.eD = std::sqrt(div2) / r.xnorm;
    return r;
}

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Pressure-robust estimate for the coercive solve with exact pressure data:
/// sqrt(lambda)-nu-weighted combined error against sqrt(1+2 lambda) times the
/// H1 interpolation error of the exact velocity (interpolant surrogate for the
/// conforming L2 projection).
inline BoundCheck pressure_robust_bound(const Mesh& mesh, const ManufacturedCase& cs, double nu,
                                        double lambda, const StokesSolution& ep) {
    BoundCheck b;
    const Vector m = assemble_pressure_mass(mesh);
    const Vector pi0 = project_p0(mesh, cs.pressure);
    const double u_err = h1_error_vs_exact(mesh, SpaceKind::P1Vector, ep.velocity, cs);
    const double p_err = p0_distance(m, ep.pressure, pi0);
    b.lhs = std::sqrt(u_err * u_err + p_err * p_err / (lambda * nu * nu));
    const Vector interp = interpolate_p1(mesh, cs.velocity);
    b.rhs = std::sqrt(1.0 + 2.0 * lambda) * h1_error_vs_exact(mesh, SpaceKind::P1Vector, interp, cs);
    return b;
}

struct TransferBounds {
    BoundCheck combined; ///< combined sqrt(lambda)-nu-weighted error vs interpolation + data terms
    BoundCheck velocity; ///< nu sqrt(lambda) |u_h - u|_H1 vs pressure-data distance + remainder
};

/// Computable bounds for one post-processing step that consumed p_old.
inline TransferBounds transfer_bounds(const Mesh& mesh, const ManufacturedCase& cs, double nu,
                                      double lambda, const Vector& p_old,
                                      const StokesSolution& post) {
    TransferBounds tb;
    const Vector m = assemble_pressure_mass(mesh);
    const Vector pi0 = project_p0(mesh, cs.pressure);
    const double u_err = h1_error_vs_exact(mesh, SpaceKind::P1Vector, post.velocity, cs);
    const double p_err = p0_distance(m, post.pressure, pi0);
    const double data_err = p0_distance(m, pi0, p_old);
    const Vector interp = interpolate_p1(mesh, cs.velocity);
    const double interp_err = h1_error_vs_exact(mesh, SpaceKind::P1Vector, interp, cs);
    const double root = std::sqrt(lambda) * nu;

    tb.combined.lhs = std::sqrt(u_err * u_err + p_err * p_err / (lambda * nu * nu));
    tb.combined.rhs = std::sqrt(1.0 + 2.0 * lambda) * interp_err + data_err / root;

    tb.velocity.lhs = root * u_err;
    tb.velocity.rhs = data_err + root * std::sqrt(1.0 + 2.0 * lambda) * interp_err;
    return tb;
}

} // namespace stokesfem
