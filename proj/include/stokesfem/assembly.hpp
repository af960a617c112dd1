#pragma once

/**
 * @file assembly.hpp
 * @brief Assembly of the velocity stiffness A, the velocity-pressure coupling
 *        B, the diagonal pressure mass M, the augmented matrix
 *        A_lambda = A + lambda B^T M^{-1} B, and the load vectors.
 *
 * Velocity loads are assembled from the exact solution through
 *   <f, v> = nu (grad u, grad v)_T - (z, div v)_T   summed over triangles,
 * which is the exact pairing for H1-conforming test functions. For broken
 * (Crouzeix-Raviart) test spaces the pairing picks up inter-element and
 * boundary trace terms; those live in assemble_facet_load so that callers of
 * the nonconforming scheme can add them (or, for H(div)-projected right-hand
 * sides, add only their viscous part).
 */

#include <Eigen/Sparse>
#include <array>
#include <vector>

#include "stokesfem/cases.hpp"
#include "stokesfem/interpolation.hpp"
#include "stokesfem/linalg.hpp"
#include "stokesfem/mesh.hpp"
#include "stokesfem/quadrature.hpp"
#include "stokesfem/spaces.hpp"

namespace stokesfem {

/// Matrix on free dofs plus the lifting vector carrying the constrained-column
/// contributions times the prescribed Dirichlet values.
struct AssembledOperator {
    SparseMat matrix;
    Vector lift;
};

/// Scalar local stiffness (grad lambda_i, grad lambda_j)_T.
inline Eigen::Matrix3d p1_local_stiffness(const TriangleGeometry& geo) {
    Eigen::Matrix3d k;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            k(i, j) = geo.area * geo.grad_lambda[i].dot(geo.grad_lambda[j]);
    return k;
}

/// CR gradients are -2 grad lambda, so the local matrix is 4x the P1 one.
inline Eigen::Matrix3d cr_local_stiffness(const TriangleGeometry& geo) {
    return 4.0 * p1_local_stiffness(geo);
}

namespace detail {

inline int local_dof(const Mesh& mesh, SpaceKind kind, int t, int i, int comp) {
    if (kind == SpaceKind::P1Vector) return DofMap::vertex_dof(mesh.triangles[t][i], comp);
    return DofMap::edge_dof(mesh.tri_edges[t][i], comp);
}

inline std::array<Vec2, 3> basis_gradients(SpaceKind kind, const TriangleGeometry& geo) {
    std::array<Vec2, 3> g = geo.grad_lambda;
    if (kind == SpaceKind::CRVector)
        for (auto& gi : g) gi = gi * -2.0;
    return g;
}

} // namespace detail

/// (A U | V) = sum_T (grad u_h, grad v_h)_T on free dofs, Dirichlet rows and
/// columns eliminated symmetrically; the lift is A_fb U_b.
inline AssembledOperator assemble_stiffness(const Mesh& mesh, const DofMap& dm) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(18) * mesh.num_triangles());
    Vector lift = Vector::Zero(dm.n_free);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const TriangleGeometry geo = triangle_geometry(mesh, t);
        const auto g = detail::basis_gradients(dm.kind, geo);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const double k = geo.area * g[i].dot(g[j]);
                for (int c = 0; c < 2; ++c) {
                    const int row = detail::local_dof(mesh, dm.kind, t, i, c);
                    const int col = detail::local_dof(mesh, dm.kind, t, j, c);
                    if (dm.constrained(row)) continue;
                    if (dm.constrained(col))
                        lift[dm.free_index[row]] += k * dm.boundary_values[col];
                    else
                        triplets.emplace_back(dm.free_index[row], dm.free_index[col], k);
                }
            }
        }
    }
    AssembledOperator out;
    out.matrix.resize(dm.n_free, dm.n_free);
    out.matrix.setFromTriplets(triplets.begin(), triplets.end());
    out.lift = std::move(lift);
    return out;
}

/// (B U)_T = integral of div u_h over triangle T; rows are P0 dofs, columns
/// free velocity dofs. The lift is B_b U_b.
inline AssembledOperator assemble_coupling(const Mesh& mesh, const DofMap& dm) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(6) * mesh.num_triangles());
    Vector lift = Vector::Zero(mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const TriangleGeometry geo = triangle_geometry(mesh, t);
        const auto g = detail::basis_gradients(dm.kind, geo);
        for (int i = 0; i < 3; ++i) {
            for (int c = 0; c < 2; ++c) {
                const double val = geo.area * (c == 0 ? g[i].x : g[i].y);
                const int col = detail::local_dof(mesh, dm.kind, t, i, c);
                if (dm.constrained(col))
                    lift[t] += val * dm.boundary_values[col];
                else
                    triplets.emplace_back(t, dm.free_index[col], val);
            }
        }
    }
    AssembledOperator out;
    out.matrix.resize(mesh.num_triangles(), dm.n_free);
    out.matrix.setFromTriplets(triplets.begin(), triplets.end());
    out.lift = std::move(lift);
    return out;
}

/// Diagonal pressure mass: M_TT = |T|. Entries sum to the domain area.
inline Vector assemble_pressure_mass(const Mesh& mesh) {
    Vector m(mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t) m[t] = mesh.triangle_area(t);
    return m;
}

/// A_lambda = A + lambda B^T M^{-1} B, explicitly formed (M is diagonal).
inline SparseMat assemble_augmented(const SparseMat& A, const SparseMat& B, const Vector& m_diag,
                                    double lambda) {
    if (B.cols() != A.cols() || B.rows() != m_diag.size())
        throw std::invalid_argument("assemble_augmented: shape mismatch");
    const SparseMat scaled = m_diag.cwiseInverse().asDiagonal() * B;
    SparseMat result = A + lambda * SparseMat(B.transpose() * scaled);
    return result;
}

enum class LoadMode { Direct, RT0Projected };

/**
 * Load on free velocity dofs:
 *   F_i = sum_T int_T [ nu grad u : grad psi_i - z div psi_i ]
 * by degree-5 quadrature, with u and z = exact pressure taken from the case.
 * In RT0Projected mode the z-term tests against div of the RT0 interpolant of
 * psi_i (evaluated through edge-midpoint fluxes); for the affine velocity
 * bases this reproduces the same elementwise divergence integral.
 */
inline Vector assemble_velocity_load(const Mesh& mesh, const DofMap& dm,
                                     const ManufacturedCase& cs, double nu,
                                     LoadMode mode = LoadMode::Direct) {
    const TriangleQuadrature quad = triangle_quadrature(5);
    Vector f = Vector::Zero(dm.n_free);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const TriangleGeometry geo = triangle_geometry(mesh, t);
        const auto g = detail::basis_gradients(dm.kind, geo);

        // int_T z and the viscous moments int_T (grad u e_c) by quadrature
        double z_integral = 0.0;
        std::array<Vec2, 2> viscous{}; // viscous[c] = int_T (row c of grad u)
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const Vec2 x = barycentric_point(geo.v[0], geo.v[1], geo.v[2], quad.points[q]);
            const double w = 2.0 * geo.area * quad.weights[q];
            const Mat22 gu = cs.velocity_gradient(x);
            z_integral += w * cs.pressure(x);
            viscous[0] += Vec2{gu.xx, gu.xy} * w;
            viscous[1] += Vec2{gu.yx, gu.yy} * w;
        }

        for (int i = 0; i < 3; ++i) {
            for (int c = 0; c < 2; ++c) {
                const int dof = detail::local_dof(mesh, dm.kind, t, i, c);
                if (dm.constrained(dof)) continue;
                double div_term;
                if (mode == LoadMode::Direct) {
                    div_term = (c == 0 ? g[i].x : g[i].y) * z_integral;
                } else {
                    // div of the RT0 interpolant: outward midpoint fluxes / area
                    double flux = 0.0;
                    for (int j = 0; j < 3; ++j) {
                        double mid_value; // basis i at the midpoint of edge j
                        if (dm.kind == SpaceKind::CRVector)
                            mid_value = (j == i) ? 1.0 : 0.0;
                        else
                            mid_value = (j == i) ? 0.0 : 0.5;
                        if (mid_value == 0.0) continue;
                        const int e = mesh.tri_edges[t][j];
                        const Vec2 n_out = mesh.edge_normal(e) * mesh.outward_sign(t, j);
                        flux += mesh.edge_length(e) * mid_value * (c == 0 ? n_out.x : n_out.y);
                    }
                    div_term = (flux / geo.area) * z_integral;
                }
                const double viscous_term = (c == 0 ? viscous[0] : viscous[1]).dot(g[i]);
                f[dm.free_index[dof]] += nu * viscous_term - div_term;
            }
        }
    }
    return f;
}

/**
 * Inter-element and domain-boundary trace terms completing the duality pairing
 * <f, v> for broken test spaces:
 *   sum_T int_{dT} [ z (v.n) - nu (grad u n).v ].
 * For a continuous test space these cancel (interior) or vanish (free dofs on
 * the boundary). With include_pressure_jumps = false only the viscous traces
 * are kept, which is the load obtained when the test function is replaced by
 * its H(div)-conforming RT0 interpolant in the z-term.
 */
inline Vector assemble_facet_load(const Mesh& mesh, const DofMap& dm, const ManufacturedCase& cs,
                                  double nu, bool include_pressure_jumps = true) {
    const EdgeQuadrature eq = edge_quadrature();
    Vector f = Vector::Zero(dm.n_free);
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const MeshEdge& edge = mesh.edges[e];
        const Vec2 a = mesh.vertices[edge.v0];
        const Vec2 b = mesh.vertices[edge.v1];
        const double len = mesh.edge_length(e);
        const Vec2 n_global = mesh.edge_normal(e);

        for (int side = 0; side < 2; ++side) {
            const int t = side == 0 ? edge.t0 : edge.t1;
            if (t < 0) continue;
            // local index of this edge and of the endpoint vertices in t
            int li = -1;
            for (int i = 0; i < 3; ++i)
                if (mesh.tri_edges[t][i] == e) li = i;
            int la = -1, lb = -1;
            for (int i = 0; i < 3; ++i) {
                if (mesh.triangles[t][i] == edge.v0) la = i;
                if (mesh.triangles[t][i] == edge.v1) lb = i;
            }
            const Vec2 n_out = n_global * mesh.outward_sign(t, li);

            for (std::size_t q = 0; q < eq.size(); ++q) {
                const double s = eq.points[q];
                const Vec2 x = a + (b - a) * s;
                const double w = eq.weights[q] * len;
                const double z = include_pressure_jumps ? cs.pressure(x) : 0.0;
                const Vec2 traction = cs.velocity_gradient(x).apply(n_out) * nu;

                std::array<double, 3> lambda{};
                lambda[la] = 1.0 - s;
                lambda[lb] = s;
                std::array<double, 3> trace;
                if (dm.kind == SpaceKind::CRVector)
                    trace = cr_values(lambda);
                else
                    trace = lambda;

                for (int i = 0; i < 3; ++i) {
                    if (trace[i] == 0.0) continue;
                    for (int c = 0; c < 2; ++c) {
                        const int dof = detail::local_dof(mesh, dm.kind, t, i, c);
                        if (dm.constrained(dof)) continue;
                        const double n_c = (c == 0 ? n_out.x : n_out.y);
                        const double tr_c = (c == 0 ? traction.x : traction.y);
                        f[dm.free_index[dof]] += w * trace[i] * (z * n_c - tr_c);
                    }
                }
            }
        }
    }
    return f;
}

/**
 * Correction that turns the elementwise load into the fully H(div)-projected
 * pairing (f, pi_RT psi_i): adds (-nu Lap u, pi_RT psi_i) and removes the
 * elementwise viscous moments, so that
 *   elementwise RT0 load + this = (-nu Lap u, pi_RT psi) - (z, div pi_RT psi).
 * CR test space only; requires the case's velocity Laplacian.
 */
inline Vector assemble_rt0_viscous_correction(const Mesh& mesh, const DofMap& dm,
                                              const ManufacturedCase& cs, double nu) {
    if (dm.kind != SpaceKind::CRVector)
        throw std::invalid_argument("assemble_rt0_viscous_correction: CR test space only");
    if (!cs.laplacian)
        throw std::invalid_argument("assemble_rt0_viscous_correction: case '" + cs.name +
                                    "' does not provide the velocity Laplacian");
    const TriangleQuadrature quad = triangle_quadrature(5);
    Vector f = Vector::Zero(dm.n_free);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const TriangleGeometry geo = triangle_geometry(mesh, t);
        const auto g = detail::basis_gradients(dm.kind, geo);

        // moments of L = -nu Lap u: m0 = int_T L, m1 = int_T (L.x x.x, L.y x.y)
        std::array<Vec2, 2> viscous{}; // int_T (row c of grad u)
        Vec2 m0, m1;
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const Vec2 x = barycentric_point(geo.v[0], geo.v[1], geo.v[2], quad.points[q]);
            const double w = 2.0 * geo.area * quad.weights[q];
            const Mat22 gu = cs.velocity_gradient(x);
            viscous[0] += Vec2{gu.xx, gu.xy} * w;
            viscous[1] += Vec2{gu.yx, gu.yy} * w;
            const Vec2 lap = cs.laplacian(x) * (-nu);
            m0 += lap * w;
            m1 += Vec2{lap.x * x.x, lap.y * x.y} * w;
        }

        for (int i = 0; i < 3; ++i) {
            const int e = mesh.tri_edges[t][i];
            const double sigma = mesh.outward_sign(t, i);
            const Vec2 n_global = mesh.edge_normal(e);
            const double len = mesh.edge_length(e);
            const Vec2 opp = mesh.vertices[mesh.triangles[t][i]];
            // int_T L . (x - v_i), shared by both components of the basis
            const double base = (m1.x - opp.x * m0.x) + (m1.y - opp.y * m0.y);
            for (int c = 0; c < 2; ++c) {
                const int dof = DofMap::edge_dof(e, c);
                if (dm.constrained(dof)) continue;
                // pi_RT(phi_i e_c)|_T = flux_c sigma (x - v_i) / (2|T|)
                const double flux = len * (c == 0 ? n_global.x : n_global.y);
                const double projected = sigma * flux / (2.0 * geo.area) * base;
                const double elementwise = nu * (c == 0 ? viscous[0] : viscous[1]).dot(g[i]);
                f[dm.free_index[dof]] += projected - elementwise;
            }
        }
    }
    return f;
}

/// F_{p,T} = int_T z by degree-5 quadrature.
inline Vector assemble_pressure_rhs(const Mesh& mesh, const ScalarField& z) {
    const TriangleQuadrature quad = triangle_quadrature(5);
    Vector f(mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double area = mesh.triangle_area(t);
        double v = 0.0;
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const Vec2 x = barycentric_point(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                             mesh.vertices[tri[2]], quad.points[q]);
            v += 2.0 * area * quad.weights[q] * z(x);
        }
        f[t] = v;
    }
    return f;
}

/// For a P0 field the elementwise integral is exact: F_p = M z.
inline Vector assemble_pressure_rhs(const Mesh& mesh, const Vector& m_diag, const Vector& z_p0) {
    if (z_p0.size() != mesh.num_triangles())
        throw std::invalid_argument("assemble_pressure_rhs: P0 field size mismatch");
    return m_diag.cwiseProduct(z_p0);
}

} // namespace stokesfem
