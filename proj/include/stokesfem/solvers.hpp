#pragma once

/**
 * @file solvers.hpp
 * @brief The three resolution strategies: the Crouzeix-Raviart baseline solved
 *        by Uzawa/PCG on the pressure Schur complement, the coercive P1xP0
 *        solve with known pressure data, and the iterative post-processing
 *        that feeds each pressure back as the next data. Homogeneous and
 *        nonhomogeneous Dirichlet data share one code path through the
 *        lifting vectors of the assembled operators.
 */

#include <Eigen/Dense>
#include <chrono>
#include <memory>
#include <optional>
#include <vector>

#include "stokesfem/assembly.hpp"
#include "stokesfem/cases.hpp"
#include "stokesfem/linalg.hpp"
#include "stokesfem/mesh.hpp"
#include "stokesfem/spaces.hpp"

namespace stokesfem {

struct SolveDiagnostics {
    std::vector<double> pressure_increment_M; ///< |P^n - P^{n-1}|_M per outer step
    std::vector<double> velocity_norm_A;      ///< |U^n|_A per outer step
    std::vector<double> divergence_norm;      ///< |M^{-1/2} B U^n|_2 per outer step
    int outer_iterations = 0;
    int pcg_iterations = 0;
    double seconds = 0.0;
};

struct StokesSolution {
    Vector velocity;          ///< full coefficient vector, boundary values included
    Vector pressure;          ///< zero M-weighted mean
    SolveDiagnostics diag;
};

enum class Method { CR, EP, Post };

/// lambda = 1 for the exact-pressure method; for the post-processing the
/// viscosity-dependent choice is 1 at nu = 1 and 10 otherwise.
inline double default_lambda(Method method, double nu) {
    if (method == Method::Post && nu != 1.0) return 10.0;
    return 1.0;
}

namespace detail {

inline void check_boundary_flux(const Vector& lift_B) {
    const double net = lift_B.sum();
    const double scale = std::max(1.0, lift_B.cwiseAbs().sum());
    if (std::abs(net) > 1e-10 * scale)
        throw std::invalid_argument(
            "boundary data has nonzero net flux (" + std::to_string(net) +
            "); incompatible with the incompressibility constraint");
}

inline double norm_A(const SparseMat& A, const Vector& u) {
    return std::sqrt(std::max(0.0, u.dot(A * u)));
}

inline double norm_M(const Vector& m_diag, const Vector& p) {
    return std::sqrt(p.dot(m_diag.cwiseProduct(p)));
}

/// |M^{-1/2} d|_2 for a pressure-space vector d.
inline double norm_Minv(const Vector& m_diag, const Vector& d) {
    return std::sqrt(d.dot(d.cwiseQuotient(m_diag)));
}

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

} // namespace detail

/**
 * Assembled coercive P1xP0 system. The augmented matrix
 * A_lambda = A + lambda B^T M^{-1} B is factorized once; every solve with new
 * pressure data reuses the factor.
 */
class CoerciveSystem {
public:
    CoerciveSystem(const Mesh& mesh, const ManufacturedCase& cs, double nu, double lambda)
        : mesh_(mesh), nu_(nu), lambda_(lambda) {
        velocity_map_ = make_dofmap(mesh, SpaceKind::P1Vector);
        if (!cs.homogeneous_boundary) set_dirichlet_values(velocity_map_, mesh, cs.velocity);
        stiffness_ = assemble_stiffness(mesh, velocity_map_);
        coupling_ = assemble_coupling(mesh, velocity_map_);
        mass_ = assemble_pressure_mass(mesh);
        detail::check_boundary_flux(coupling_.lift);
        augmented_ = assemble_augmented(stiffness_.matrix, coupling_.matrix, mass_, lambda);
        factor_ = std::make_unique<CholeskyFactor>(augmented_);
        load_ = assemble_velocity_load(mesh, velocity_map_, cs, nu, LoadMode::Direct);
    }

    /// One coercive solve for given pressure data F_p (entries (z, phi_T)).
    void step(const Vector& f_p, Vector& u_free, Vector& p) const {
        Vector rhs = load_ / nu_;
        rhs += coupling_.matrix.transpose() * f_p.cwiseQuotient(mass_) / nu_;
        rhs -= stiffness_.lift;
        rhs -= lambda_ * (coupling_.matrix.transpose() * coupling_.lift.cwiseQuotient(mass_));
        u_free = factor_->solve(rhs);
        p = (f_p - nu_ * lambda_ * divergence(u_free)).cwiseQuotient(mass_);
        p = zero_mean_project(p, mass_);
    }

    /// B U + B_b U_b: the elementwise divergence integrals of the full field.
    Vector divergence(const Vector& u_free) const {
        return coupling_.matrix * u_free + coupling_.lift;
    }

    const Mesh& mesh() const { return mesh_; }
    const DofMap& velocity_map() const { return velocity_map_; }
    const SparseMat& stiffness() const { return stiffness_.matrix; }
    const SparseMat& coupling() const { return coupling_.matrix; }
    const SparseMat& augmented() const { return augmented_; }
    const Vector& mass() const { return mass_; }
    const Vector& velocity_load() const { return load_; }
    double nu() const { return nu_; }
    double lambda() const { return lambda_; }

    StokesSolution finish(const Vector& u_free, const Vector& p,
                          SolveDiagnostics diag) const {
        StokesSolution sol;
        sol.velocity.resize(velocity_map_.total);
        velocity_map_.expand(u_free, sol.velocity);
        sol.pressure = p;
        sol.diag = std::move(diag);
        return sol;
    }

private:
    const Mesh& mesh_;
    double nu_;
    double lambda_;
    DofMap velocity_map_;
    AssembledOperator stiffness_;
    AssembledOperator coupling_;
    Vector mass_;
    SparseMat augmented_;
    std::unique_ptr<CholeskyFactor> factor_;
    Vector load_;
};

/// Coercive solve with explicit pressure data given as a P0 field.
inline StokesSolution solve_ep(const Mesh& mesh, const ManufacturedCase& cs, double nu,
                               double lambda, const Vector& z_p0) {
    detail::Stopwatch timer;
    const CoerciveSystem sys(mesh, cs, nu, lambda);
    const Vector f_p = assemble_pressure_rhs(mesh, sys.mass(), z_p0);
    Vector u_free, p;
    sys.step(f_p, u_free, p);
    SolveDiagnostics diag;
    diag.outer_iterations = 1;
    diag.velocity_norm_A.push_back(detail::norm_A(sys.stiffness(), u_free));
    diag.divergence_norm.push_back(detail::norm_Minv(sys.mass(), sys.divergence(u_free)));
    diag.seconds = timer.seconds();
    return sys.finish(u_free, p, std::move(diag));
}

/// Coercive solve with the exact pressure potential of the case as data.
inline StokesSolution solve_ep(const Mesh& mesh, const ManufacturedCase& cs, double nu,
                               double lambda) {
    detail::Stopwatch timer;
    const CoerciveSystem sys(mesh, cs, nu, lambda);
    const Vector f_p = assemble_pressure_rhs(mesh, cs.pressure);
    Vector u_free, p;
    sys.step(f_p, u_free, p);
    SolveDiagnostics diag;
    diag.outer_iterations = 1;
    diag.velocity_norm_A.push_back(detail::norm_A(sys.stiffness(), u_free));
    diag.divergence_norm.push_back(detail::norm_Minv(sys.mass(), sys.divergence(u_free)));
    diag.seconds = timer.seconds();
    return sys.finish(u_free, p, std::move(diag));
}

/**
 * Iterative post-processing: starting from a zero-mean P^{-1}, repeatedly
 * solve the coercive system with data M P^{n-1}, reusing one Cholesky factor.
 * Stops when |P^n - P^{n-1}|_M <= eps |U^n|_A or after max_outer steps.
 * When `first_iterate` is given it receives the solution after one step.
 */
inline StokesSolution solve_post(const Mesh& mesh, const ManufacturedCase& cs, double nu,
                                 double lambda, Vector p_init, int max_outer = 8,
                                 double eps = 1e-12, StokesSolution* first_iterate = nullptr) {
    detail::Stopwatch timer;
    const CoerciveSystem sys(mesh, cs, nu, lambda);
    const double init_mean = sys.mass().dot(p_init);
    if (std::abs(init_mean) > 1e-8 * std::max(1.0, detail::norm_M(sys.mass(), p_init)))
        throw std::invalid_argument("solve_post: initial pressure must have zero weighted mean");

    SolveDiagnostics diag;
    Vector p_prev = std::move(p_init);
    Vector u_free, p;
    for (int n = 0; n < max_outer; ++n) {
        const Vector f_p = assemble_pressure_rhs(mesh, sys.mass(), p_prev);
        sys.step(f_p, u_free, p);
        diag.outer_iterations = n + 1;
        const double dp = detail::norm_M(sys.mass(), p - p_prev);
        const double ua = detail::norm_A(sys.stiffness(), u_free);
        diag.pressure_increment_M.push_back(dp);
        diag.velocity_norm_A.push_back(ua);
        diag.divergence_norm.push_back(detail::norm_Minv(sys.mass(), sys.divergence(u_free)));
        p_prev = p;
        if (n == 0 && first_iterate) *first_iterate = sys.finish(u_free, p, diag);
        if (dp <= eps * ua) break;
    }
    diag.seconds = timer.seconds();
    return sys.finish(u_free, p, std::move(diag));
}

struct CrOptions {
    LoadMode load_mode = LoadMode::Direct;
    double pcg_tol = 1e-12;
    int pcg_max_iter = 20000;
};

/**
 * Classical Crouzeix-Raviart P1nc x P0 solve of the saddle-point system via
 * prediction / Schur-complement pressure solve / correction / update. The
 * Schur system is solved by CG preconditioned with the inverse pressure mass,
 * each iterate projected back to zero mean. A PCG convergence failure signals
 * a loss of the discrete inf-sup condition (or an assembly bug) and is
 * reported with the residual history.
 *
 * In Direct mode the load is the honest duality pairing for the broken test
 * space (elementwise identity plus inter-element traces); in RT0Projected
 * mode the test function is replaced by its H(div)-conforming interpolant in
 * the whole right-hand side, which removes the pressure traces entirely and
 * makes the velocity pressure robust.
 */
inline StokesSolution solve_cr(const Mesh& mesh, const ManufacturedCase& cs, double nu,
                               const CrOptions& opts = {}) {
    detail::Stopwatch timer;
    DofMap dm = make_dofmap(mesh, SpaceKind::CRVector);
    if (!cs.homogeneous_boundary) set_dirichlet_values(dm, mesh, cs.velocity);
    const AssembledOperator A = assemble_stiffness(mesh, dm);
    const AssembledOperator B = assemble_coupling(mesh, dm);
    const Vector M = assemble_pressure_mass(mesh);
    detail::check_boundary_flux(B.lift);

    Vector f_u = assemble_velocity_load(mesh, dm, cs, nu, opts.load_mode);
    if (opts.load_mode == LoadMode::Direct)
        f_u += assemble_facet_load(mesh, dm, cs, nu, /*include_pressure_jumps=*/true);
    else
        f_u += assemble_rt0_viscous_correction(mesh, dm, cs, nu);

    const CholeskyFactor factor(A.matrix);
    const Vector u_star = factor.solve(f_u / nu - A.lift);

    const SchurOperator schur(B.matrix, factor);
    const Vector rhs_p = -nu * (B.matrix * u_star + B.lift);
    const LinearOp op = [&schur](const Vector& p) { return schur.apply(p); };
    const LinearOp precond = [&M](const Vector& r) { return r.cwiseQuotient(M); };
    const LinearOp projector = [&M](const Vector& p) { return zero_mean_project(p, M); };
    const PcgResult pressure_solve =
        pcg(op, precond, rhs_p, opts.pcg_tol, opts.pcg_max_iter, &projector);

    Vector p = zero_mean_project(pressure_solve.x, M);
    const Vector u_free = u_star + factor.solve(B.matrix.transpose() * p / nu);

    SolveDiagnostics diag;
    diag.outer_iterations = 1;
    diag.pcg_iterations = pressure_solve.iterations;
    diag.velocity_norm_A.push_back(detail::norm_A(A.matrix, u_free));
    diag.divergence_norm.push_back(detail::norm_Minv(M, B.matrix * u_free + B.lift));
    diag.seconds = timer.seconds();

    StokesSolution sol;
    sol.velocity.resize(dm.total);
    dm.expand(u_free, sol.velocity);
    sol.pressure = std::move(p);
    sol.diag = std::move(diag);
    return sol;
}

/// CR first, then the post-processing seeded with the CR pressure (same P0 layout).
struct PostRun {
    StokesSolution cr;
    StokesSolution post;
};

inline PostRun run_post_method(const Mesh& mesh, const ManufacturedCase& cs, double nu,
                               double lambda, int max_outer = 8, double eps = 1e-12,
                               const CrOptions& cr_opts = {}) {
    PostRun run;
    run.cr = solve_cr(mesh, cs, nu, cr_opts);
    run.post = solve_post(mesh, cs, nu, lambda, run.cr.pressure, max_outer, eps);
    return run;
}

/// Dispatch on the method with Dirichlet data taken from the case trace; the
/// shared lifting path rejects data with nonzero net boundary flux.
inline StokesSolution solve_nonhomogeneous(Method method, const Mesh& mesh,
                                           const ManufacturedCase& cs, double nu, double lambda,
                                           int post_iters = 8, double eps = 1e-12) {
    switch (method) {
    case Method::CR: return solve_cr(mesh, cs, nu);
    case Method::EP: return solve_ep(mesh, cs, nu, lambda);
    case Method::Post: return run_post_method(mesh, cs, nu, lambda, post_iters, eps).post;
    }
    throw std::invalid_argument("solve_nonhomogeneous: unknown method");
}

struct SpectrumResult {
    Vector eigenvalues; ///< spectrum of the restricted inverse iteration operator, ascending
    double rho = 0.0;   ///< spectral radius; 0 by convention when the restriction is empty
    int kernel_dim = 0; ///< dimension of ker(B^T M^{-1/2}) found numerically
};

/**
 * Dense spectrum of (I + lambda M^{-1/2} B A^{-1} B^T M^{-1/2})^{-1} restricted
 * to the orthogonal complement of ker(B^T M^{-1/2}). Desk-scale only.
 */
inline SpectrumResult iteration_matrix_spectrum(const SparseMat& A, const SparseMat& B,
                                                const Vector& m_diag, double lambda,
                                                int max_pressure_dofs = 400) {
    if (B.rows() > max_pressure_dofs)
        throw std::invalid_argument("iteration_matrix_spectrum: pressure dof count exceeds limit");
    const Eigen::MatrixXd Ad(A);
    const Eigen::MatrixXd Bd(B);
    const Eigen::MatrixXd AinvBt = Eigen::LLT<Eigen::MatrixXd>(Ad).solve(Bd.transpose());
    Eigen::MatrixXd S = Bd * AinvBt;
    const Vector scale = m_diag.cwiseSqrt().cwiseInverse();
    S = scale.asDiagonal() * S * scale.asDiagonal();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const Vector s = es.eigenvalues(); // ascending
    const double s_max = s.size() > 0 ? std::max(0.0, s[s.size() - 1]) : 0.0;
    const double cutoff = s_max * 1e-10;

    SpectrumResult result;
    std::vector<double> mu;
    for (int i = 0; i < s.size(); ++i) {
        if (s[i] <= cutoff) {
            ++result.kernel_dim;
        } else {
            mu.push_back(1.0 / (1.0 + lambda * s[i]));
        }
    }
    std::sort(mu.begin(), mu.end());
    result.eigenvalues = Eigen::Map<const Vector>(mu.data(), static_cast<Eigen::Index>(mu.size()));
    result.rho = mu.empty() ? 0.0 : mu.back();
    return result;
}

} // namespace stokesfem
