#pragma once

/**
 * @file linalg.hpp
 * @brief Sparse kernels: Cholesky factorization, preconditioned conjugate
 *        gradients with an optional subspace projector, the pressure Schur
 *        operator, and the zero-mean projection.
 */

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stokesfem {

using SparseMat = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
    std::vector<double> residual_history;
};

/// Coordinate-format dump, "row col value" per line, 0-based.
inline void dump_coo(const SparseMat& A, std::ostream& out) {
    out.precision(17);
    for (int k = 0; k < A.outerSize(); ++k)
        for (SparseMat::InnerIterator it(A, k); it; ++it)
            out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

/**
 * Sparse Cholesky of a symmetric positive-definite matrix with AMD
 * fill-reducing ordering, computed once and reused across solves.
 * Construction throws SolverError on a non-positive pivot, which signals a
 * non-SPD input (an assembly bug or a constrained-dof leak).
 */
class CholeskyFactor {
public:
    explicit CholeskyFactor(const SparseMat& A) {
        llt_.compute(A);
        if (llt_.info() != Eigen::Success)
            throw SolverError("cholesky: matrix is not positive definite");
    }

    Vector solve(const Vector& rhs) const { return llt_.solve(rhs); }

    /// Lower factor and permutation, exposed for reconstruction checks.
    const Eigen::SimplicialLLT<SparseMat>& factorization() const { return llt_; }

private:
    Eigen::SimplicialLLT<SparseMat> llt_;
};

/// P - (sum M_i P_i / sum M_i) 1: the M-weighted zero-mean projection.
inline Vector zero_mean_project(const Vector& p, const Vector& m_diag) {
    const double mean = m_diag.dot(p) / m_diag.sum();
    return p - Vector::Constant(p.size(), mean);
}

/// Applies P -> B A^{-1} B^T P without forming the Schur complement.
class SchurOperator {
public:
    SchurOperator(const SparseMat& B, const CholeskyFactor& a_factor)
        : B_(B), a_factor_(a_factor) {}

    Vector apply(const Vector& p) const { return B_ * a_factor_.solve(B_.transpose() * p); }

private:
    const SparseMat& B_;
    const CholeskyFactor& a_factor_;
};

struct PcgResult {
    Vector x;
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history; ///< preconditioned residual norms
};

using LinearOp = std::function<Vector(const Vector&)>;
using IterateHook = std::function<void(const Vector&)>;

/**
 * Preconditioned conjugate gradients. When a projector is supplied, every
 * preconditioned residual and every iterate are re-projected, which deflates
 * the operator's kernel out of the Krylov space (the operator only needs to
 * be definite on the projected subspace) and keeps the projector's invariant
 * on the returned solution. The right-hand side must be consistent (in the
 * operator's range) up to roundoff. Stops when the relative preconditioned
 * residual drops below tol. Throws SolverError (with the residual history
 * attached) when max_iter is exceeded.
 */
inline PcgResult pcg(const LinearOp& op, const LinearOp& precond, const Vector& rhs, double tol,
                     int max_iter, const LinearOp* projector = nullptr,
                     const IterateHook* on_iterate = nullptr) {
    const auto project = [&](Vector v) { return projector ? (*projector)(std::move(v)) : v; };
    PcgResult result;
    Vector x = Vector::Zero(rhs.size());
    Vector r = rhs;
    Vector z = project(precond(r));
    double rz = r.dot(z);
    const double rz0 = rz;
    result.residual_history.push_back(std::sqrt(std::max(rz, 0.0)));
    if (rz0 <= 0.0) { // zero right-hand side
        result.x = x;
        result.converged = true;
        return result;
    }
    Vector d = z;
    for (int it = 0; it < max_iter; ++it) {
        const Vector ad = op(d);
        const double dad = d.dot(ad);
        if (!(dad > 0.0))
            throw SolverError("pcg: operator not positive definite on the search space");
        const double alpha = rz / dad;
        x += alpha * d;
        x = project(std::move(x));
        if (on_iterate) (*on_iterate)(x);
        r -= alpha * ad;
        z = project(precond(r));
        const double rz_next = r.dot(z);
        result.residual_history.push_back(std::sqrt(std::max(rz_next, 0.0)));
        result.iterations = it + 1;
        if (rz_next <= tol * tol * rz0) {
            result.x = x;
            result.converged = true;
            return result;
        }
        d = z + (rz_next / rz) * d;
        rz = rz_next;
    }
    SolverError err("pcg: no convergence within " + std::to_string(max_iter) + " iterations");
    err.residual_history = result.residual_history;
    throw err;
}

} // namespace stokesfem
