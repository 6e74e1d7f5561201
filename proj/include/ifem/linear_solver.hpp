#pragma once

#include "ifem/assembly.hpp"
#include "ifem/common.hpp"

#include <Eigen/IterativeLinearSolvers>

namespace ifem {

enum class Preconditioner { none, jacobi };

struct SolveReport {
    long iterations = 0;
    double final_relative_residual = 0.0;
    bool converged = false;
};

struct SolveResult {
    Vector solution;
    SolveReport report;
};

inline constexpr double default_cg_tolerance = 1e-10;

namespace detail {

template <typename Solver>
SolveResult run_cg(Solver& solver, const SparseMatrix& a, const Vector& rhs, double tol, long max_iter)
{
    solver.setTolerance(tol);
    solver.setMaxIterations(max_iter);
    solver.compute(a);
    SolveResult out;
    out.solution = solver.solve(rhs);
    long used = solver.iterations();
    const double rhs_norm = rhs.norm();
    double rel = (a * out.solution - rhs).norm() / rhs_norm;
    // The recursive residual can drift from the true one; restart once.
    if (rel > tol && used < max_iter) {
        solver.setMaxIterations(max_iter - used);
        out.solution = solver.solveWithGuess(rhs, out.solution);
        used += solver.iterations();
        rel = (a * out.solution - rhs).norm() / rhs_norm;
    }
    out.report.iterations = used;
    out.report.final_relative_residual = rel;
    out.report.converged = rel <= tol;
    return out;
}

} // namespace detail

/// Conjugate gradients on an SPD system; stops when ||Au - b|| / ||b|| <= tol.
///
/// A non-converged solve returns the last iterate with converged = false.
/// max_iter <= 0 selects 10 * n.
inline SolveResult cg_solve(const SparseMatrix& a, const Vector& rhs, double tol = default_cg_tolerance,
                            long max_iter = 0, Preconditioner preconditioner = Preconditioner::jacobi)
{
    require(tol > 0.0, "CG tolerance must be positive");
    require(a.rows() == a.cols() && a.rows() == rhs.size(), "CG system size mismatch");
    if (max_iter <= 0) {
        max_iter = 10 * static_cast<long>(a.rows());
    }
    if (rhs.squaredNorm() == 0.0) {
        return {Vector::Zero(rhs.size()), SolveReport{0, 0.0, true}};
    }
    if (preconditioner == Preconditioner::jacobi) {
        Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>>
            solver;
        return detail::run_cg(solver, a, rhs, tol, max_iter);
    }
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::IdentityPreconditioner> solver;
    return detail::run_cg(solver, a, rhs, tol, max_iter);
}

} // namespace ifem
