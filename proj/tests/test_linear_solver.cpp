#include "ifem/linear_solver.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <random>

namespace ifem {
namespace {

SparseMatrix to_sparse(const Eigen::MatrixXd& d) { return d.sparseView(); }

Eigen::MatrixXd random_spd(int n, std::mt19937& rng)
{
    std::normal_distribution<double> g;
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            b(i, j) = g(rng);
        }
    }
    return b * b.transpose() + n * Eigen::MatrixXd::Identity(n, n);
}

Vector random_vector(int n, std::mt19937& rng)
{
    std::normal_distribution<double> g;
    Vector v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = g(rng);
    }
    return v;
}

TEST(CgSolve, Identity)
{
    const Vector r = (Vector(4) << 1, -2, 3, 0.5).finished();
    const auto out = cg_solve(to_sparse(Eigen::MatrixXd::Identity(4, 4)), r);
    EXPECT_TRUE(out.report.converged);
    EXPECT_LE(out.report.iterations, 1);
    EXPECT_LT((out.solution - r).norm(), 1e-14);
}

// Forward elimination and back substitution on a tridiagonal system.
Vector thomas(Eigen::VectorXd lower, Eigen::VectorXd diag, Eigen::VectorXd upper, Eigen::VectorXd rhs)
{
    const Eigen::Index n = diag.size();
    for (Eigen::Index i = 1; i < n; ++i) {
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    Vector x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (Eigen::Index i = n - 2; i >= 0; --i) {
        x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    }
    return x;
}

TEST(CgSolve, TridiagonalPoisson)
{
    const int n = 5;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = 2.0;
        if (i > 0) {
            a(i, i - 1) = a(i - 1, i) = -1.0;
        }
    }
    const Vector ones = Vector::Ones(n);
    const Vector oracle = thomas(-ones, 2.0 * ones, -ones, ones);
    const Vector expected = (Vector(5) << 2.5, 4.0, 4.5, 4.0, 2.5).finished();
    EXPECT_LT((oracle - expected).norm(), 1e-14);
    const auto out = cg_solve(to_sparse(a), ones);
    EXPECT_TRUE(out.report.converged);
    EXPECT_LT((out.solution - oracle).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(CgSolve, ZeroRhs)
{
    const auto out = cg_solve(to_sparse(Eigen::MatrixXd::Identity(3, 3) * 2.0), Vector::Zero(3));
    EXPECT_EQ(out.report.iterations, 0);
    EXPECT_TRUE(out.report.converged);
    EXPECT_EQ(out.solution, Vector::Zero(3));
}

TEST(CgSolve, RejectsBadInput)
{
    const SparseMatrix a = to_sparse(Eigen::MatrixXd::Identity(3, 3));
    EXPECT_THROW(cg_solve(a, Vector::Ones(4)), InvalidArgument);
    EXPECT_THROW(cg_solve(a, Vector::Ones(3), 0.0), InvalidArgument);
}

TEST(CgSolve, ReportsNonConvergence)
{
    std::mt19937 rng(1);
    const Eigen::MatrixXd a = random_spd(40, rng);
    const auto out = cg_solve(to_sparse(a), random_vector(40, rng), 1e-14, 2, Preconditioner::none);
    EXPECT_FALSE(out.report.converged);
    EXPECT_GT(out.report.final_relative_residual, 1e-14);
}

TEST(CgSolve, AgreesWithDirectSolve)
{
    std::mt19937 rng(2);
    for (int n : {3, 10, 25, 50}) {
        const Eigen::MatrixXd a = random_spd(n, rng);
        const Vector b = random_vector(n, rng);
        const Vector direct = a.llt().solve(b);
        for (const auto pc : {Preconditioner::none, Preconditioner::jacobi}) {
            const auto out = cg_solve(to_sparse(a), b, 1e-12, 0, pc);
            EXPECT_TRUE(out.report.converged);
            EXPECT_LE(out.report.final_relative_residual, 1e-12);
            EXPECT_LT((out.solution - direct).cwiseAbs().maxCoeff(), 1e-8) << n;
        }
    }
}

TEST(CgSolve, EnergyErrorDecreasesMonotonically)
{
    std::mt19937 rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 20 + 6 * trial;
        const Eigen::MatrixXd a = random_spd(n, rng);
        const Vector b = random_vector(n, rng);
        const Vector direct = a.llt().solve(b);
        const SparseMatrix s = to_sparse(a);
        double previous = std::sqrt(direct.dot(a * direct)); // zero initial guess
        for (long k = 1; k <= n; ++k) {
            const auto out = cg_solve(s, b, 1e-300, k, Preconditioner::none);
            const Vector e = out.solution - direct;
            const double energy = std::sqrt(std::max(0.0, e.dot(a * e)));
            EXPECT_LE(energy, previous * (1.0 + 1e-12) + 1e-13) << "trial " << trial << " iteration " << k;
            previous = energy;
        }
    }
}

TEST(CgSolve, JacobiInvariance)
{
    std::mt19937 rng(9);
    const double tol = 1e-10;
    const Eigen::MatrixXd a = random_spd(30, rng);
    const Vector b = random_vector(30, rng);
    const auto plain = cg_solve(to_sparse(a), b, tol, 0, Preconditioner::none);
    const auto jacobi = cg_solve(to_sparse(a), b, tol, 0, Preconditioner::jacobi);
    EXPECT_LT((plain.solution - jacobi.solution).norm() / jacobi.solution.norm(), 10 * tol);
}

} // namespace
} // namespace ifem
