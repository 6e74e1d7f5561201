#include "ifem/fe_space.hpp"
#include "ifem/weighted_norms.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

namespace ifem {
namespace {

TEST(ShapeEval, KroneckerAtNodes)
{
    for (int degree = 1; degree <= 3; ++degree) {
        const int n1 = degree + 1;
        for (int a = 0; a < n1; ++a) {
            for (int b = 0; b < n1; ++b) {
                const Point<2> node(static_cast<double>(a) / degree, static_cast<double>(b) / degree);
                const auto s = shape_eval<2>(degree, node);
                for (int i = 0; i < n1 * n1; ++i) {
                    EXPECT_NEAR(s.values[i], i == a + n1 * b ? 1.0 : 0.0, 1e-14) << degree;
                }
            }
        }
    }
    const auto s = shape_eval<2>(1, Point<2>(0, 0));
    EXPECT_EQ(s.values.size(), 4);
    EXPECT_DOUBLE_EQ(s.values[0], 1.0);
    EXPECT_DOUBLE_EQ(s.values[1], 0.0);
    EXPECT_DOUBLE_EQ(s.values[2], 0.0);
    EXPECT_DOUBLE_EQ(s.values[3], 0.0);
}

TEST(ShapeEval, CentreValues)
{
    const auto s = shape_eval<2>(1, Point<2>(0.5, 0.5));
    for (int i = 0; i < 4; ++i) {
        EXPECT_DOUBLE_EQ(s.values[i], 0.25);
    }
}

TEST(ShapeEval, PartitionOfUnity)
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int degree = 1; degree <= 3; ++degree) {
        for (int k = 0; k < 20; ++k) {
            const Point<3> p(u(rng), u(rng), u(rng));
            const auto s = shape_eval<3>(degree, p);
            EXPECT_NEAR(s.values.sum(), 1.0, 1e-13);
            EXPECT_LT(s.gradients.colwise().sum().norm(), 1e-12);
        }
    }
}

TEST(ShapeEval, GradientMatchesFiniteDifference)
{
    const Point<2> p(0.3, 0.7);
    const double eps = 1e-6;
    for (int degree = 1; degree <= 3; ++degree) {
        const auto s = shape_eval<2>(degree, p);
        for (int d = 0; d < 2; ++d) {
            Point<2> e = Point<2>::Zero();
            e[d] = eps;
            const auto sp = shape_eval<2>(degree, Point<2>(p + e));
            const auto sm = shape_eval<2>(degree, Point<2>(p - e));
            for (Eigen::Index i = 0; i < s.values.size(); ++i) {
                EXPECT_NEAR(s.gradients(i, d), (sp.values[i] - sm.values[i]) / (2 * eps), 1e-8);
            }
        }
    }
}

TEST(FeSpace, DofCounts)
{
    const Mesh<2> m(4);
    EXPECT_EQ(FeSpace<2>(m, 1).n_dofs(), 25U);
    EXPECT_EQ(FeSpace<2>(m, 2).n_dofs(), 81U);
    const Mesh<3> m3(2);
    EXPECT_EQ(FeSpace<3>(m3, 2).n_dofs(), 125U);
    EXPECT_EQ(FeSpace<2>(m, 1).boundary_dofs().size(), 16U);
    EXPECT_THROW(FeSpace<2>(m, 0), InvalidArgument);
    EXPECT_THROW(FeSpace<2>(m, 4), InvalidArgument);
}

TEST(FeSpace, CellDofsAreCellNodes)
{
    const Mesh<2> m(3);
    const FeSpace<2> space(m, 2);
    for (CellId c = 0; c < m.n_cells(); ++c) {
        const auto dofs = space.cell_dofs(c);
        ASSERT_EQ(dofs.size(), 9U);
        for (std::size_t i = 0; i < 9; ++i) {
            const Point<2> ref(0.5 * static_cast<double>(i % 3), 0.5 * static_cast<double>(i / 3));
            EXPECT_LT((space.dof_point(dofs[i]) - m.map_to_cell(c, ref)).norm(), 1e-15);
        }
    }
}

TEST(Interpolate, Constant)
{
    const Mesh<2> m(5);
    const FeSpace<2> space(m, 2);
    const Vector v = interpolate(space, [](const Point<2>&) { return 1.0; });
    EXPECT_EQ(v, Vector::Ones(static_cast<Eigen::Index>(space.n_dofs())));
}

TEST(Interpolate, ReproducesLinearAndBilinear)
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Mesh<2> m(6);
    auto lin = [](const Point<2>& x) { return 0.3 + 2.0 * x[0] - 1.5 * x[1]; };
    auto bil = [](const Point<2>& x) { return x[0] * x[1]; };
    for (int degree = 1; degree <= 3; ++degree) {
        const FeSpace<2> space(m, degree);
        const Vector cl = interpolate(space, lin);
        const Vector cb = interpolate(space, bil);
        for (int k = 0; k < 10; ++k) {
            const Point<2> x(u(rng), u(rng));
            EXPECT_NEAR(space.value(cl, x), lin(x), 1e-13);
            EXPECT_NEAR(space.value(cb, x), bil(x), 1e-13);
            EXPECT_NEAR(space.gradient(cl, x)[0], 2.0, 1e-11);
            EXPECT_NEAR(space.gradient(cl, x)[1], -1.5, 1e-11);
        }
    }
    const Mesh<3> m3(3);
    const FeSpace<3> s3(m3, 1);
    auto lin3 = [](const Point<3>& x) { return x[0] - x[1] + 2.0 * x[2]; };
    const Vector c3 = interpolate(s3, lin3);
    for (int k = 0; k < 10; ++k) {
        const Point<3> x(u(rng), u(rng), u(rng));
        EXPECT_NEAR(s3.value(c3, x), lin3(x), 1e-13);
    }
}

const SphereInterface<2> circle(Point<2>(0.3, 0.3), 0.2);

TEST(PiH, EqualsInterpolationWithoutLayer)
{
    const SphereInterface<2> far(Point<2>(10, 10), 0.2);
    const Mesh<2> m(8);
    const FeSpace<2> space(m, 1);
    const auto cls = classify_cells(m, far, 2.0);
    ASSERT_TRUE(cls.in_cells.empty());
    auto g = [](const Point<2>& x) { return std::sin(x[0]) + x[1]; };
    EXPECT_EQ(pi_h(space, cls, g), interpolate(space, g));
}

TEST(PiH, ZeroWhenAllCellsInLayer)
{
    const Mesh<2> m(8);
    const FeSpace<2> space(m, 1);
    const auto cls = classify_cells(m, circle, 10.0 * std::sqrt(2.0) * 8);
    const Vector p = pi_h(space, cls, [](const Point<2>&) { return 1.0; });
    EXPECT_EQ(p, Vector::Zero(static_cast<Eigen::Index>(space.n_dofs())));
}

TEST(PiH, ZeroSetMatchesAdjacency)
{
    const Mesh<2> m(8);
    const FeSpace<2> space(m, 1);
    const auto cls = classify_cells(m, circle, std::sqrt(2.0));
    const Vector p = pi_h(space, cls, [](const Point<2>&) { return 1.0; });

    // A vertex (i, j) touches the cells (i-1..i, j-1..j) that exist.
    std::set<DofId> expected_zero;
    for (std::size_t j = 0; j <= 8; ++j) {
        for (std::size_t i = 0; i <= 8; ++i) {
            bool all_in = true;
            for (int di = -1; di <= 0; ++di) {
                for (int dj = -1; dj <= 0; ++dj) {
                    const long ci = static_cast<long>(i) + di;
                    const long cj = static_cast<long>(j) + dj;
                    if (ci < 0 || cj < 0 || ci >= 8 || cj >= 8) {
                        continue;
                    }
                    all_in = all_in && cls.is_in[static_cast<std::size_t>(ci + 8 * cj)];
                }
            }
            if (all_in) {
                expected_zero.insert(i + 9 * j);
            }
        }
    }
    EXPECT_FALSE(expected_zero.empty());
    for (DofId i = 0; i < space.n_dofs(); ++i) {
        const double v = p[static_cast<Eigen::Index>(i)];
        EXPECT_TRUE(v == 0.0 || v == 1.0);
        EXPECT_EQ(v == 0.0, expected_zero.count(i) == 1) << "dof " << i;
    }
}

TEST(PiH, Linear)
{
    const Mesh<2> m(16);
    const FeSpace<2> space(m, 2);
    const auto cls = classify_cells(m, circle, std::sqrt(2.0));
    auto g1 = [](const Point<2>& x) { return std::exp(x[0]) * x[1]; };
    auto g2 = [](const Point<2>& x) { return 1.0 - x[0]; };
    const double a = 3.0;
    const Vector lhs = pi_h(space, cls, [&](const Point<2>& x) { return a * g1(x) + g2(x); });
    const Vector rhs = a * pi_h(space, cls, g1) + pi_h(space, cls, g2);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-15);
}

// Broken H1 seminorm of u - Pi_h u over the out-cells only, Gauss 6 per axis.
double out_cell_seminorm(const FeSpace<2>& space, const CellClassification& cls, const Vector& coeffs,
                         const ExactSolution<2>& u)
{
    const auto rule = gauss_rule<2>(6);
    const auto& m = space.mesh();
    const double vol = m.cell_width() * m.cell_width();
    double s = 0.0;
    for (const CellId c : cls.out_cells) {
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Point<2> x = m.map_to_cell(c, rule.ref_points[q]);
            const auto shape = shape_eval<2>(space.degree(), rule.ref_points[q]);
            Tensor1<2> g = Tensor1<2>::Zero();
            const auto dofs = space.cell_dofs(c);
            for (std::size_t i = 0; i < dofs.size(); ++i) {
                g += coeffs[static_cast<Eigen::Index>(dofs[i])] *
                     shape.gradients.row(static_cast<Eigen::Index>(i)).transpose();
            }
            s += vol * rule.weights[q] * (u.gradient(x) - g / m.cell_width()).squaredNorm();
        }
    }
    return std::sqrt(s);
}

// The out-cell region grows towards Gamma under refinement, so coarse levels
// are pre-asymptotic; the rate is measured on the three finest refinements.
TEST(PiH, OutCellInterpolationRate)
{
    const auto u = kinked_potential(circle);
    for (int degree = 1; degree <= 2; ++degree) {
        std::vector<double> err;
        for (std::size_t n : {64U, 128U, 256U, 512U}) {
            const Mesh<2> m(n);
            const FeSpace<2> space(m, degree);
            const auto cls = classify_cells(m, circle, std::sqrt(2.0));
            err.push_back(out_cell_seminorm(space, cls, pi_h(space, cls, u.value), u));
        }
        for (std::size_t k = 1; k < err.size(); ++k) {
            EXPECT_GE(std::log2(err[k - 1] / err[k]), degree - 0.2) << "degree " << degree << " level " << k;
        }
    }
}

} // namespace
} // namespace ifem
