#pragma once

#include "ifem/common.hpp"
#include "ifem/fe_space.hpp"
#include "ifem/interface_quadrature.hpp"
#include "ifem/quadrature.hpp"

#include <Eigen/SparseCore>

#include <utility>
#include <vector>

namespace ifem {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class LoadSource { volume, interface, dirichlet_lift };

struct LoadVector {
    Vector values;
    LoadSource source = LoadSource::volume;
};

/// Local stiffness matrix of the reference cell scaled to a cell of edge `width`.
template <int dim>
Eigen::MatrixXd cell_stiffness(int degree, double width, const CellQuadrature<dim>& rule)
{
    const auto n_local = static_cast<Eigen::Index>(ipow<dim>(static_cast<std::size_t>(degree) + 1));
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n_local, n_local);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto shape = shape_eval<dim>(degree, rule.ref_points[q]);
        local.noalias() += rule.weights[q] * shape.gradients * shape.gradients.transpose();
    }
    // grad scales with 1/width, the measure with width^dim
    return local * std::pow(width, dim - 2);
}

/// A_ij = sum_K int_K grad(phi_i) . grad(phi_j).
///
/// All cells of the uniform grid are congruent, so the local matrix is
/// integrated once and scattered in ascending cell order.
template <int dim>
SparseMatrix assemble_stiffness(const FeSpace<dim>& space, const CellQuadrature<dim>& cell_rule)
{
    const Eigen::MatrixXd local = cell_stiffness<dim>(space.degree(), space.mesh().cell_width(), cell_rule);
    const std::size_t n_local = space.dofs_per_cell();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(space.mesh().n_cells() * n_local * n_local);
    for (CellId c = 0; c < space.mesh().n_cells(); ++c) {
        const auto dofs = space.cell_dofs(c);
        for (std::size_t i = 0; i < n_local; ++i) {
            for (std::size_t j = 0; j < n_local; ++j) {
                triplets.emplace_back(static_cast<Eigen::Index>(dofs[i]), static_cast<Eigen::Index>(dofs[j]),
                                      local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(space.n_dofs());
    SparseMatrix a(n, n);
    a.setFromTriplets(triplets.begin(), triplets.end());
    return a;
}

/// Layer source: entry i = sum_q w_q f(y_q) phi_i(y_q).
template <int dim>
LoadVector assemble_interface_load(const FeSpace<dim>& space, const InterfaceQuadrature<dim>& quad,
                                   const ScalarFunction<dim>& f)
{
    const auto& mesh = space.mesh();
    LoadVector load{Vector::Zero(static_cast<Eigen::Index>(space.n_dofs())), LoadSource::interface};
    for (std::size_t q = 0; q < quad.size(); ++q) {
        const CellId c = quad.owner_cell[q];
        const Point<dim>& y = quad.points[q];
        if (c >= mesh.n_cells() || !mesh.contains(c, y)) {
            throw ComputationError("interface quadrature point is not inside its owner cell");
        }
        const double fw = f(y) * quad.weights[q];
        if (fw == 0.0) {
            continue;
        }
        const auto shape = shape_eval<dim>(space.degree(), mesh.map_to_reference(c, y));
        const auto dofs = space.cell_dofs(c);
        for (std::size_t i = 0; i < dofs.size(); ++i) {
            load.values[static_cast<Eigen::Index>(dofs[i])] += fw * shape.values[static_cast<Eigen::Index>(i)];
        }
    }
    return load;
}

/// Entry i = int_Omega b phi_i.
template <int dim>
LoadVector assemble_volume_load(const FeSpace<dim>& space, const ScalarFunction<dim>& b,
                                const CellQuadrature<dim>& cell_rule)
{
    const auto& mesh = space.mesh();
    const double volume = std::pow(mesh.cell_width(), dim);
    std::vector<Eigen::VectorXd> shapes;
    shapes.reserve(cell_rule.size());
    for (const auto& p : cell_rule.ref_points) {
        shapes.push_back(shape_eval<dim>(space.degree(), p).values);
    }
    LoadVector load{Vector::Zero(static_cast<Eigen::Index>(space.n_dofs())), LoadSource::volume};
    for (CellId c = 0; c < mesh.n_cells(); ++c) {
        const auto dofs = space.cell_dofs(c);
        for (std::size_t q = 0; q < cell_rule.size(); ++q) {
            const double bw = b(mesh.map_to_cell(c, cell_rule.ref_points[q])) * cell_rule.weights[q] * volume;
            for (std::size_t i = 0; i < dofs.size(); ++i) {
                load.values[static_cast<Eigen::Index>(dofs[i])] += bw * shapes[q][static_cast<Eigen::Index>(i)];
            }
        }
    }
    return load;
}

/// Symmetric elimination of u = g on the boundary dofs.
///
/// Known columns move to the right-hand side, boundary rows and columns
/// become identity rows/columns, and rhs_i = g(x_i) on the boundary.
template <int dim>
std::pair<SparseMatrix, Vector> apply_dirichlet(const SparseMatrix& a, const Vector& rhs, const FeSpace<dim>& space,
                                                const ScalarFunction<dim>& g)
{
    require(a.rows() == static_cast<Eigen::Index>(space.n_dofs()) && a.cols() == a.rows(),
            "matrix size does not match the space");
    require(rhs.size() == a.rows(), "rhs size does not match the matrix");
    std::vector<bool> fixed(space.n_dofs(), false);
    Vector values = Vector::Zero(a.rows());
    for (const DofId i : space.boundary_dofs()) {
        fixed[i] = true;
        values[static_cast<Eigen::Index>(i)] = g(space.dof_point(i));
    }

    SparseMatrix out = a;
    Vector b = rhs;
    for (Eigen::Index row = 0; row < out.outerSize(); ++row) {
        const bool row_fixed = fixed[static_cast<std::size_t>(row)];
        for (SparseMatrix::InnerIterator it(out, row); it; ++it) {
            const auto col = it.col();
            if (row_fixed) {
                it.valueRef() = (col == row) ? 1.0 : 0.0;
            } else if (fixed[static_cast<std::size_t>(col)]) {
                b[row] -= it.value() * values[col];
                it.valueRef() = 0.0;
            }
        }
        if (row_fixed) {
            b[row] = values[row];
        }
    }
    out.prune(0.0);
    return {std::move(out), std::move(b)};
}

} // namespace ifem
