#pragma once

#include "ifem/common.hpp"
#include "ifem/mesh.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace ifem {

inline constexpr int max_degree = 3;

/// Shape function values and reference-cell gradients at one point.
/// Storage is inline (no heap allocation) up to max_degree.
template <int dim>
struct ShapeValues {
    static constexpr int max_local = static_cast<int>(ipow<dim>(max_degree + 1));
    Eigen::Matrix<double, Eigen::Dynamic, 1, 0, max_local, 1> values;
    Eigen::Matrix<double, Eigen::Dynamic, dim, 0, max_local, dim> gradients;
};

namespace detail {

// 1D Lagrange basis on the equispaced nodes a/degree, a = 0..degree.
inline void lagrange_1d(int degree, double t, double* values, double* derivatives)
{
    for (int a = 0; a <= degree; ++a) {
        const double ta = static_cast<double>(a) / degree;
        double value = 1.0;
        double deriv = 0.0;
        for (int b = 0; b <= degree; ++b) {
            if (b == a) {
                continue;
            }
            const double tb = static_cast<double>(b) / degree;
            const double factor = (t - tb) / (ta - tb);
            deriv = deriv * factor + value / (ta - tb);
            value *= factor;
        }
        values[a] = value;
        derivatives[a] = deriv;
    }
}

} // namespace detail

/// Tensor-product Lagrange shape functions of Q^degree on [0,1]^dim.
/// Local nodes are numbered lexicographically with x fastest.
template <int dim>
ShapeValues<dim> shape_eval(int degree, const Point<dim>& ref_point)
{
    require(degree >= 1 && degree <= max_degree, "polynomial degree must be in [1, 3]");
    const int n1 = degree + 1;
    constexpr int max_nodes = max_degree + 1;
    double v1[dim][max_nodes];
    double d1[dim][max_nodes];
    for (int d = 0; d < dim; ++d) {
        detail::lagrange_1d(degree, ref_point[d], v1[d], d1[d]);
    }
    const std::size_t n_local = ipow<dim>(static_cast<std::size_t>(n1));
    ShapeValues<dim> out;
    out.values.resize(static_cast<Eigen::Index>(n_local));
    out.gradients.resize(static_cast<Eigen::Index>(n_local), dim);
    for (std::size_t i = 0; i < n_local; ++i) {
        int a[dim];
        std::size_t rest = i;
        for (int d = 0; d < dim; ++d) {
            a[d] = static_cast<int>(rest % static_cast<std::size_t>(n1));
            rest /= static_cast<std::size_t>(n1);
        }
        double value = 1.0;
        for (int d = 0; d < dim; ++d) {
            value *= v1[d][a[d]];
        }
        const auto row = static_cast<Eigen::Index>(i);
        out.values[row] = value;
        for (int g = 0; g < dim; ++g) {
            double prod = 1.0;
            for (int d = 0; d < dim; ++d) {
                prod *= (d == g) ? d1[d][a[d]] : v1[d][a[d]];
            }
            out.gradients(row, g) = prod;
        }
    }
    return out;
}

/// Continuous piecewise Q^degree space with nodal degrees of freedom.
///
/// Dofs sit on the tensor grid of spacing 1 / (degree * n_c), numbered
/// lexicographically with x fastest. The mesh must outlive the space.
template <int dim>
class FeSpace {
public:
    FeSpace(const Mesh<dim>& mesh, int degree) : mesh_(&mesh), degree_(degree)
    {
        require(degree >= 1 && degree <= max_degree, "polynomial degree must be in [1, 3]");
        nodes_per_axis_ = static_cast<std::size_t>(degree) * mesh.cells_per_axis() + 1;
        const std::size_t n1 = static_cast<std::size_t>(degree) + 1;
        const std::size_t n_local = ipow<dim>(n1);
        cell_dofs_.resize(mesh.n_cells() * n_local);
        for (CellId c = 0; c < mesh.n_cells(); ++c) {
            const auto idx = mesh.cell_index(c);
            for (std::size_t i = 0; i < n_local; ++i) {
                std::size_t rest = i;
                std::size_t global = 0;
                std::size_t stride = 1;
                for (int d = 0; d < dim; ++d) {
                    const std::size_t a = rest % n1;
                    rest /= n1;
                    global += (idx[d] * static_cast<std::size_t>(degree) + a) * stride;
                    stride *= nodes_per_axis_;
                }
                cell_dofs_[c * n_local + i] = global;
            }
        }
        for (DofId i = 0; i < n_dofs(); ++i) {
            const auto idx = node_index(i);
            bool on_boundary = false;
            for (int d = 0; d < dim; ++d) {
                on_boundary = on_boundary || idx[d] == 0 || idx[d] == nodes_per_axis_ - 1;
            }
            if (on_boundary) {
                boundary_dofs_.push_back(i);
            }
        }
    }

    const Mesh<dim>& mesh() const { return *mesh_; }
    int degree() const { return degree_; }
    std::size_t n_dofs() const { return ipow<dim>(nodes_per_axis_); }
    std::size_t dofs_per_cell() const { return ipow<dim>(static_cast<std::size_t>(degree_) + 1); }
    std::size_t nodes_per_axis() const { return nodes_per_axis_; }

    std::span<const DofId> cell_dofs(CellId c) const
    {
        return {cell_dofs_.data() + c * dofs_per_cell(), dofs_per_cell()};
    }

    const std::vector<DofId>& boundary_dofs() const { return boundary_dofs_; }

    std::array<std::size_t, dim> node_index(DofId i) const
    {
        std::array<std::size_t, dim> idx{};
        for (int d = 0; d < dim; ++d) {
            idx[d] = i % nodes_per_axis_;
            i /= nodes_per_axis_;
        }
        return idx;
    }

    Point<dim> dof_point(DofId i) const
    {
        const auto idx = node_index(i);
        const double denom = static_cast<double>(nodes_per_axis_ - 1);
        Point<dim> p;
        for (int d = 0; d < dim; ++d) {
            p[d] = static_cast<double>(idx[d]) / denom;
        }
        return p;
    }

    /// Value of the FE function with the given coefficients at x.
    double value(const Vector& coeffs, const Point<dim>& x) const
    {
        const CellId c = mesh_->locate(x);
        const auto shape = shape_eval<dim>(degree_, mesh_->map_to_reference(c, x));
        const auto dofs = cell_dofs(c);
        double u = 0.0;
        for (std::size_t i = 0; i < dofs.size(); ++i) {
            u += coeffs[static_cast<Eigen::Index>(dofs[i])] * shape.values[static_cast<Eigen::Index>(i)];
        }
        return u;
    }

    Tensor1<dim> gradient(const Vector& coeffs, const Point<dim>& x) const
    {
        const CellId c = mesh_->locate(x);
        const auto shape = shape_eval<dim>(degree_, mesh_->map_to_reference(c, x));
        const auto dofs = cell_dofs(c);
        Tensor1<dim> g = Tensor1<dim>::Zero();
        for (std::size_t i = 0; i < dofs.size(); ++i) {
            g += coeffs[static_cast<Eigen::Index>(dofs[i])] *
                 shape.gradients.row(static_cast<Eigen::Index>(i)).transpose();
        }
        return g / mesh_->cell_width();
    }

private:
    const Mesh<dim>* mesh_;
    int degree_;
    std::size_t nodes_per_axis_ = 0;
    std::vector<DofId> cell_dofs_;
    std::vector<DofId> boundary_dofs_;
};

/// Standard nodal interpolant: coefficients are g at the dof points.
template <int dim>
Vector interpolate(const FeSpace<dim>& space, const ScalarFunction<dim>& g)
{
    Vector coeffs(static_cast<Eigen::Index>(space.n_dofs()));
    for (DofId i = 0; i < space.n_dofs(); ++i) {
        coeffs[static_cast<Eigen::Index>(i)] = g(space.dof_point(i));
    }
    return coeffs;
}

/// Dofs that are nodes of at least one cell outside the interface layer.
template <int dim>
std::vector<bool> out_layer_dofs(const FeSpace<dim>& space, const CellClassification& classification)
{
    require(classification.is_in.size() == space.mesh().n_cells(), "classification belongs to another mesh");
    std::vector<bool> keep(space.n_dofs(), false);
    for (const CellId c : classification.out_cells) {
        for (const DofId i : space.cell_dofs(c)) {
            keep[i] = true;
        }
    }
    return keep;
}

/// Modified interpolant: nodal interpolation on dofs touching an out-cell,
/// zero on dofs supported only inside the interface layer.
template <int dim>
Vector pi_h(const FeSpace<dim>& space, const CellClassification& classification, const ScalarFunction<dim>& g)
{
    const auto keep = out_layer_dofs(space, classification);
    Vector coeffs = Vector::Zero(static_cast<Eigen::Index>(space.n_dofs()));
    for (DofId i = 0; i < space.n_dofs(); ++i) {
        if (keep[i]) {
            coeffs[static_cast<Eigen::Index>(i)] = g(space.dof_point(i));
        }
    }
    return coeffs;
}

} // namespace ifem
