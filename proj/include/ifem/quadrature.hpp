#pragma once

#include "ifem/common.hpp"
#include "ifem/interface.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace ifem {

/// Gauss-Legendre rule with n points on [0,1]; weights sum to 1.
struct QuadratureRule1D {
    std::vector<double> points;
    std::vector<double> weights;
};

QuadratureRule1D gauss_legendre(std::size_t n_points);

/// Tensor-product rule on the reference cell [0,1]^dim.
template <int dim>
struct CellQuadrature {
    std::vector<Point<dim>> ref_points;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
};

/// Tensor Gauss-Legendre rule, exact for degree <= 2n-1 in each variable.
template <int dim>
CellQuadrature<dim> gauss_rule(std::size_t points_per_axis)
{
    require(points_per_axis >= 1, "quadrature needs at least one point per axis");
    const QuadratureRule1D line = gauss_legendre(points_per_axis);
    const std::size_t n = points_per_axis;
    CellQuadrature<dim> rule;
    rule.ref_points.reserve(ipow<dim>(n));
    rule.weights.reserve(ipow<dim>(n));
    for (std::size_t k = 0; k < ipow<dim>(n); ++k) {
        Point<dim> p;
        double w = 1.0;
        std::size_t rest = k;
        for (int d = 0; d < dim; ++d) {
            p[d] = line.points[rest % n];
            w *= line.weights[rest % n];
            rest /= n;
        }
        rule.ref_points.push_back(p);
        rule.weights.push_back(w);
    }
    return rule;
}

/// Axis-aligned sub-box of a cell, in reference coordinates of that cell.
template <int dim>
struct SubBox {
    Point<dim> lower;
    double width = 1.0;
    int depth = 0;
    std::optional<Region> region; // set when the closed sub-box misses the interface
};

/// Recursive bisection of a cell into sub-boxes that are (up to max_depth)
/// entirely on one side of the interface, each carrying the base rule.
template <int dim>
struct SplitCellQuadrature {
    std::vector<SubBox<dim>> leaves;
    CellQuadrature<dim> base;
    int max_depth = 0;

    /// Quadrature in reference coordinates of the parent cell.
    CellQuadrature<dim> flatten() const
    {
        CellQuadrature<dim> out;
        out.ref_points.reserve(leaves.size() * base.size());
        out.weights.reserve(leaves.size() * base.size());
        for (const auto& leaf : leaves) {
            const double vol = std::pow(leaf.width, dim);
            for (std::size_t q = 0; q < base.size(); ++q) {
                out.ref_points.push_back(leaf.lower + leaf.width * base.ref_points[q]);
                out.weights.push_back(vol * base.weights[q]);
            }
        }
        return out;
    }

    double total_volume() const
    {
        double v = 0.0;
        for (const auto& leaf : leaves) {
            v += std::pow(leaf.width, dim);
        }
        return v;
    }
};

namespace detail {

template <int dim>
void split_recursive(const Point<dim>& cell_lower, double cell_width, const SphereInterface<dim>& interface,
                     SubBox<dim> box, int max_depth, std::vector<SubBox<dim>>& leaves)
{
    const Point<dim> lo = cell_lower + cell_width * box.lower;
    const Point<dim> hi = lo + Point<dim>::Constant(cell_width * box.width);
    if (!interface.intersects(lo, hi)) {
        box.region = interface.region(0.5 * (lo + hi));
        leaves.push_back(box);
        return;
    }
    if (box.depth >= max_depth) {
        leaves.push_back(box);
        return;
    }
    const double half = 0.5 * box.width;
    for (unsigned child = 0; child < (1U << dim); ++child) {
        SubBox<dim> sub;
        sub.width = half;
        sub.depth = box.depth + 1;
        for (int d = 0; d < dim; ++d) {
            sub.lower[d] = box.lower[d] + (((child >> d) & 1U) ? half : 0.0);
        }
        split_recursive(cell_lower, cell_width, interface, sub, max_depth, leaves);
    }
}

} // namespace detail

/// Split the cell [lower, lower + width]^dim against the interface.
template <int dim>
SplitCellQuadrature<dim> split_cut_cell(const Point<dim>& lower, double width, const SphereInterface<dim>& interface,
                                        const CellQuadrature<dim>& base_rule, int max_depth)
{
    require(max_depth >= 0, "max_depth must be non-negative");
    SplitCellQuadrature<dim> out;
    out.base = base_rule;
    out.max_depth = max_depth;
    SubBox<dim> root;
    root.lower = Point<dim>::Zero();
    detail::split_recursive(lower, width, interface, root, max_depth, out.leaves);
    return out;
}

} // namespace ifem
