#pragma once

#include "ifem/common.hpp"
#include "ifem/interface.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace ifem {

/// Throws unless (dim, n_c) describes a supported uniform grid.
inline void check_mesh_arguments(int dim, long cells_per_axis)
{
    require(dim == 2 || dim == 3, "mesh dimension must be 2 or 3");
    require(cells_per_axis >= 1, "cells per axis must be at least 1");
}

/// Uniform axis-aligned grid of n_c^dim congruent boxes covering [0,1]^dim.
///
/// Vertices and cells are numbered lexicographically with x fastest; the
/// local vertex order of a cell follows the same convention.
template <int dim>
class Mesh {
    static_assert(dim == 2 || dim == 3, "only 2D and 3D meshes are supported");

public:
    static constexpr std::size_t vertices_per_cell = ipow<dim>(2);
    using CellVertices = std::array<std::size_t, vertices_per_cell>;

    explicit Mesh(std::size_t cells_per_axis) : n_(cells_per_axis)
    {
        check_mesh_arguments(dim, static_cast<long>(cells_per_axis));
        const std::size_t nv = n_ + 1;
        vertices_.reserve(ipow<dim>(nv));
        for (std::size_t k = 0; k < ipow<dim>(nv); ++k) {
            Point<dim> p;
            std::size_t rest = k;
            for (int d = 0; d < dim; ++d) {
                p[d] = static_cast<double>(rest % nv) / static_cast<double>(n_);
                rest /= nv;
            }
            vertices_.push_back(p);
        }
        cells_.reserve(n_cells());
        for (CellId c = 0; c < n_cells(); ++c) {
            const auto idx = cell_index(c);
            CellVertices vs{};
            for (std::size_t local = 0; local < vertices_per_cell; ++local) {
                std::size_t global = 0;
                std::size_t stride = 1;
                for (int d = 0; d < dim; ++d) {
                    global += (idx[d] + ((local >> d) & 1U)) * stride;
                    stride *= nv;
                }
                vs[local] = global;
            }
            cells_.push_back(vs);
        }
    }

    std::size_t cells_per_axis() const { return n_; }
    std::size_t n_cells() const { return ipow<dim>(n_); }
    std::size_t n_vertices() const { return vertices_.size(); }

    const std::vector<Point<dim>>& vertices() const { return vertices_; }
    const std::vector<CellVertices>& cells() const { return cells_; }

    /// Edge length of every cell.
    double cell_width() const { return 1.0 / static_cast<double>(n_); }

    /// Cell diameter h = sqrt(dim) / n_c.
    double h() const { return std::sqrt(static_cast<double>(dim)) / static_cast<double>(n_); }

    std::array<std::size_t, dim> cell_index(CellId c) const
    {
        std::array<std::size_t, dim> idx{};
        for (int d = 0; d < dim; ++d) {
            idx[d] = c % n_;
            c /= n_;
        }
        return idx;
    }

    CellId cell_id(const std::array<std::size_t, dim>& idx) const
    {
        CellId c = 0;
        for (int d = dim - 1; d >= 0; --d) {
            c = c * n_ + idx[d];
        }
        return c;
    }

    Point<dim> cell_lower(CellId c) const
    {
        const auto idx = cell_index(c);
        Point<dim> p;
        for (int d = 0; d < dim; ++d) {
            p[d] = static_cast<double>(idx[d]) / static_cast<double>(n_);
        }
        return p;
    }

    Point<dim> cell_upper(CellId c) const
    {
        const auto idx = cell_index(c);
        Point<dim> p;
        for (int d = 0; d < dim; ++d) {
            p[d] = static_cast<double>(idx[d] + 1) / static_cast<double>(n_);
        }
        return p;
    }

    /// Affine map of the reference cell [0,1]^dim onto cell c.
    Point<dim> map_to_cell(CellId c, const Point<dim>& ref) const
    {
        return cell_lower(c) + cell_width() * ref;
    }

    Point<dim> map_to_reference(CellId c, const Point<dim>& x) const
    {
        return (x - cell_lower(c)) / cell_width();
    }

    /// True when x lies in the closed box of cell c up to tol.
    bool contains(CellId c, const Point<dim>& x, double tol = 1e-12) const
    {
        const Point<dim> lo = cell_lower(c);
        const Point<dim> hi = cell_upper(c);
        return ((x.array() >= lo.array() - tol) && (x.array() <= hi.array() + tol)).all();
    }

    /// Cell containing x (ties on shared faces resolve to the lower index);
    /// throws when x lies outside [0,1]^dim by more than tol.
    CellId locate(const Point<dim>& x, double tol = 1e-12) const
    {
        std::array<std::size_t, dim> idx{};
        for (int d = 0; d < dim; ++d) {
            if (x[d] < -tol || x[d] > 1.0 + tol || !std::isfinite(x[d])) {
                throw ComputationError("point lies outside the unit box");
            }
            const double s = x[d] * static_cast<double>(n_);
            long i = static_cast<long>(std::floor(s));
            i = std::clamp<long>(i, 0, static_cast<long>(n_) - 1);
            idx[d] = static_cast<std::size_t>(i);
        }
        return cell_id(idx);
    }

private:
    std::size_t n_;
    std::vector<Point<dim>> vertices_;
    std::vector<CellVertices> cells_;
};

template <int dim>
Mesh<dim> build_uniform_mesh(std::size_t cells_per_axis)
{
    return Mesh<dim>(cells_per_axis);
}

/// Split of the mesh into the layer of cells near the interface and the rest.
struct CellClassification {
    std::vector<CellId> in_cells;
    std::vector<CellId> out_cells;
    std::vector<bool> is_in;
    std::vector<double> d_min; // d_K = dist(K, Gamma)
    std::vector<double> d_max; // max over K of dist(x, Gamma)
    double sigma = 0.0;
    double h = 0.0;
};

/// A cell belongs to the interface layer iff max_K dist(x, Gamma) <= sigma * h.
template <int dim>
CellClassification classify_cells(const Mesh<dim>& mesh, const SphereInterface<dim>& interface, double sigma)
{
    require(sigma > 0.0, "safety coefficient sigma must be positive");
    CellClassification out;
    out.sigma = sigma;
    out.h = mesh.h();
    const std::size_t nc = mesh.n_cells();
    out.is_in.assign(nc, false);
    out.d_min.resize(nc);
    out.d_max.resize(nc);
    const double threshold = sigma * mesh.h();
    for (CellId c = 0; c < nc; ++c) {
        const auto [dmin, dmax] = interface.distance_range(mesh.cell_lower(c), mesh.cell_upper(c));
        out.d_min[c] = dmin;
        out.d_max[c] = dmax;
        if (dmax <= threshold) {
            out.is_in[c] = true;
            out.in_cells.push_back(c);
        } else {
            out.out_cells.push_back(c);
        }
    }
    return out;
}

/// Default safety coefficient: every cut cell is in the layer.
template <int dim>
constexpr double default_sigma()
{
    return dim == 2 ? 1.4142135623730951 : 1.7320508075688772;
}

} // namespace ifem
