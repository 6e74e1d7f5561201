#pragma once

#include "ifem/common.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace ifem {

enum class Region { interior, exterior, on_gamma };

/// Closed circle (2D) or sphere (3D) immersed in the unit box.
///
/// The interior (inside the sphere) is the minus side; the normal points
/// towards the exterior, so a jump [[a]] = a(exterior) - a(interior).
template <int dim>
class SphereInterface {
    static_assert(dim == 2 || dim == 3, "only 2D and 3D interfaces are supported");

public:
    static constexpr double region_tolerance = 1e-14;

    SphereInterface(const Point<dim>& center, double radius) : center_(center), radius_(radius)
    {
        require(std::isfinite(radius) && radius > 0.0, "interface radius must be positive");
        require(center.allFinite(), "interface center must be finite");
        const auto [lo, hi] = boundary_radius_range();
        require(!(lo <= radius && radius <= hi), "interface must not touch the domain boundary");
    }

    const Point<dim>& center() const { return center_; }
    double radius() const { return radius_; }

    /// Hausdorff measure of the interface (circumference or area).
    double measure() const
    {
        if constexpr (dim == 2) {
            return 2.0 * std::numbers::pi * radius_;
        } else {
            return 4.0 * std::numbers::pi * radius_ * radius_;
        }
    }

    /// Enclosed length/volume.
    double enclosed_volume() const
    {
        if constexpr (dim == 2) {
            return std::numbers::pi * radius_ * radius_;
        } else {
            return 4.0 / 3.0 * std::numbers::pi * radius_ * radius_ * radius_;
        }
    }

    double distance(const Point<dim>& x) const { return std::abs((x - center_).norm() - radius_); }

    Tensor1<dim> normal(const Point<dim>& y) const
    {
        const Tensor1<dim> r = y - center_;
        const double len = r.norm();
        require(len > 0.0, "normal is undefined at the interface center");
        return r / len;
    }

    Region region(const Point<dim>& x) const
    {
        const double s = (x - center_).norm() - radius_;
        if (std::abs(s) <= region_tolerance) {
            return Region::on_gamma;
        }
        return s < 0.0 ? Region::interior : Region::exterior;
    }

    /// Range of |x - c| over the closed box [lower, upper].
    std::pair<double, double> radius_range(const Point<dim>& lower, const Point<dim>& upper) const
    {
        const Point<dim> nearest = center_.cwiseMax(lower).cwiseMin(upper);
        Point<dim> farthest;
        for (int d = 0; d < dim; ++d) {
            farthest[d] = std::abs(center_[d] - lower[d]) > std::abs(center_[d] - upper[d]) ? lower[d]
                                                                                            : upper[d];
        }
        return {(nearest - center_).norm(), (farthest - center_).norm()};
    }

    /// Exact (min, max) of dist(x, Gamma) over the closed box.
    ///
    /// dist = | |x-c| - R | is convex in |x-c|, and |x-c| sweeps the whole
    /// interval returned by radius_range() on a connected box.
    std::pair<double, double> distance_range(const Point<dim>& lower, const Point<dim>& upper) const
    {
        const auto [rmin, rmax] = radius_range(lower, upper);
        const double dmin = (rmin <= radius_ && radius_ <= rmax) ? 0.0
                            : (radius_ < rmin)                   ? rmin - radius_
                                                                 : radius_ - rmax;
        const double dmax = std::max(std::abs(rmin - radius_), std::abs(rmax - radius_));
        return {dmin, dmax};
    }

    /// True when the closed box meets the interface.
    bool intersects(const Point<dim>& lower, const Point<dim>& upper) const
    {
        return distance_range(lower, upper).first == 0.0;
    }

private:
    // Range of |x - c| over the boundary of the unit box.
    std::pair<double, double> boundary_radius_range() const
    {
        const Point<dim> zero = Point<dim>::Zero();
        const Point<dim> one = Point<dim>::Ones();
        auto [rmin, rmax] = radius_range(zero, one);
        const bool inside = (center_.array() > 0.0).all() && (center_.array() < 1.0).all();
        if (inside) {
            rmin = std::min(center_.minCoeff(), (one - center_).minCoeff());
        }
        return {rmin, rmax};
    }

    Point<dim> center_;
    double radius_;
};

} // namespace ifem
