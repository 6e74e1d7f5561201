#pragma once

#include "ifem/common.hpp"
#include "ifem/interface.hpp"
#include "ifem/mesh.hpp"
#include "ifem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace ifem {

/// Surface quadrature on the interface, split so that every point belongs to
/// a known cell of the background mesh.
template <int dim>
struct InterfaceQuadrature {
    std::vector<Point<dim>> points;
    std::vector<double> weights;
    std::vector<CellId> owner_cell;

    std::size_t size() const { return weights.size(); }

    double total_weight() const
    {
        double s = 0.0;
        for (const double w : weights) {
            s += w;
        }
        return s;
    }

    /// Sum of weights per cell, i.e. |K cap Gamma| for every cell K.
    std::vector<double> measure_per_cell(std::size_t n_cells) const
    {
        std::vector<double> m(n_cells, 0.0);
        for (std::size_t q = 0; q < size(); ++q) {
            m[owner_cell[q]] += weights[q];
        }
        return m;
    }
};

namespace detail {

inline std::vector<double> circle_breakpoints(const Point<2>& c, double radius, std::size_t n_c)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> angles;
    auto wrap = [](double t) {
        t = std::fmod(t, two_pi);
        return t < 0.0 ? t + two_pi : t;
    };
    for (std::size_t i = 0; i <= n_c; ++i) {
        const double line = static_cast<double>(i) / static_cast<double>(n_c);
        const double a = (line - c[0]) / radius;
        if (std::abs(a) <= 1.0) {
            angles.push_back(wrap(std::acos(a)));
            angles.push_back(wrap(two_pi - std::acos(a)));
        }
        const double b = (line - c[1]) / radius;
        if (std::abs(b) <= 1.0) {
            angles.push_back(wrap(std::asin(b)));
            angles.push_back(wrap(std::numbers::pi - std::asin(b)));
        }
    }
    std::sort(angles.begin(), angles.end());
    std::vector<double> unique;
    for (const double t : angles) {
        if (unique.empty() || t - unique.back() > 1e-14) {
            unique.push_back(t);
        }
    }
    if (unique.size() > 1 && unique.front() + two_pi - unique.back() <= 1e-14) {
        unique.pop_back();
    }
    return unique;
}

inline std::pair<double, double> product_range(double a0, double a1, double b0, double b1)
{
    const double p[4] = {a0 * b0, a0 * b1, a1 * b0, a1 * b1};
    return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

struct ParamPatch {
    double theta0, theta1, phi0, phi1;
    int depth;
};

// Exact bounding box of the sphere patch [theta0,theta1] x [phi0,phi1].
inline std::pair<Point<3>, Point<3>> patch_bounds(const Point<3>& c, double radius, const ParamPatch& p)
{
    constexpr double pi = std::numbers::pi;
    auto contains = [](double lo, double hi, double t) { return lo <= t && t <= hi; };

    const double s_lo = std::min(std::sin(p.theta0), std::sin(p.theta1));
    const double s_hi = contains(p.theta0, p.theta1, 0.5 * pi) ? 1.0 : std::max(std::sin(p.theta0), std::sin(p.theta1));
    const double z_lo = std::cos(p.theta1);
    const double z_hi = std::cos(p.theta0);

    const double cphi_lo = contains(p.phi0, p.phi1, pi) ? -1.0 : std::min(std::cos(p.phi0), std::cos(p.phi1));
    const double cphi_hi = (p.phi0 <= 0.0 || p.phi1 >= 2.0 * pi) ? 1.0 : std::max(std::cos(p.phi0), std::cos(p.phi1));
    const double sphi_lo =
        contains(p.phi0, p.phi1, 1.5 * pi) ? -1.0 : std::min(std::sin(p.phi0), std::sin(p.phi1));
    const double sphi_hi =
        contains(p.phi0, p.phi1, 0.5 * pi) ? 1.0 : std::max(std::sin(p.phi0), std::sin(p.phi1));

    const auto [x_lo, x_hi] = product_range(s_lo, s_hi, cphi_lo, cphi_hi);
    const auto [y_lo, y_hi] = product_range(s_lo, s_hi, sphi_lo, sphi_hi);

    Point<3> lo(x_lo, y_lo, z_lo);
    Point<3> hi(x_hi, y_hi, z_hi);
    return {c + radius * lo, c + radius * hi};
}

inline bool box_in_single_cell(const Point<3>& lo, const Point<3>& hi, std::size_t n_c)
{
    const double n = static_cast<double>(n_c);
    for (int d = 0; d < 3; ++d) {
        if (std::floor(lo[d] * n) != std::floor(hi[d] * n)) {
            return false;
        }
    }
    return true;
}

} // namespace detail

inline constexpr int default_interface_order = 4;
inline constexpr int default_patch_depth = 12;

/// Interface quadrature split at cell boundaries.
///
/// 2D: exact arcs between consecutive grid-line crossings, `order` Gauss
/// points per arc. 3D: recursive bisection of the (theta, phi) rectangle until
/// a patch's bounding box fits one cell or `max_depth` is reached, then an
/// order x order Gauss rule with the exact Jacobian R^2 sin(theta).
template <int dim>
InterfaceQuadrature<dim> immersed_quadrature(const SphereInterface<dim>& interface, const Mesh<dim>& mesh,
                                             int order = default_interface_order,
                                             int max_depth = default_patch_depth)
{
    require(order >= 1, "interface quadrature order must be at least 1");
    const QuadratureRule1D line = gauss_legendre(static_cast<std::size_t>(order));
    const Point<dim>& c = interface.center();
    const double radius = interface.radius();
    InterfaceQuadrature<dim> quad;

    if constexpr (dim == 2) {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        std::vector<double> breaks = detail::circle_breakpoints(c, radius, mesh.cells_per_axis());
        if (breaks.empty()) {
            breaks.push_back(0.0);
        }
        for (std::size_t k = 0; k < breaks.size(); ++k) {
            const double t0 = breaks[k];
            const double t1 = (k + 1 < breaks.size()) ? breaks[k + 1] : breaks.front() + two_pi;
            const double span = t1 - t0;
            const double tm = 0.5 * (t0 + t1);
            const CellId owner = mesh.locate(c + radius * Point<2>(std::cos(tm), std::sin(tm)));
            for (std::size_t q = 0; q < line.points.size(); ++q) {
                const double t = t0 + span * line.points[q];
                const Point<2> y = c + radius * Point<2>(std::cos(t), std::sin(t));
                if (!mesh.contains(owner, y)) {
                    throw ComputationError("interface quadrature point outside its owner cell");
                }
                quad.points.push_back(y);
                quad.weights.push_back(radius * span * line.weights[q]);
                quad.owner_cell.push_back(owner);
            }
        }
    } else {
        constexpr double pi = std::numbers::pi;
        std::vector<detail::ParamPatch> stack{{0.0, pi, 0.0, 2.0 * pi, 0}};
        std::vector<detail::ParamPatch> leaves;
        // depth-first in parametric order
        while (!stack.empty()) {
            const detail::ParamPatch p = stack.back();
            stack.pop_back();
            const auto [lo, hi] = detail::patch_bounds(c, radius, p);
            if (p.depth >= max_depth || detail::box_in_single_cell(lo, hi, mesh.cells_per_axis())) {
                leaves.push_back(p);
                continue;
            }
            const double tm = 0.5 * (p.theta0 + p.theta1);
            const double pm = 0.5 * (p.phi0 + p.phi1);
            const int d = p.depth + 1;
            stack.push_back({tm, p.theta1, pm, p.phi1, d});
            stack.push_back({p.theta0, tm, pm, p.phi1, d});
            stack.push_back({tm, p.theta1, p.phi0, pm, d});
            stack.push_back({p.theta0, tm, p.phi0, pm, d});
        }
        // Patches stopped by the depth limit still straddle a cell face; the
        // FE trace is only piecewise smooth there, so they get the midpoint.
        const QuadratureRule1D midpoint = gauss_legendre(1);
        for (const auto& p : leaves) {
            const QuadratureRule1D& rule = (p.depth >= max_depth && max_depth > 0) ? midpoint : line;
            const std::size_t nq = rule.points.size();
            const double dt = p.theta1 - p.theta0;
            const double dp = p.phi1 - p.phi0;
            for (std::size_t i = 0; i < nq; ++i) {
                const double theta = p.theta0 + dt * rule.points[i];
                const double st = std::sin(theta);
                const double ct = std::cos(theta);
                for (std::size_t j = 0; j < nq; ++j) {
                    const double phi = p.phi0 + dp * rule.points[j];
                    const Point<3> y = c + radius * Point<3>(st * std::cos(phi), st * std::sin(phi), ct);
                    quad.points.push_back(y);
                    quad.weights.push_back(radius * radius * st * dt * dp * rule.weights[i] * rule.weights[j]);
                    quad.owner_cell.push_back(mesh.locate(y));
                }
            }
        }
    }
    return quad;
}

} // namespace ifem
