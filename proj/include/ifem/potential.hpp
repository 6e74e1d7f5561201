#pragma once

#include "ifem/common.hpp"
#include "ifem/interface.hpp"
#include "ifem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace ifem {

/// Fundamental solution of -Laplace: -ln|r| / (2 pi) in 2D, 1 / (4 pi |r|) in 3D.
inline double green(int dim, double r)
{
    require(dim == 2 || dim == 3, "Green kernel dimension must be 2 or 3");
    require(r > 0.0, "Green kernel is singular at r = 0");
    if (dim == 2) {
        return -std::log(r) / (2.0 * std::numbers::pi);
    }
    return 1.0 / (4.0 * std::numbers::pi * r);
}

template <int dim>
double green(const Tensor1<dim>& r)
{
    return green(dim, r.norm());
}

template <int dim>
using DensityFunction = ScalarFunction<dim>;

inline constexpr int default_single_layer_points_2d = 512;
inline constexpr int default_single_layer_points_3d = 64;

/// Single layer potential p(x) = int_Gamma G(x - y) f(y) dGamma_y.
///
/// 2D uses the periodic trapezoidal rule with n_quad points. 3D uses n_quad
/// Gauss points in the polar angle times 2 n_quad trapezoidal points in the
/// azimuth.
template <int dim>
double single_layer(const SphereInterface<dim>& interface, const DensityFunction<dim>& f, const Point<dim>& x,
                    int n_quad)
{
    require(n_quad >= 8, "single layer needs at least 8 quadrature points");
    require(interface.distance(x) > 1e-8, "single layer evaluated too close to the interface");
    const Point<dim>& c = interface.center();
    const double radius = interface.radius();
    double sum = 0.0;
    if constexpr (dim == 2) {
        const double dt = 2.0 * std::numbers::pi / n_quad;
        for (int k = 0; k < n_quad; ++k) {
            const double t = dt * k;
            const Point<2> y = c + radius * Point<2>(std::cos(t), std::sin(t));
            sum += green<2>(x - y) * f(y);
        }
        sum *= radius * dt;
    } else {
        const QuadratureRule1D polar = gauss_legendre(static_cast<std::size_t>(n_quad));
        const int n_phi = 2 * n_quad;
        const double dphi = 2.0 * std::numbers::pi / n_phi;
        for (std::size_t i = 0; i < polar.points.size(); ++i) {
            const double theta = std::numbers::pi * polar.points[i];
            const double st = std::sin(theta);
            const double ct = std::cos(theta);
            const double w_theta = std::numbers::pi * polar.weights[i] * st;
            for (int j = 0; j < n_phi; ++j) {
                const double phi = dphi * j;
                const Point<3> y = c + radius * Point<3>(st * std::cos(phi), st * std::sin(phi), ct);
                sum += w_theta * dphi * green<3>(x - y) * f(y);
            }
        }
        sum *= radius * radius;
    }
    return sum;
}

template <int dim>
double single_layer(const SphereInterface<dim>& interface, const DensityFunction<dim>& f, const Point<dim>& x)
{
    return single_layer(interface, f, x, dim == 2 ? default_single_layer_points_2d : default_single_layer_points_3d);
}

/// Deterministic sample points on the interface (equispaced angles in 2D,
/// a latitude-longitude grid of roughly n points in 3D).
template <int dim>
std::vector<Point<dim>> interface_samples(const SphereInterface<dim>& interface, int n)
{
    std::vector<Point<dim>> ys;
    const Point<dim>& c = interface.center();
    const double radius = interface.radius();
    if constexpr (dim == 2) {
        for (int k = 0; k < n; ++k) {
            const double t = 2.0 * std::numbers::pi * (k + 0.5) / n;
            ys.push_back(c + radius * Point<2>(std::cos(t), std::sin(t)));
        }
    } else {
        const int n_theta = std::max(1, static_cast<int>(std::sqrt(0.5 * n)));
        const int n_phi = std::max(1, n / n_theta);
        for (int i = 0; i < n_theta; ++i) {
            const double theta = std::numbers::pi * (i + 0.5) / n_theta;
            for (int j = 0; j < n_phi; ++j) {
                const double phi = 2.0 * std::numbers::pi * (j + 0.5) / n_phi;
                ys.push_back(c + radius * Point<3>(std::sin(theta) * std::cos(phi),
                                                   std::sin(theta) * std::sin(phi), std::cos(theta)));
            }
        }
    }
    return ys;
}

/// max_y |(nu . grad u+)(y) - (nu . grad u-)(y) + f(y)| over sample points y.
///
/// One-sided normal derivatives come from central differences at distance
/// s and 2s from the interface on each side (step s), extrapolated linearly
/// to the interface so the O(s) offset cancels. Zero residual means the
/// flux jump equals -f, i.e. u solves (grad u, grad v) = <f, v>_Gamma.
template <int dim>
double jump_check(const SphereInterface<dim>& interface, const ScalarFunction<dim>& u,
                  const DensityFunction<dim>& f, int n_samples, double fd_step)
{
    require(fd_step > 0.0 && fd_step < interface.radius() / 10.0, "fd_step must lie in (0, R/10)");
    require(n_samples >= 1, "need at least one sample");
    const double s = fd_step;
    auto normal_derivative = [&](const Point<dim>& y, const Tensor1<dim>& nu, double offset) {
        const Point<dim> x = y + offset * nu;
        return (u(x + 0.5 * s * nu) - u(x - 0.5 * s * nu)) / s;
    };
    double worst = 0.0;
    for (const auto& y : interface_samples(interface, n_samples)) {
        const Tensor1<dim> nu = interface.normal(y);
        const double plus = 2.0 * normal_derivative(y, nu, s) - normal_derivative(y, nu, 2.0 * s);
        const double minus = 2.0 * normal_derivative(y, nu, -s) - normal_derivative(y, nu, -2.0 * s);
        worst = std::max(worst, std::abs(plus - minus + f(y)));
    }
    return worst;
}

} // namespace ifem
