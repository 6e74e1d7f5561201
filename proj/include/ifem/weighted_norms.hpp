#pragma once

#include "ifem/common.hpp"
#include "ifem/fe_space.hpp"
#include "ifem/interface.hpp"
#include "ifem/mesh.hpp"
#include "ifem/quadrature.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ifem {

/// Piecewise-smooth reference solution with its gradient.
template <int dim>
struct ExactSolution {
    std::function<double(const Point<dim>&)> value;
    std::function<Tensor1<dim>(const Point<dim>&)> gradient;
};

/// Harmonic solution with a kink on the sphere: the free-space Green
/// potential outside (-ln|r| in 2D, 1/|r| in 3D), its trace constant inside.
template <int dim>
ExactSolution<dim> kinked_potential(const SphereInterface<dim>& interface)
{
    const Point<dim> c = interface.center();
    const double radius = interface.radius();
    ExactSolution<dim> u;
    u.value = [c, radius](const Point<dim>& x) {
        const double r = std::max((x - c).norm(), radius);
        if constexpr (dim == 2) {
            return -std::log(r);
        } else {
            return 1.0 / r;
        }
    };
    u.gradient = [c, radius](const Point<dim>& x) -> Tensor1<dim> {
        const Tensor1<dim> r = x - c;
        const double len = r.norm();
        if (len <= radius) {
            return Tensor1<dim>::Zero();
        }
        if constexpr (dim == 2) {
            return -r / (len * len);
        } else {
            return -r / (len * len * len);
        }
    };
    return u;
}

/// Layer density that produces kinked_potential: 1/R (2D), 1/R^2 (3D).
template <int dim>
double kinked_potential_density(const SphereInterface<dim>& interface)
{
    return 1.0 / std::pow(interface.radius(), dim - 1);
}

/// Quadrature used when integrating errors: base tensor rule, and the
/// bisection depth applied to cells that meet the interface.
struct ErrorQuadrature {
    std::size_t points_per_axis = 4;
    int cut_depth = 6;
};

struct WeightedNormParams {
    double alpha = 0.0;
    int m = 0; // 0: L2_alpha norm, 1: H1_alpha seminorm
    ErrorQuadrature quadrature;
};

inline void check_alpha(double alpha)
{
    require(alpha > -0.5 && alpha < 0.5, "weight exponent alpha must lie in (-1/2, 1/2)");
}

/// d^{2 alpha} with the convention d^0 = 1.
inline double distance_weight(double d, double alpha)
{
    if (alpha == 0.0) {
        return 1.0;
    }
    return d > 0.0 ? std::pow(d, 2.0 * alpha) : 0.0;
}

/// Value and gradient of the integrand field at one quadrature point.
template <int dim>
struct FieldSample {
    double value = 0.0;
    Tensor1<dim> gradient = Tensor1<dim>::Zero();
};

/// Squared weighted integrals, one entry per alpha.
struct WeightedSums {
    std::vector<double> value_sq;    // int |e|^2 d^{2a}
    std::vector<double> gradient_sq; // int |grad e|^2 d^{2a}
};

/// Integrates |e|^2 d^{2 alpha} and |grad e|^2 d^{2 alpha} over the unit box for
/// several alphas in one sweep. Cells meeting the interface are bisected
/// with split_cut_cell().
///
/// `field(cell, x, shape)` returns the sample at physical point x, where
/// `shape` holds the space's shape functions at x on that cell.
template <int dim, typename Field>
WeightedSums integrate_weighted(const FeSpace<dim>& space, const SphereInterface<dim>& interface,
                                std::span<const double> alphas, const ErrorQuadrature& config, Field&& field)
{
    for (const double a : alphas) {
        check_alpha(a);
    }
    const auto& mesh = space.mesh();
    const CellQuadrature<dim> base = gauss_rule<dim>(config.points_per_axis);
    std::vector<ShapeValues<dim>> base_shapes;
    base_shapes.reserve(base.size());
    for (const auto& p : base.ref_points) {
        base_shapes.push_back(shape_eval<dim>(space.degree(), p));
    }
    const double cell_volume = std::pow(mesh.cell_width(), dim);
    const std::size_t n_alpha = alphas.size();
    WeightedSums sums{std::vector<double>(n_alpha, 0.0), std::vector<double>(n_alpha, 0.0)};
    std::vector<double> cell_v(n_alpha);
    std::vector<double> cell_g(n_alpha);

    auto accumulate = [&](CellId c, const Point<dim>& ref, double weight, const ShapeValues<dim>& shape) {
        const Point<dim> x = mesh.map_to_cell(c, ref);
        const FieldSample<dim> s = field(c, x, shape);
        const double v2 = s.value * s.value;
        const double g2 = s.gradient.squaredNorm();
        const double d = interface.distance(x);
        for (std::size_t k = 0; k < n_alpha; ++k) {
            const double w = weight * distance_weight(d, alphas[k]);
            cell_v[k] += w * v2;
            cell_g[k] += w * g2;
        }
    };

    for (CellId c = 0; c < mesh.n_cells(); ++c) {
        std::fill(cell_v.begin(), cell_v.end(), 0.0);
        std::fill(cell_g.begin(), cell_g.end(), 0.0);
        const Point<dim> lo = mesh.cell_lower(c);
        if (!interface.intersects(lo, mesh.cell_upper(c))) {
            for (std::size_t q = 0; q < base.size(); ++q) {
                accumulate(c, base.ref_points[q], base.weights[q], base_shapes[q]);
            }
        } else {
            const auto split = split_cut_cell<dim>(lo, mesh.cell_width(), interface, base, config.cut_depth);
            for (const auto& leaf : split.leaves) {
                const double vol = std::pow(leaf.width, dim);
                for (std::size_t q = 0; q < base.size(); ++q) {
                    const Point<dim> ref = leaf.lower + leaf.width * base.ref_points[q];
                    accumulate(c, ref, vol * base.weights[q], shape_eval<dim>(space.degree(), ref));
                }
            }
        }
        for (std::size_t k = 0; k < n_alpha; ++k) {
            sums.value_sq[k] += cell_volume * cell_v[k];
            sums.gradient_sq[k] += cell_volume * cell_g[k];
        }
    }
    return sums;
}

/// Sample of u - u_h at a point, with the exact solution evaluated on the
/// side of the interface the point lies on.
template <int dim>
auto error_field(const FeSpace<dim>& space, const Vector& coeffs, const ExactSolution<dim>& exact)
{
    return [&space, &coeffs, &exact](CellId c, const Point<dim>& x, const ShapeValues<dim>& shape) {
        const auto dofs = space.cell_dofs(c);
        double uh = 0.0;
        Tensor1<dim> grad_uh = Tensor1<dim>::Zero();
        for (std::size_t i = 0; i < dofs.size(); ++i) {
            const double ci = coeffs[static_cast<Eigen::Index>(dofs[i])];
            const auto row = static_cast<Eigen::Index>(i);
            uh += ci * shape.values[row];
            grad_uh += ci * shape.gradients.row(row).transpose();
        }
        grad_uh /= space.mesh().cell_width();
        return FieldSample<dim>{exact.value(x) - uh, exact.gradient(x) - grad_uh};
    };
}

/// Weighted errors of one discrete solution for a list of alphas.
struct WeightedErrors {
    std::vector<double> alphas;
    std::vector<double> l2;      // ||u - u_h||_{0,alpha}
    std::vector<double> h1_semi; // |u - u_h|_{1,alpha}
    std::vector<double> h1_full; // ||u - u_h||_{1,alpha}
};

template <int dim>
WeightedErrors weighted_errors(const FeSpace<dim>& space, const Vector& coeffs, const ExactSolution<dim>& exact,
                               const SphereInterface<dim>& interface, std::span<const double> alphas,
                               const ErrorQuadrature& config)
{
    require(coeffs.size() == static_cast<Eigen::Index>(space.n_dofs()), "coefficient vector size mismatch");
    const WeightedSums sums =
        integrate_weighted(space, interface, alphas, config, error_field(space, coeffs, exact));
    WeightedErrors out;
    out.alphas.assign(alphas.begin(), alphas.end());
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        out.l2.push_back(std::sqrt(sums.value_sq[k]));
        out.h1_semi.push_back(std::sqrt(sums.gradient_sq[k]));
        out.h1_full.push_back(std::sqrt(sums.value_sq[k] + sums.gradient_sq[k]));
    }
    return out;
}

/// (sum_K int_K |D^m (u - u_h)|^2 d^{2 alpha})^{1/2}, D^1 the gradient (seminorm).
template <int dim>
double weighted_error(const FeSpace<dim>& space, const Vector& coeffs, const ExactSolution<dim>& exact,
                      const SphereInterface<dim>& interface, const WeightedNormParams& params)
{
    require(params.m == 0 || params.m == 1, "derivative order m must be 0 or 1");
    const double alpha[1] = {params.alpha};
    const auto e = weighted_errors(space, coeffs, exact, interface, alpha, params.quadrature);
    return params.m == 0 ? e.l2.front() : e.h1_semi.front();
}

/// int_Omega d(x)^{2 alpha} dx.
template <int dim>
double weight_integral(const SphereInterface<dim>& interface, double alpha, const Mesh<dim>& mesh,
                       const ErrorQuadrature& config)
{
    const FeSpace<dim> space(mesh, 1);
    const double a[1] = {alpha};
    const auto sums = integrate_weighted(space, interface, a, config,
                                         [](CellId, const Point<dim>&, const ShapeValues<dim>&) {
                                             return FieldSample<dim>{1.0, Tensor1<dim>::Zero()};
                                         });
    return sums.value_sq.front();
}

/// ||u_h||_{h,alpha}^2 = sum_K (max_K d)^{2 alpha} ||u_h||_{0,K}^2.
template <int dim>
double discrete_norm(const FeSpace<dim>& space, const Vector& coeffs, const CellClassification& classification,
                     double alpha, std::size_t points_per_axis = 0)
{
    check_alpha(alpha);
    const auto& mesh = space.mesh();
    require(classification.d_max.size() == mesh.n_cells(), "classification belongs to another mesh");
    require(coeffs.size() == static_cast<Eigen::Index>(space.n_dofs()), "coefficient vector size mismatch");
    if (points_per_axis == 0) {
        points_per_axis = static_cast<std::size_t>(space.degree()) + 3;
    }
    const CellQuadrature<dim> rule = gauss_rule<dim>(points_per_axis);
    std::vector<Eigen::VectorXd> shapes;
    for (const auto& p : rule.ref_points) {
        shapes.push_back(shape_eval<dim>(space.degree(), p).values);
    }
    const double cell_volume = std::pow(mesh.cell_width(), dim);
    double total = 0.0;
    for (CellId c = 0; c < mesh.n_cells(); ++c) {
        const double weight = distance_weight(classification.d_max[c], alpha);
        if (weight == 0.0) {
            continue;
        }
        const auto dofs = space.cell_dofs(c);
        double local = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            double uh = 0.0;
            for (std::size_t i = 0; i < dofs.size(); ++i) {
                uh += coeffs[static_cast<Eigen::Index>(dofs[i])] * shapes[q][static_cast<Eigen::Index>(i)];
            }
            local += rule.weights[q] * uh * uh;
        }
        total += weight * cell_volume * local;
    }
    return std::sqrt(total);
}

/// Empirical orders log2(e_{k-1} / e_k) for a sequence of halving mesh sizes.
/// Rates involving a zero error are absent.
inline std::vector<std::optional<double>> eoc(std::span<const std::pair<double, double>> errors)
{
    std::vector<std::optional<double>> rates;
    for (std::size_t k = 1; k < errors.size(); ++k) {
        const double ratio = errors[k - 1].first / errors[k].first;
        require(std::abs(ratio - 2.0) <= 1e-10, "mesh sizes must halve between consecutive levels");
        const double e0 = errors[k - 1].second;
        const double e1 = errors[k].second;
        if (e0 > 0.0 && e1 > 0.0) {
            rates.emplace_back(std::log2(e0 / e1));
        } else {
            rates.emplace_back(std::nullopt);
        }
    }
    return rates;
}

} // namespace ifem
