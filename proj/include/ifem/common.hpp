#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace ifem {

template <int dim>
using Point = Eigen::Matrix<double, dim, 1>;

template <int dim>
using Tensor1 = Eigen::Matrix<double, dim, 1>;

using Vector = Eigen::VectorXd;

/// Pointwise scalar field. The dimension is not deduced from this parameter,
/// so lambdas bind directly.
template <int dim>
using ScalarFunction = std::type_identity_t<std::function<double(const Point<dim>&)>>;

using CellId = std::size_t;
using DofId = std::size_t;

/// Thrown for violated preconditions on user-supplied data.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an algorithm cannot produce a result (e.g. an orphan quadrature point).
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message)
{
    if (!condition) {
        throw InvalidArgument(message);
    }
}

template <int dim>
constexpr std::size_t ipow(std::size_t base)
{
    std::size_t r = 1;
    for (int d = 0; d < dim; ++d) {
        r *= base;
    }
    return r;
}

} // namespace ifem
