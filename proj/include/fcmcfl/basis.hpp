#pragma once

#include <span>
#include <vector>

#include "fcmcfl/geometry.hpp"

namespace fcmcfl {

/// Legendre polynomial P_n(x) by the three-term recurrence.
[[nodiscard]] double legendre(int n, double x);

/// Gauss-Lobatto-Legendre nodes on [-1, 1]: the endpoints plus the roots of
/// P_p'. Strictly increasing, exactly symmetric. Requires p >= 1.
[[nodiscard]] std::vector<double> gll_nodes(int p);

/// Lagrange polynomials interpolating the GLL nodes of degree p.
class NodalBasis1D {
public:
    explicit NodalBasis1D(int degree);

    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] int size() const noexcept { return degree_ + 1; }
    [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }

    /// Values and first derivatives of all p+1 polynomials at xi. Both spans
    /// must hold size() entries.
    void evaluate(double xi, std::span<double> values, std::span<double> derivatives) const;
    /// Same at xi = -1 + s, without forming xi: keeps full relative accuracy
    /// near the left end.
    void evaluate_from_left(double s, std::span<double> values, std::span<double> derivatives) const;

    struct Evaluation {
        std::vector<double> values;
        std::vector<double> derivatives;
    };
    [[nodiscard]] Evaluation lagrange_all(double xi) const;

private:
    int degree_;
    std::vector<double> nodes_;
    std::vector<double> inv_denominators_;  // 1 / prod_{j != i} (x_i - x_j)
    std::vector<double> left_offsets_;      // x_i + 1

    void evaluate_shifted(double x, const std::vector<double>& nodes, std::span<double> values,
                          std::span<double> derivatives) const;
};

/// Tensor-product Lagrange basis on [-1,1]^d. Flat index is lexicographic
/// with the first coordinate running fastest.
class TensorBasis {
public:
    TensorBasis(int dim, int degree);

    [[nodiscard]] int dimension() const noexcept { return dim_; }
    [[nodiscard]] int degree() const noexcept { return basis1d_.degree(); }
    [[nodiscard]] int size() const noexcept { return size_; }
    [[nodiscard]] const NodalBasis1D& basis1d() const noexcept { return basis1d_; }

    [[nodiscard]] int flat_index(std::span<const int> multi) const;
    [[nodiscard]] std::vector<int> multi_index(int flat) const;

    struct Evaluation {
        std::vector<double> values;     // size()
        std::vector<double> gradients;  // size() x dim, row-major
    };
    /// Reference-coordinate values and gradients at x.
    [[nodiscard]] Evaluation evaluate(const Point& x) const;

private:
    int dim_;
    NodalBasis1D basis1d_;
    int size_;
};

}  // namespace fcmcfl
