#pragma once

#include <vector>

#include "fcmcfl/geometry.hpp"

namespace fcmcfl {

/// Points and weights on the reference cube [-1,1]^dim.
struct QuadratureRule {
    int dim = 1;
    std::vector<Point> points;
    std::vector<double> weights;
    /// Highest polynomial degree per direction integrated exactly.
    int exactness = 0;

    [[nodiscard]] std::size_t size() const noexcept { return weights.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1]. Requires n >= 1.
[[nodiscard]] QuadratureRule gauss_legendre_1d(int n);

/// Gauss-Lobatto-Legendre rule on the p+1 GLL nodes. Requires p >= 1.
[[nodiscard]] QuadratureRule gll_rule_1d(int p);

/// Tensor product of a 1D rule, first coordinate fastest.
[[nodiscard]] QuadratureRule tensorize(const QuadratureRule& rule1d, int dim);

struct QuadraturePoint {
    Point xi;       // reference coordinates of the element
    double weight;  // reference measure, weights over the element sum to 2^dim
    double scale;   // indicator value: 1 inside, alpha outside
};

struct CutCellLeaf {
    Box bounds;  // in reference coordinates of the element
    int level = 0;
    std::vector<QuadraturePoint> points;  // tensor layout, first coordinate fastest
};

/// Adaptive space-tree quadrature of one element. Sub-cells whose corners and
/// center disagree about the domain are split until `depth` levels; every leaf
/// carries a tensor Gauss-Legendre rule with pointwise indicator values.
struct CutCellRule {
    int dim = 1;
    int depth = 0;
    int points_per_direction = 1;
    std::vector<CutCellLeaf> leaves;

    [[nodiscard]] bool single_leaf() const noexcept { return leaves.size() == 1; }
    /// True when every point carries the same scale.
    [[nodiscard]] bool uniform_scale() const noexcept;
    [[nodiscard]] std::size_t num_points() const noexcept;
    /// Sum of weight * scale, in reference measure.
    [[nodiscard]] double scaled_measure() const noexcept;
};

/// Builds the space-tree rule for the physical box `element`.
[[nodiscard]] CutCellRule cut_cell_rule(const Box& element, const ImplicitDomain& domain,
                                        int depth, int points_per_direction, double alpha);

}  // namespace fcmcfl
