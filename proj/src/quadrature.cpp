#include "fcmcfl/quadrature.hpp"

#include <cmath>
#include <optional>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fcmcfl/basis.hpp"

namespace fcmcfl {

QuadratureRule gauss_legendre_1d(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_1d: need at least one point, got " + std::to_string(n));

    QuadratureRule rule;
    rule.dim = 1;
    rule.exactness = 2 * n - 1;
    rule.points.assign(n, Point{0.0, 0.0, 0.0});
    rule.weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            const double pn = legendre(n, x);
            const double pn1 = legendre(n - 1, x);
            dp = n * (pn1 - x * pn) / (1.0 - x * x);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double pn1 = legendre(n - 1, x);
        dp = n * (pn1 - x * legendre(n, x)) / (1.0 - x * x);
        rule.points[i][0] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    for (int i = 0; i < n / 2; ++i) {
        const double x = 0.5 * (rule.points[n - 1 - i][0] - rule.points[i][0]);
        const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
        rule.points[i][0] = -x;
        rule.points[n - 1 - i][0] = x;
        rule.weights[i] = rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.points[n / 2][0] = 0.0;
    return rule;
}

QuadratureRule gll_rule_1d(int p) {
    if (p < 1) throw std::invalid_argument("gll_rule_1d: degree must be >= 1, got " + std::to_string(p));

    const std::vector<double> nodes = gll_nodes(p);
    QuadratureRule rule;
    rule.dim = 1;
    rule.exactness = 2 * p - 1;
    for (double x : nodes) {
        const double pp = legendre(p, x);
        rule.points.push_back({x, 0.0, 0.0});
        rule.weights.push_back(2.0 / (p * (p + 1.0) * pp * pp));
    }
    return rule;
}

QuadratureRule tensorize(const QuadratureRule& rule1d, int dim) {
    if (rule1d.dim != 1) throw std::invalid_argument("tensorize: input rule must be one-dimensional");
    if (dim < 1 || dim > 3) throw std::invalid_argument("tensorize: dimension must be 1, 2 or 3");

    const std::size_t n = rule1d.size();
    std::size_t total = 1;
    for (int k = 0; k < dim; ++k) total *= n;

    QuadratureRule rule;
    rule.dim = dim;
    rule.exactness = rule1d.exactness;
    rule.points.reserve(total);
    rule.weights.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Point x{0.0, 0.0, 0.0};
        double w = 1.0;
        std::size_t rest = flat;
        for (int k = 0; k < dim; ++k) {
            const std::size_t ik = rest % n;
            rest /= n;
            x[k] = rule1d.points[ik][0];
            w *= rule1d.weights[ik];
        }
        rule.points.push_back(x);
        rule.weights.push_back(w);
    }
    return rule;
}

bool CutCellRule::uniform_scale() const noexcept {
    if (leaves.empty() || leaves.front().points.empty()) return true;
    const double first = leaves.front().points.front().scale;
    for (const auto& leaf : leaves)
        for (const auto& q : leaf.points)
            if (q.scale != first) return false;
    return true;
}

std::size_t CutCellRule::num_points() const noexcept {
    std::size_t n = 0;
    for (const auto& leaf : leaves) n += leaf.points.size();
    return n;
}

double CutCellRule::scaled_measure() const noexcept {
    double sum = 0.0;
    for (const auto& leaf : leaves)
        for (const auto& q : leaf.points) sum += q.weight * q.scale;
    return sum;
}

namespace {

class SpaceTreeBuilder {
public:
    SpaceTreeBuilder(const Box& element, const ImplicitDomain& domain, int depth, int n1d, double alpha)
        : element_(element), domain_(domain), depth_(depth), alpha_(alpha),
          leaf_rule_(tensorize(gauss_legendre_1d(n1d), element.dim)) {}

    void build(const Box& cell, int level, std::vector<CutCellLeaf>& leaves) const {
        if (level < depth_ && is_cut(cell)) {
            const unsigned children = 1u << element_.dim;
            const Point mid = cell.center();
            for (unsigned mask = 0; mask < children; ++mask) {
                Box child;
                child.dim = cell.dim;
                for (int k = 0; k < cell.dim; ++k) {
                    const bool up = (mask >> k) & 1u;
                    child.lower[k] = up ? mid[k] : cell.lower[k];
                    child.upper[k] = up ? cell.upper[k] : mid[k];
                }
                build(child, level + 1, leaves);
            }
            return;
        }
        leaves.push_back(make_leaf(cell, level));
    }

private:
    bool inside_at(const Point& xi) const { return domain_.inside(element_.map_from_reference(xi)); }

    bool is_cut(const Box& cell) const {
        Box physical;
        physical.dim = cell.dim;
        physical.lower = element_.map_from_reference(cell.lower);
        physical.upper = element_.map_from_reference(cell.upper);
        if (const std::optional<bool> exact = domain_.boundary_crosses(physical)) return *exact;
        const bool reference = inside_at(cell.center());
        for (unsigned mask = 0; mask < (1u << cell.dim); ++mask)
            if (inside_at(cell.corner(mask)) != reference) return true;
        return false;
    }

    CutCellLeaf make_leaf(const Box& cell, int level) const {
        CutCellLeaf leaf;
        leaf.bounds = cell;
        leaf.level = level;
        const double jacobian = cell.volume() / std::pow(2.0, cell.dim);
        leaf.points.reserve(leaf_rule_.size());
        for (std::size_t q = 0; q < leaf_rule_.size(); ++q) {
            const Point xi = cell.map_from_reference(leaf_rule_.points[q]);
            leaf.points.push_back({xi, leaf_rule_.weights[q] * jacobian, inside_at(xi) ? 1.0 : alpha_});
        }
        return leaf;
    }

    const Box& element_;
    const ImplicitDomain& domain_;
    int depth_;
    double alpha_;
    QuadratureRule leaf_rule_;
};

}  // namespace

CutCellRule cut_cell_rule(const Box& element, const ImplicitDomain& domain, int depth,
                          int points_per_direction, double alpha) {
    if (depth < 0) throw std::invalid_argument("cut_cell_rule: depth must be >= 0");
    if (points_per_direction < 1) throw std::invalid_argument("cut_cell_rule: need at least one point per direction");
    if (element.dim != domain.dimension())
        throw std::invalid_argument("cut_cell_rule: element and domain dimensions differ");

    CutCellRule rule;
    rule.dim = element.dim;
    rule.depth = depth;
    rule.points_per_direction = points_per_direction;
    SpaceTreeBuilder(element, domain, depth, points_per_direction, alpha)
        .build(Box::reference_cube(element.dim), 0, rule.leaves);
    return rule;
}

}  // namespace fcmcfl
