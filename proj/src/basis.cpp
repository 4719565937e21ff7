#include "fcmcfl/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fcmcfl {

double legendre(int n, double x) {
    if (n < 0) throw std::invalid_argument("legendre: negative degree");
    if (n == 0) return 1.0;
    double p_prev = 1.0;
    double p_curr = x;
    for (int k = 1; k < n; ++k) {
        const double p_next = ((2.0 * k + 1.0) * x * p_curr - k * p_prev) / (k + 1.0);
        p_prev = p_curr;
        p_curr = p_next;
    }
    return p_curr;
}

namespace {

// P_n, P_n' and P_n'' at an interior point |x| < 1.
struct LegendreJet {
    double value;
    double first;
    double second;
};

LegendreJet legendre_jet(int n, double x) {
    const double pn = legendre(n, x);
    const double pn1 = legendre(n - 1, x);
    const double one_minus_x2 = 1.0 - x * x;
    const double first = n * (pn1 - x * pn) / one_minus_x2;
    const double second = (2.0 * x * first - n * (n + 1.0) * pn) / one_minus_x2;
    return {pn, first, second};
}

}  // namespace

std::vector<double> gll_nodes(int p) {
    if (p < 1) throw std::invalid_argument("gll_nodes: degree must be >= 1, got " + std::to_string(p));

    std::vector<double> nodes(p + 1);
    nodes.front() = -1.0;
    nodes.back() = 1.0;
    for (int j = 1; j < p; ++j) {
        double x = -std::cos(std::numbers::pi * j / p);
        for (int it = 0; it < 100; ++it) {
            const LegendreJet jet = legendre_jet(p, x);
            const double dx = jet.first / jet.second;
            x -= dx;
            if (std::abs(dx) < 1e-16 || std::abs(legendre_jet(p, x).first) < 1e-15) break;
        }
        nodes[j] = x;
    }
    for (int j = 0; j < (p + 1) / 2; ++j) {
        const double half = 0.5 * (nodes[p - j] - nodes[j]);
        nodes[j] = -half;
        nodes[p - j] = half;
    }
    if (p % 2 == 0) nodes[p / 2] = 0.0;
    return nodes;
}

NodalBasis1D::NodalBasis1D(int degree) : degree_(degree), nodes_(gll_nodes(degree)) {
    inv_denominators_.resize(nodes_.size());
    for (int i = 0; i <= degree_; ++i) {
        double den = 1.0;
        for (int j = 0; j <= degree_; ++j)
            if (j != i) den *= nodes_[i] - nodes_[j];
        inv_denominators_[i] = 1.0 / den;
    }
    left_offsets_.reserve(nodes_.size());
    for (double x : nodes_) left_offsets_.push_back(x + 1.0);
}

void NodalBasis1D::evaluate_shifted(double x, const std::vector<double>& nodes, std::span<double> values,
                                    std::span<double> derivatives) const {
    const int n = size();
    for (int i = 0; i < n; ++i) {
        double value = 1.0;
        double derivative = 0.0;
        for (int m = 0; m < n; ++m) {
            if (m == i) continue;
            value *= x - nodes[m];
            double term = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i && j != m) term *= x - nodes[j];
            derivative += term;
        }
        values[i] = value * inv_denominators_[i];
        derivatives[i] = derivative * inv_denominators_[i];
    }
}

void NodalBasis1D::evaluate(double xi, std::span<double> values, std::span<double> derivatives) const {
    evaluate_shifted(xi, nodes_, values, derivatives);
}

void NodalBasis1D::evaluate_from_left(double s, std::span<double> values, std::span<double> derivatives) const {
    evaluate_shifted(s, left_offsets_, values, derivatives);
}

NodalBasis1D::Evaluation NodalBasis1D::lagrange_all(double xi) const {
    Evaluation out{std::vector<double>(size()), std::vector<double>(size())};
    evaluate(xi, out.values, out.derivatives);
    return out;
}

TensorBasis::TensorBasis(int dim, int degree) : dim_(dim), basis1d_(degree), size_(1) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("TensorBasis: dimension must be 1, 2 or 3");
    for (int k = 0; k < dim_; ++k) size_ *= basis1d_.size();
}

int TensorBasis::flat_index(std::span<const int> multi) const {
    int flat = 0;
    int stride = 1;
    for (int k = 0; k < dim_; ++k) {
        flat += multi[k] * stride;
        stride *= basis1d_.size();
    }
    return flat;
}

std::vector<int> TensorBasis::multi_index(int flat) const {
    std::vector<int> multi(dim_);
    for (int k = 0; k < dim_; ++k) {
        multi[k] = flat % basis1d_.size();
        flat /= basis1d_.size();
    }
    return multi;
}

TensorBasis::Evaluation TensorBasis::evaluate(const Point& x) const {
    const int n = basis1d_.size();
    std::vector<double> v1(static_cast<std::size_t>(n) * dim_);
    std::vector<double> d1(static_cast<std::size_t>(n) * dim_);
    for (int k = 0; k < dim_; ++k)
        basis1d_.evaluate(x[k], std::span(v1).subspan(k * n, n), std::span(d1).subspan(k * n, n));

    Evaluation out{std::vector<double>(size_, 1.0), std::vector<double>(static_cast<std::size_t>(size_) * dim_, 1.0)};
    for (int flat = 0; flat < size_; ++flat) {
        int rest = flat;
        for (int k = 0; k < dim_; ++k) {
            const int ik = rest % n;
            rest /= n;
            out.values[flat] *= v1[k * n + ik];
            for (int g = 0; g < dim_; ++g)
                out.gradients[flat * dim_ + g] *= (g == k ? d1[k * n + ik] : v1[k * n + ik]);
        }
    }
    return out;
}

}  // namespace fcmcfl
