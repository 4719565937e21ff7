#include "fcmcfl/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fcmcfl/eigensolvers.hpp"

namespace fcmcfl::analytic {

namespace {

void check_dim(int dim) {
    if (dim < 1) throw std::invalid_argument("analytic: dimension must be >= 1");
}

void check_unit(double value, const char* what) {
    if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument(std::string("analytic: ") + what + " outside [0, 1]");
}

}  // namespace

SingleDofResult single_dof(double chi, double alpha, int dim) {
    check_dim(dim);
    check_unit(chi, "chi");
    check_unit(alpha, "alpha");
    if (chi == 0.0 && alpha == 0.0) throw std::invalid_argument("single_dof: chi = alpha = 0 has no eigenvalue");

    const double d = dim;
    SingleDofResult r;
    r.chi = chi;
    r.alpha = alpha;
    r.dim = dim;
    r.mass = ((1.0 - alpha) * std::pow(chi, 3.0 * d) + alpha) / std::pow(3.0, d);
    r.stiffness = d * ((1.0 - alpha) * std::pow(chi, 3.0 * d - 2.0) + alpha) / std::pow(3.0, d - 1.0);
    r.lambda = r.stiffness / r.mass;
    r.dt_crit = critical_dt(r.lambda);
    return r;
}

double unstabilized_lambda(double chi, int dim) {
    check_dim(dim);
    if (!(chi > 0.0)) throw std::invalid_argument("unstabilized_lambda: chi must be positive");
    return 3.0 * dim / (chi * chi);
}

double lambda_chi_derivative(double chi, double alpha, int dim) {
    check_dim(dim);
    const double d = dim;
    const double c3d = std::pow(chi, 3.0 * d);
    const double bracket = 3.0 * alpha * chi * chi * d - 2.0 * alpha * c3d - 3.0 * alpha * d + 2.0 * alpha + 2.0 * c3d;
    const double den = -alpha * c3d + alpha + c3d;
    return 3.0 * std::pow(chi, 3.0 * d - 3.0) * d * (alpha - 1.0) * bracket / (den * den);
}

double stationary_chi(double alpha, int dim) {
    check_dim(dim);
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("stationary_chi: alpha must lie in (0, 1)");
    const double d = dim;
    return std::pow(alpha * (3.0 * d - 2.0) / 2.0, 1.0 / (3.0 * d));
}

double lambda_constant(int dim) {
    check_dim(dim);
    const double d = dim;
    return 2.0 * std::pow((3.0 * d - 2.0) / 2.0, 1.0 - 2.0 / (3.0 * d));
}

double asymptotic_dt_min(double alpha, int dim) {
    check_dim(dim);
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("asymptotic_dt_min: alpha must lie in (0, 1)");
    return 2.0 / std::sqrt(lambda_constant(dim)) * std::pow(alpha, 1.0 / (3.0 * dim));
}

}  // namespace fcmcfl::analytic
