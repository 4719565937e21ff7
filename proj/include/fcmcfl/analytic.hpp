#pragma once

namespace fcmcfl::analytic {

/// Closed-form mass, stiffness and eigenvalue of the linear element on
/// [0,1]^d with physical part [0,chi]^d and all DOFs except the corner
/// opposite the origin constrained.
struct SingleDofResult {
    double chi = 0.0;
    double alpha = 0.0;
    int dim = 1;
    double mass = 0.0;
    double stiffness = 0.0;
    double lambda = 0.0;
    double dt_crit = 0.0;
};

/// M = ((1-a) chi^{3d} + a) / 3^d, K = d ((1-a) chi^{3d-2} + a) / 3^{d-1}.
/// Rejects chi = alpha = 0.
[[nodiscard]] SingleDofResult single_dof(double chi, double alpha, int dim);

/// Eigenvalue without stabilisation, 3 d chi^{-2}.
[[nodiscard]] double unstabilized_lambda(double chi, int dim);

/// d lambda / d chi of the single-DOF eigenvalue (closed form).
[[nodiscard]] double lambda_chi_derivative(double chi, double alpha, int dim);

/// Cut parameter maximising the eigenvalue as alpha -> 0:
/// (alpha (3d - 2) / 2)^{1/(3d)}.
[[nodiscard]] double stationary_chi(double alpha, int dim);

/// C(d) = 2 ((3d - 2) / 2)^{1 - 2/(3d)}, so that lambda_max ~ C(d) alpha^{-2/(3d)}.
[[nodiscard]] double lambda_constant(int dim);

/// 2 / sqrt(C(d)) * alpha^{1/(3d)}.
[[nodiscard]] double asymptotic_dt_min(double alpha, int dim);

}  // namespace fcmcfl::analytic
