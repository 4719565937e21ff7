#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "fcmcfl/assembly.hpp"

namespace fcmcfl {

/// Largest eigenpair of K v = lambda M v.
struct SpectrumResult {
    double lambda_max = 0.0;
    /// ||K v - lambda M v|| / (lambda ||M v||)
    double residual = 0.0;
    int iterations = 0;
    Eigen::VectorXd eigenvector;
};

/// The mass matrix is not positive definite.
class DefinitenessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative solver ran out of steps; carries the best estimate.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, SpectrumResult best)
        : std::runtime_error(what), best_(std::move(best)) {}
    [[nodiscard]] const SpectrumResult& best() const noexcept { return best_; }

private:
    SpectrumResult best_;
};

/// Cholesky reduction of M to a standard symmetric problem, full spectrum.
[[nodiscard]] SpectrumResult max_eig_dense(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& stiffness);

struct LanczosOptions {
    /// Relative change of successive Ritz values.
    double tolerance = 1e-9;
    /// Bound on the explicit relative residual of the Ritz pair. A Ritz value
    /// accurate to `tolerance` generally has a residual near its square root.
    double residual_tolerance = 1e-4;
    int max_iterations = 5000;
    std::uint64_t seed = 0x5eed5eedULL;
};

/// Lanczos with full reorthogonalisation in the M inner product on M^{-1} K.
/// M is factorised once (sparse LDL^T, or inverted directly when diagonal).
[[nodiscard]] SpectrumResult max_eig_iterative(const SparseMatrix& mass, const SparseMatrix& stiffness,
                                               const LanczosOptions& options = {});
[[nodiscard]] SpectrumResult max_eig_iterative(const GlobalSystem& system, const LanczosOptions& options = {});

/// Central difference stability limit 2 / sqrt(lambda_max).
[[nodiscard]] double critical_dt(double lambda_max);

}  // namespace fcmcfl
