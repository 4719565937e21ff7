#include "fcmcfl/eigensolvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <variant>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

namespace fcmcfl {

namespace {

double relative_residual(const Eigen::VectorXd& k_v, const Eigen::VectorXd& m_v, double lambda) {
    const double denom = (lambda != 0.0 ? std::abs(lambda) : 1.0) * m_v.norm();
    return denom > 0.0 ? (k_v - lambda * m_v).norm() / denom : 0.0;
}

}  // namespace

SpectrumResult max_eig_dense(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& stiffness) {
    if (mass.rows() != mass.cols() || stiffness.rows() != stiffness.cols() || mass.rows() != stiffness.rows())
        throw std::invalid_argument("max_eig_dense: mass and stiffness must be square and of equal size");
    if (mass.rows() == 0) throw std::invalid_argument("max_eig_dense: empty pencil");

    const Eigen::LLT<Eigen::MatrixXd> llt(mass);
    if (llt.info() != Eigen::Success)
        throw DefinitenessError("max_eig_dense: mass matrix is not positive definite");

    // C = L^{-1} K L^{-T}
    Eigen::MatrixXd reduced = llt.matrixL().solve(stiffness);
    reduced = llt.matrixL().solve(reduced.transpose()).transpose();
    reduced = 0.5 * (reduced + reduced.transpose()).eval();

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced);
    if (eig.info() != Eigen::Success) throw std::runtime_error("max_eig_dense: eigenvalue iteration failed");

    const Eigen::Index top = reduced.rows() - 1;
    SpectrumResult result;
    result.lambda_max = eig.eigenvalues()[top];
    result.eigenvector = llt.matrixU().solve(eig.eigenvectors().col(top));
    result.residual =
        relative_residual(stiffness * result.eigenvector, mass * result.eigenvector, result.lambda_max);
    result.iterations = 1;
    return result;
}

namespace {

// Solves M x = b for a diagonal or general sparse SPD mass matrix.
class MassSolver {
public:
    explicit MassSolver(const SparseMatrix& mass) {
        bool diagonal = true;
        for (int k = 0; k < mass.outerSize() && diagonal; ++k)
            for (SparseMatrix::InnerIterator it(mass, k); it; ++it)
                if (it.row() != it.col() && it.value() != 0.0) {
                    diagonal = false;
                    break;
                }

        if (diagonal) {
            Eigen::VectorXd inv = mass.diagonal();
            if ((inv.array() <= 0.0).any())
                throw DefinitenessError("max_eig_iterative: mass matrix is not positive definite");
            solver_ = Eigen::VectorXd(inv.cwiseInverse());
            return;
        }
        auto& ldlt = solver_.emplace<Eigen::SimplicialLDLT<SparseMatrix>>();
        ldlt.compute(mass);
        if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any())
            throw DefinitenessError("max_eig_iterative: mass matrix is not positive definite");
    }

    [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
        if (const auto* inv = std::get_if<Eigen::VectorXd>(&solver_)) return inv->cwiseProduct(rhs);
        return std::get<Eigen::SimplicialLDLT<SparseMatrix>>(solver_).solve(rhs);
    }

private:
    std::variant<Eigen::VectorXd, Eigen::SimplicialLDLT<SparseMatrix>> solver_;
};

// All-ones with a reproducible perturbation. The constant vector alone lies
// in the null space of Neumann stiffness matrices.
Eigen::VectorXd start_vector(Eigen::Index n, std::mt19937_64& rng) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        v[i] = 1.0 + (u - 0.5);
    }
    return v;
}

class LanczosBasis {
public:
    explicit LanczosBasis(const SparseMatrix& mass) : mass_(mass) {}

    void push(Eigen::VectorXd q) { columns_.push_back(std::move(q)); }
    [[nodiscard]] std::size_t size() const noexcept { return columns_.size(); }
    [[nodiscard]] const Eigen::VectorXd& operator[](std::size_t i) const { return columns_[i]; }

    // Two passes of classical Gram-Schmidt in the M inner product.
    void orthogonalize(Eigen::VectorXd& w) const {
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd mw = mass_ * w;
            std::vector<double> coeff(columns_.size());
            for (std::size_t i = 0; i < columns_.size(); ++i) coeff[i] = columns_[i].dot(mw);
            for (std::size_t i = 0; i < columns_.size(); ++i) w -= coeff[i] * columns_[i];
        }
    }

    [[nodiscard]] double m_norm(const Eigen::VectorXd& w) const { return std::sqrt(std::max(0.0, w.dot(mass_ * w))); }

    [[nodiscard]] Eigen::VectorXd combine(const Eigen::VectorXd& coefficients) const {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(columns_.front().size());
        for (std::size_t i = 0; i < columns_.size(); ++i) y += coefficients[static_cast<Eigen::Index>(i)] * columns_[i];
        return y;
    }

private:
    const SparseMatrix& mass_;
    std::vector<Eigen::VectorXd> columns_;
};

}  // namespace

SpectrumResult max_eig_iterative(const SparseMatrix& mass, const SparseMatrix& stiffness,
                                 const LanczosOptions& options) {
    if (mass.rows() != mass.cols() || stiffness.rows() != stiffness.cols() || mass.rows() != stiffness.rows())
        throw std::invalid_argument("max_eig_iterative: mass and stiffness must be square and of equal size");
    const Eigen::Index n = mass.rows();
    if (n == 0) throw std::invalid_argument("max_eig_iterative: empty pencil");
    if (options.max_iterations < 1) throw std::invalid_argument("max_eig_iterative: max_iterations must be positive");

    const MassSolver solver(mass);
    LanczosBasis basis(mass);
    std::mt19937_64 rng(options.seed);

    Eigen::VectorXd q = start_vector(n, rng);
    q /= basis.m_norm(q);

    std::vector<double> diag, offdiag;
    SpectrumResult best;
    double previous = std::numeric_limits<double>::quiet_NaN();
    const int steps = static_cast<int>(std::min<Eigen::Index>(options.max_iterations, n));

    for (int j = 0; j < steps; ++j) {
        const Eigen::VectorXd kq = stiffness * q;
        Eigen::VectorXd w = solver.solve(kq);
        const double a = q.dot(kq);
        const double scale = basis.m_norm(w);
        w -= a * q;
        if (j > 0) w -= offdiag.back() * basis[j - 1];
        basis.push(q);
        basis.orthogonalize(w);
        double b = basis.m_norm(w);
        diag.push_back(a);

        Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), static_cast<Eigen::Index>(diag.size()));
        Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(offdiag.data(), static_cast<Eigen::Index>(offdiag.size()));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
        const double theta = tri.eigenvalues()[d.size() - 1];

        const bool exhausted = (j + 1 == steps);
        const bool stalled = std::abs(theta - previous) <= options.tolerance * std::abs(theta);
        if (stalled || exhausted) {
            tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
            const double ritz = tri.eigenvalues()[d.size() - 1];
            Eigen::VectorXd y = basis.combine(tri.eigenvectors().col(d.size() - 1));
            const Eigen::VectorXd ky = stiffness * y;
            const Eigen::VectorXd my = mass * y;
            const double residual = relative_residual(ky, my, ritz);
            best.lambda_max = ritz;
            best.residual = residual;
            best.iterations = j + 1;
            best.eigenvector = std::move(y);
            if ((stalled && residual <= options.residual_tolerance) || (exhausted && steps == n)) return best;
        }
        previous = theta;
        if (exhausted) break;

        if (!(b > 1e-10 * scale)) {
            // Invariant subspace reached; continue from a fresh direction.
            w = start_vector(n, rng);
            basis.orthogonalize(w);
            b = basis.m_norm(w);
            q = w / b;
            offdiag.push_back(0.0);
        } else {
            q = w / b;
            offdiag.push_back(b);
        }
    }
    throw ConvergenceError("max_eig_iterative: no convergence within " + std::to_string(steps) + " steps", best);
}

SpectrumResult max_eig_iterative(const GlobalSystem& system, const LanczosOptions& options) {
    return max_eig_iterative(system.mass, system.stiffness, options);
}

double critical_dt(double lambda_max) {
    if (!(lambda_max > 0.0)) throw std::invalid_argument("critical_dt: lambda_max must be positive");
    return 2.0 / std::sqrt(lambda_max);
}

}  // namespace fcmcfl
