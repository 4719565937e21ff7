#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "fcmcfl/analytic.hpp"
#include "fcmcfl/assembly.hpp"
#include "fcmcfl/basis.hpp"
#include "fcmcfl/quadrature.hpp"

using namespace fcmcfl;

namespace {

// Brute force: tensor Gauss rule on [0,chi]^d and on [0,1]^d, basis from
// TensorBasis with x = (xi + 1) / 2.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> cornercut_oracle(int p, int d, double chi, double alpha) {
    const TensorBasis tb(d, p);
    const int n = tb.size();
    const QuadratureRule gl = tensorize(gauss_legendre_1d(p + 1), d);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n), k = Eigen::MatrixXd::Zero(n, n);
    auto integrate = [&](double upper, double factor) {
        for (std::size_t q = 0; q < gl.size(); ++q) {
            Point xi{0.0, 0.0, 0.0};
            double w = gl.weights[q] * factor;
            for (int c = 0; c < d; ++c) {
                const double x = 0.5 * upper * (gl.points[q][c] + 1.0);  // physical in [0, upper]
                xi[c] = 2.0 * x - 1.0;
                w *= 0.5 * upper;
            }
            const auto e = tb.evaluate(xi);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    m(i, j) += w * e.values[i] * e.values[j];
                    double g = 0.0;
                    for (int c = 0; c < d; ++c) g += 4.0 * e.gradients[i * d + c] * e.gradients[j * d + c];
                    k(i, j) += w * g;
                }
        }
    };
    if (chi > 0.0) integrate(chi, 1.0 - alpha);
    integrate(1.0, alpha);
    return {m, k};
}

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

std::vector<double> log_values(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = std::pow(10.0, lo + (hi - lo) * i / (n - 1));
    return v;
}

}  // namespace

TEST_CASE("linear element on the unit interval") {
    for (double alpha : {0.0, 1e-4, 0.5, 1.0}) {
        const auto em = element_matrices_cornercut(1, 1, 1.0, alpha);
        CHECK(em.mass(0, 0) == doctest::Approx(1.0 / 3.0));
        CHECK(em.mass(0, 1) == doctest::Approx(1.0 / 6.0));
        CHECK(em.mass(1, 1) == doctest::Approx(1.0 / 3.0));
        CHECK(em.stiffness(0, 0) == doctest::Approx(1.0));
        CHECK(em.stiffness(0, 1) == doctest::Approx(-1.0));
        CHECK(em.stiffness(1, 1) == doctest::Approx(1.0));
        CHECK(em.kind == CellKind::physical);
    }
}

TEST_CASE("mass entry of the right hat") {
    for (double chi : {0.01, 0.3, 0.77})
        for (double alpha : {1e-8, 1e-2}) {
            const auto em = element_matrices_cornercut(1, 1, chi, alpha);
            CHECK(em.mass(1, 1) == doctest::Approx(((1 - alpha) * chi * chi * chi + alpha) / 3.0).epsilon(1e-13));
        }
}

TEST_CASE("empty physical part scales the full element") {
    for (int d = 1; d <= 3; ++d)
        for (int p = 1; p <= 3; ++p) {
            const auto full = element_matrices_cornercut(p, d, 1.0, 1.0);
            const auto empty = element_matrices_cornercut(p, d, 0.0, 1e-4);
            CHECK(empty.kind == CellKind::fictitious);
            CHECK(rel(empty.mass, 1e-4 * full.mass) < 1e-13);
            CHECK(rel(empty.stiffness, 1e-4 * full.stiffness) < 1e-13);
        }
}

TEST_CASE("corner cut matrices against a brute-force oracle") {
    for (int d = 1; d <= 3; ++d)
        for (int p = 1; p <= (d == 3 ? 3 : 5); ++p)
            for (double chi : {1e-6, 0.123, 0.5, 0.999})
                for (double alpha : {1e-12, 1e-4, 0.3}) {
                    const auto em = element_matrices_cornercut(p, d, chi, alpha);
                    const auto [m, k] = cornercut_oracle(p, d, chi, alpha);
                    CHECK(rel(em.mass, m) < 1e-12);
                    CHECK(rel(em.stiffness, k) < 1e-12);
                }
}

TEST_CASE("symmetry and definiteness over the sweep grid") {
    const auto chis = log_values(-8.0, 0.0, 17);
    for (int d = 1; d <= 3; ++d)
        for (int p = 1; p <= 6; ++p)
            for (double alpha : {1e-4, 1e-8, 1e-12})
                for (double chi : chis) {
                    const auto em = element_matrices_cornercut(p, d, chi, alpha);
                    CHECK((em.mass - em.mass.transpose()).norm() <= 1e-12 * em.mass.norm());
                    CHECK((em.stiffness - em.stiffness.transpose()).norm() <= 1e-12 * em.stiffness.norm());
                    CHECK(Eigen::LLT<Eigen::MatrixXd>(em.mass).info() == Eigen::Success);
                    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(em.size());
                    CHECK((em.stiffness * ones).norm() < 1e-10 * em.stiffness.norm());
                    // K semidefinite: smallest eigenvalue not below round-off
                    const double kmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(em.stiffness).eigenvalues()(0);
                    CHECK(kmin > -1e-10 * em.stiffness.norm());
                }
}

TEST_CASE("alpha = 1 makes the matrices independent of chi") {
    for (int d = 1; d <= 3; ++d) {
        const auto ref = element_matrices_cornercut(2, d, 1.0, 1.0);
        for (double chi : {0.0, 1e-5, 0.4}) {
            const auto em = element_matrices_cornercut(2, d, chi, 1.0);
            CHECK(rel(em.mass, ref.mass) < 1e-12);
            CHECK(rel(em.stiffness, ref.stiffness) < 1e-12);
        }
    }
}

TEST_CASE("single unknown reduction reproduces the closed forms") {
    const auto grid = log_values(-8.0, 0.0, 17);
    for (int d = 1; d <= 3; ++d) {
        const auto constrained = origin_face_dofs(1, d);
        CHECK(static_cast<int>(constrained.size()) == (1 << d) - 1);
        for (double chi : grid)
            for (double alpha : grid) {
                const auto red = apply_dirichlet(element_matrices_cornercut(1, d, chi, alpha), constrained);
                REQUIRE(red.mass.rows() == 1);
                const auto a = analytic::single_dof(chi, alpha, d);
                CHECK(std::abs(red.mass(0, 0) / a.mass - 1.0) < 1e-12);
                CHECK(std::abs(red.stiffness(0, 0) / a.stiffness - 1.0) < 1e-12);
            }
    }
    // K = (1 - alpha) chi + alpha for d = 1
    const auto red = apply_dirichlet(element_matrices_cornercut(1, 1, 0.3, 0.01), origin_face_dofs(1, 1));
    CHECK(red.stiffness(0, 0) == doctest::Approx(0.99 * 0.3 + 0.01));
}

TEST_CASE("dirichlet elimination errors and identity") {
    const auto em = element_matrices_cornercut(2, 1, 0.5, 1e-3);
    const auto same = apply_dirichlet(em, std::vector<int>{});
    CHECK(same.free_dofs.size() == 3);
    CHECK(rel(same.mass, em.mass) == 0.0);
    CHECK_THROWS_AS((void)apply_dirichlet(em, std::vector<int>{0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS((void)apply_dirichlet(em, std::vector<int>{1, 1}), std::invalid_argument);
    CHECK_THROWS_AS((void)apply_dirichlet(em, std::vector<int>{3}), std::invalid_argument);
    const auto red = apply_dirichlet(em, std::vector<int>{1});
    CHECK(red.mass(0, 1) == em.mass(0, 2));
}

TEST_CASE("quadtree matrices") {
    const Box unit = Box::unit_cube(2);
    SUBCASE("interior element") {
        const CornerCutDomain all(1.0, 2);
        const auto q = element_matrices_quadtree(3, unit, all, 1e-4, 5);
        const auto c = element_matrices_cornercut(3, 2, 1.0, 1e-4);
        CHECK(q.kind == CellKind::physical);
        CHECK(rel(q.mass, c.mass) < 1e-12);
        CHECK(rel(q.stiffness, c.stiffness) < 1e-12);
    }
    SUBCASE("fictitious element") {
        const DiskDomain far({10.0, 10.0, 0.0}, 1.0);
        const auto q = element_matrices_quadtree(2, unit, far, 1e-4, 4);
        const auto c = element_matrices_cornercut(2, 2, 1.0, 1.0);
        CHECK(q.kind == CellKind::fictitious);
        CHECK(rel(q.mass, 1e-4 * c.mass) < 1e-12);
        CHECK(rel(q.stiffness, 1e-4 * c.stiffness) < 1e-12);
    }
    SUBCASE("dyadic corner cut") {
        const CornerCutDomain half(0.5, 2);
        const auto c = element_matrices_cornercut(2, 2, 0.5, 1e-4);
        for (int k : {1, 3, 6}) {
            const auto q = element_matrices_quadtree(2, unit, half, 1e-4, k);
            CHECK(q.kind == CellKind::cut);
            for (int i = 0; i < c.size(); ++i)
                for (int j = 0; j < c.size(); ++j) {
                    CHECK(std::abs(q.mass(i, j) - c.mass(i, j)) <= 1e-6 * std::abs(c.mass(i, j)) + 1e-15);
                    CHECK(std::abs(q.stiffness(i, j) - c.stiffness(i, j)) <=
                          1e-6 * std::abs(c.stiffness(i, j)) + 1e-15);
                }
        }
    }
    SUBCASE("physical size scaling") {
        // mass scales with h^2 and stiffness is invariant in 2D
        const Box small{2, {0.0, 0.0, 0.0}, {0.2, 0.2, 0.0}};
        const auto a = element_matrices_uncut(2, unit, CellKind::physical, 1e-4, MassIntegration::consistent);
        const auto b = element_matrices_uncut(2, small, CellKind::physical, 1e-4, MassIntegration::consistent);
        CHECK(rel(b.mass, 0.04 * a.mass) < 1e-13);
        CHECK(rel(b.stiffness, a.stiffness) < 1e-13);
    }
}

TEST_CASE("lumped mass") {
    const Box unit1{1, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    const auto l1 = lumped_mass(element_matrices_uncut(1, unit1, CellKind::physical, 1.0, MassIntegration::consistent));
    CHECK(l1(0) == doctest::Approx(0.5));
    CHECK(l1(1) == doctest::Approx(0.5));
    const auto l2 = lumped_mass(element_matrices_uncut(2, unit1, CellKind::physical, 1.0, MassIntegration::consistent));
    CHECK(l2(0) == doctest::Approx(1.0 / 6.0));
    CHECK(l2(1) == doctest::Approx(4.0 / 6.0));
    CHECK(l2(2) == doctest::Approx(1.0 / 6.0));

    const Box box{2, {0.0, 0.0, 0.0}, {0.2, 0.2, 0.0}};
    for (int p = 1; p <= 6; ++p) {
        const auto em = element_matrices_uncut(p, box, CellKind::fictitious, 1e-4, MassIntegration::lumped);
        CHECK(em.mass.trace() == doctest::Approx(0.04 * 1e-4));
        CHECK((em.mass - Eigen::MatrixXd(em.mass.diagonal().asDiagonal())).norm() == 0.0);
    }
    CHECK_THROWS_AS((void)lumped_mass(element_matrices_cornercut(1, 2, 0.5, 1e-3)), std::invalid_argument);
}

TEST_CASE("global assembly small grids") {
    const DiskDomain everywhere({0.0, 0.0, 0.0}, 1e6);
    SUBCASE("one element equals the lumped element") {
        const GridSpec g{1, 1, 0.5, {0.0, 0.0, 0.0}};
        const auto sys = assemble_global(g, 3, everywhere, 1e-4, 4);
        const auto em = element_matrices_uncut(3, g.element_box(0), CellKind::physical, 1e-4, MassIntegration::lumped);
        CHECK(rel(Eigen::MatrixXd(sys.mass), em.mass) < 1e-15);
        CHECK(rel(Eigen::MatrixXd(sys.stiffness), em.stiffness) < 1e-15);
    }
    SUBCASE("two linear elements share the middle nodes") {
        const GridSpec g{2, 1, 1.0, {0.0, 0.0, 0.0}};
        const auto sys = assemble_global(g, 1, everywhere, 1.0, 0);
        CHECK(sys.num_dofs() == 6);
        // 2D analogue of the 1D hand assembly: 1/4 per element and node
        CHECK(sys.mass.coeff(1, 1) == doctest::Approx(0.5));
        CHECK(sys.mass.coeff(0, 0) == doctest::Approx(0.25));
        // summing out y recovers the 1D middle entry of 1
        CHECK(sys.mass.coeff(1, 1) + sys.mass.coeff(4, 4) == doctest::Approx(1.0));
    }
    SUBCASE("dof count of the plate grid at p = 5") {
        const GridSpec g{45, 15, 0.2, {0.0, 0.0, 0.0}};
        const auto sys = assemble_global(g, 5, everywhere, 1e-4, 0);
        CHECK(sys.num_dofs() == 17176);
    }
    CHECK_THROWS_AS((void)assemble_global(GridSpec{}, 1, everywhere, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)assemble_global(GridSpec{}, 1, CornerCutDomain(0.5, 3), 1e-3, 1), std::invalid_argument);
}

TEST_CASE("global assembly is the connectivity sum of element matrices") {
    const DiskDomain disk({0.3, 0.25, 0.0}, 0.23);
    const GridSpec g{2, 2, 0.2, {0.0, 0.0, 0.0}};
    for (int p : {1, 2, 3}) {
        const auto sys = assemble_global(g, p, disk, 1e-3, 3);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(sys.num_dofs(), sys.num_dofs()), k = m;
        for (int e = 0; e < g.num_elements(); ++e) {
            const auto dofs = sys.element_dofs(e);
            const auto& em = sys.elements[e];
            for (std::size_t i = 0; i < dofs.size(); ++i)
                for (std::size_t j = 0; j < dofs.size(); ++j) {
                    m(dofs[i], dofs[j]) += em.mass(i, j);
                    k(dofs[i], dofs[j]) += em.stiffness(i, j);
                }
        }
        CHECK(rel(Eigen::MatrixXd(sys.mass), m) < 1e-12);
        CHECK(rel(Eigen::MatrixXd(sys.stiffness), k) < 1e-12);
        CHECK(sys.count(CellKind::cut) > 0);
        const Eigen::MatrixXd dense_m(sys.mass);
        CHECK((dense_m - dense_m.transpose()).norm() == 0.0);
        CHECK(Eigen::LLT<Eigen::MatrixXd>(dense_m).info() == Eigen::Success);
    }
}

TEST_CASE("cut classification follows the quadrature rule") {
    const DiskDomain disk({0.5, 0.5, 0.0}, 0.31);
    const GridSpec g{5, 5, 0.2, {0.0, 0.0, 0.0}};
    const auto sys = assemble_global(g, 2, disk, 1e-4, 3);
    for (int e = 0; e < g.num_elements(); ++e) {
        const auto rule = cut_cell_rule(g.element_box(e), disk, 3, 3, 1e-4);
        const bool uncut = rule.single_leaf() && rule.uniform_scale();
        CHECK((sys.elements[e].kind == CellKind::cut) == !uncut);
        if (uncut) CHECK(sys.elements[e].mass_integration == MassIntegration::lumped);
    }
    CHECK(sys.count(CellKind::physical) + sys.count(CellKind::fictitious) + sys.count(CellKind::cut) == 25);
}
