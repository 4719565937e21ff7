#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "fcmcfl/basis.hpp"

using namespace fcmcfl;

TEST_CASE("gll nodes for low degrees") {
    CHECK_THROWS_AS((void)gll_nodes(0), std::invalid_argument);

    const auto p1 = gll_nodes(1);
    REQUIRE(p1.size() == 2);
    CHECK(p1[0] == -1.0);
    CHECK(p1[1] == 1.0);

    const auto p2 = gll_nodes(2);
    REQUIRE(p2.size() == 3);
    CHECK(p2[1] == 0.0);

    const auto p3 = gll_nodes(3);
    REQUIRE(p3.size() == 4);
    // roots of P_3' = (15 x^2 - 3) / 2
    CHECK(p3[1] == doctest::Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-15));
    CHECK(p3[2] == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("gll interior nodes are roots of the Legendre derivative") {
    for (int p = 1; p <= 12; ++p) {
        const auto x = gll_nodes(p);
        CHECK(x.front() == -1.0);
        CHECK(x.back() == 1.0);
        for (int i = 0; i < p; ++i) CHECK(x[i] < x[i + 1]);
        for (int i = 0; i <= p; ++i) CHECK(std::abs(x[i] + x[p - i]) <= 1e-14);
        // P_p'(x) (1 - x^2) / p = P_{p-1}(x) - x P_p(x)
        for (int i = 1; i < p; ++i) CHECK(std::abs(legendre(p - 1, x[i]) - x[i] * legendre(p, x[i])) < 1e-14);
    }
}

TEST_CASE("legendre recurrence against closed forms") {
    for (double x : {-1.0, -0.3, 0.0, 0.42, 1.0}) {
        CHECK(legendre(0, x) == 1.0);
        CHECK(legendre(1, x) == doctest::Approx(x));
        CHECK(legendre(2, x) == doctest::Approx((3 * x * x - 1) / 2));
        CHECK(legendre(3, x) == doctest::Approx((5 * x * x * x - 3 * x) / 2));
        CHECK(legendre(4, x) == doctest::Approx((35 * std::pow(x, 4) - 30 * x * x + 3) / 8));
    }
    CHECK(legendre(7, 1.0) == doctest::Approx(1.0));
    CHECK(legendre(7, -1.0) == doctest::Approx(-1.0));
}

TEST_CASE("lagrange values and derivatives") {
    SUBCASE("p = 2 at 0") {
        const auto e = NodalBasis1D(2).lagrange_all(0.0);
        CHECK(e.values[0] == doctest::Approx(0.0));
        CHECK(e.values[1] == doctest::Approx(1.0));
        CHECK(e.values[2] == doctest::Approx(0.0));
    }
    SUBCASE("p = 1 at 0.5") {
        const auto e = NodalBasis1D(1).lagrange_all(0.5);
        CHECK(e.values[0] == doctest::Approx(0.25));
        CHECK(e.values[1] == doctest::Approx(0.75));
        CHECK(e.derivatives[0] == doctest::Approx(-0.5));
        CHECK(e.derivatives[1] == doctest::Approx(0.5));
    }
    SUBCASE("p = 2 derivatives at the right end") {
        const auto e = NodalBasis1D(2).lagrange_all(1.0);
        CHECK(e.derivatives[0] == doctest::Approx(0.5));
        CHECK(e.derivatives[1] == doctest::Approx(-2.0));
        CHECK(e.derivatives[2] == doctest::Approx(1.5));
    }
}

TEST_CASE("kronecker property at the nodes") {
    for (int p = 1; p <= 10; ++p) {
        const NodalBasis1D b(p);
        for (int j = 0; j <= p; ++j) {
            const auto e = b.lagrange_all(b.nodes()[j]);
            for (int i = 0; i <= p; ++i) CHECK(std::abs(e.values[i] - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("partition of unity and zero derivative sum") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int p = 1; p <= 10; ++p) {
        const NodalBasis1D b(p);
        for (int s = 0; s < 100; ++s) {
            const auto e = b.lagrange_all(u(rng));
            double sv = 0.0, sd = 0.0;
            for (int i = 0; i <= p; ++i) {
                sv += e.values[i];
                sd += e.derivatives[i];
            }
            CHECK(std::abs(sv - 1.0) < 1e-11);
            CHECK(std::abs(sd) < 1e-11);
        }
    }
}

TEST_CASE("derivatives match central differences in 1D") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-0.99, 0.99);
    for (int p = 1; p <= 8; ++p) {
        const NodalBasis1D b(p);
        for (int s = 0; s < 20; ++s) {
            const double x = u(rng), step = 1e-6;
            const auto e = b.lagrange_all(x);
            const auto ep = b.lagrange_all(x + step);
            const auto em = b.lagrange_all(x - step);
            for (int i = 0; i <= p; ++i)
                CHECK(e.derivatives[i] == doctest::Approx((ep.values[i] - em.values[i]) / (2 * step)).epsilon(1e-6));
        }
    }
}

TEST_CASE("tensor basis indexing") {
    const TensorBasis tb(3, 2);
    CHECK(tb.size() == 27);
    const int m[3] = {2, 0, 1};
    CHECK(tb.flat_index(m) == 2 + 3 * 0 + 9 * 1);
    for (int f = 0; f < tb.size(); ++f) CHECK(tb.flat_index(tb.multi_index(f)) == f);
    for (int d = 1; d <= 3; ++d)
        for (int p = 1; p <= 6; ++p) CHECK(TensorBasis(d, p).size() == static_cast<int>(std::pow(p + 1, d)));
}

TEST_CASE("tensor basis examples") {
    SUBCASE("bilinear corner function at (1, 1)") {
        const TensorBasis tb(2, 1);
        const auto e = tb.evaluate({1.0, 1.0, 0.0});
        for (int i = 0; i < 4; ++i) CHECK(e.values[i] == doctest::Approx(i == 3 ? 1.0 : 0.0));
    }
    SUBCASE("bilinear at the center") {
        const auto e = TensorBasis(2, 1).evaluate({0.0, 0.0, 0.0});
        for (double v : e.values) CHECK(v == doctest::Approx(0.25));
    }
    SUBCASE("trilinear corner gradient") {
        const TensorBasis tb(3, 1);
        const auto e = tb.evaluate({1.0, 1.0, 1.0});
        for (int k = 0; k < 3; ++k) CHECK(e.gradients[7 * 3 + k] == doctest::Approx(0.5));
    }
}

TEST_CASE("tensor partition of unity and gradients against differences") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    for (int d = 1; d <= 3; ++d) {
        for (int p = 1; p <= 4; ++p) {
            const TensorBasis tb(d, p);
            for (int s = 0; s < 20; ++s) {
                Point x{0.0, 0.0, 0.0};
                for (int k = 0; k < d; ++k) x[k] = u(rng);
                const auto e = tb.evaluate(x);
                double sum = 0.0;
                for (double v : e.values) sum += v;
                CHECK(std::abs(sum - 1.0) < 1e-12);

                const double step = 1e-6;
                for (int k = 0; k < d; ++k) {
                    Point xp = x, xm = x;
                    xp[k] += step;
                    xm[k] -= step;
                    const auto ep = tb.evaluate(xp), em = tb.evaluate(xm);
                    for (int i = 0; i < tb.size(); ++i) {
                        const double fd = (ep.values[i] - em.values[i]) / (2 * step);
                        const double g = e.gradients[i * d + k];
                        CHECK(std::abs(g - fd) <= 1e-6 * std::max(1.0, std::abs(g)));
                    }
                }
            }
        }
    }
}

TEST_CASE("evaluation from the left end") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int p = 1; p <= 8; ++p) {
        const NodalBasis1D b(p);
        std::vector<double> v(p + 1), dv(p + 1), w(p + 1), dw(p + 1);
        for (int t = 0; t < 10; ++t) {
            const double s = u(rng);
            b.evaluate(-1.0 + s, v, dv);
            b.evaluate_from_left(s, w, dw);
            for (int i = 0; i <= p; ++i) {
                CHECK(w[i] == doctest::Approx(v[i]).epsilon(1e-12).scale(1.0));
                CHECK(dw[i] == doctest::Approx(dv[i]).epsilon(1e-12).scale(1.0));
            }
        }
    }
    // p = 1: N_1(-1 + s) = s / 2 without rounding loss.
    const NodalBasis1D b(1);
    std::vector<double> v(2), dv(2);
    b.evaluate_from_left(3e-9, v, dv);
    CHECK(v[1] == 1.5e-9);
}
