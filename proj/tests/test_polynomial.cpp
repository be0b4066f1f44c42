#include <doctest.h>

#include <random>

#include "l1ilc/polynomial.hpp"

using namespace l1ilc;

TEST_CASE("construction trims trailing zeros and rejects bad input") {
    const Polynomial p({1.0, 2.0, 0.0, 0.0});
    CHECK(p.degree() == 1);
    CHECK(p.leading() == 2.0);

    CHECK(Polynomial({0.0}).is_zero());
    CHECK_FALSE(Polynomial({0.0, 1.0}).is_zero());
    CHECK_THROWS_AS(Polynomial(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(Polynomial({1.0, std::numeric_limits<double>::quiet_NaN()}),
                    std::invalid_argument);
}

TEST_CASE("evaluation and derivative") {
    const Polynomial p({2.0, -3.0, 1.0});  // s^2 - 3s + 2
    CHECK(p.eval(0.0) == doctest::Approx(2.0));
    CHECK(p.eval(1.0) == doctest::Approx(0.0));
    CHECK(p.eval(2.0) == doctest::Approx(0.0));

    const Polynomial d = p.derivative();
    CHECK(d.degree() == 1);
    CHECK(d.eval(0.0) == doctest::Approx(-3.0));
    CHECK(d.eval(1.0) == doctest::Approx(-1.0));
    CHECK(Polynomial({5.0}).derivative().is_zero());
}

TEST_CASE("arithmetic") {
    const Polynomial a({1.0, 1.0});        // s + 1
    const Polynomial b({2.0, 1.0});        // s + 2
    CHECK((a * b) == Polynomial({2.0, 3.0, 1.0}));
    CHECK((a + b) == Polynomial({3.0, 2.0}));
    CHECK((a - a).is_zero());
    CHECK((a * 2.0) == Polynomial({2.0, 2.0}));
    CHECK((a * Polynomial({0.0})).is_zero());
}

TEST_CASE("shift expands p(s + a)") {
    const Polynomial p({0.0, 0.0, 1.0});  // s^2
    const Polynomial q = p.shifted(1.0);  // (s+1)^2
    CHECK(q == Polynomial({1.0, 2.0, 1.0}));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> c(5);
        for (double& v : c) v = u(rng);
        c[4] = 1.0;
        const Polynomial r(c);
        const double a = u(rng);
        const double s = u(rng);
        CHECK(r.shifted(a).eval(s) == doctest::Approx(r.eval(s + a)).epsilon(1e-10));
    }
}

TEST_CASE("roots round trip through the companion matrix") {
    const Polynomial p({2.0, 3.0, 1.0});  // (s+1)(s+2)
    auto roots = poly_roots(p);
    REQUIRE(roots.size() == 2);
    std::sort(roots.begin(), roots.end(),
              [](auto x, auto y) { return x.real() < y.real(); });
    CHECK(roots[0].real() == doctest::Approx(-2.0));
    CHECK(roots[1].real() == doctest::Approx(-1.0));

    const Polynomial back = poly_from_roots(roots, 1.0);
    for (int i = 0; i <= 2; ++i) {
        CHECK(back[i] == doctest::Approx(p[i]).epsilon(1e-12));
    }

    CHECK_THROWS_AS(poly_roots(Polynomial({3.0})), std::invalid_argument);
}

TEST_CASE("complex roots rebuild into real quadratics") {
    const std::vector<std::complex<double>> roots{{-1.0, 2.0}, {-1.0, -2.0}};
    const Polynomial p = poly_from_roots(roots, 3.0);
    // 3 (s^2 + 2s + 5)
    CHECK(p[0] == doctest::Approx(15.0));
    CHECK(p[1] == doctest::Approx(6.0));
    CHECK(p[2] == doctest::Approx(3.0));

    CHECK_THROWS_AS(poly_from_roots({{0.0, 1.0}}, 1.0), std::invalid_argument);
}
