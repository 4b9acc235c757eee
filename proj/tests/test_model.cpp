#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "fsi/dual.hpp"
#include "fsi/model.hpp"
#include "property.hpp"

using namespace fsi;

TEST_CASE("pressure hand values")
{
    Params p;
    CHECK(pressure(0.0, 1.0, 2.0) == 0.0);
    CHECK(pressure(0.0, 3.0, 1.4) == 0.0);
    CHECK(pressure(2.0, 1.0, 2.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(pressure(1.0, 2.0, 1.4) == doctest::Approx(2.0).epsilon(1e-15));
    p.a = 1.0;
    p.gamma = 2.0;
    CHECK_THROWS_AS(pressure_checked(-1.0, p), std::domain_error);
}

TEST_CASE("internal energy hand values")
{
    CHECK(internal_energy(0.0, 1.0, 2.0) == 0.0);
    CHECK(internal_energy(2.0, 1.0, 2.0) == doctest::Approx(4.0).epsilon(1e-15));
    // p = rho H' - H at rho = 3, a = 1, gamma = 2: 9 = 3*6 - 9
    CHECK(internal_energy_derivative(3.0, 1.0, 2.0) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(3.0 * internal_energy_derivative(3.0, 1.0, 2.0) - internal_energy(3.0, 1.0, 2.0) ==
          doctest::Approx(9.0).epsilon(1e-15));
    Params p;
    CHECK_THROWS_AS(internal_energy_checked(-0.5, p), std::domain_error);
}

TEST_CASE("elastic energy density hand values")
{
    Params p;
    p.alpha = 1.0;
    p.beta = 0.0;
    CHECK(elastic_energy_density(0.0, 0.0, p) == 0.0);
    CHECK(elastic_energy_density(0.0, 2.0, p) == doctest::Approx(2.0));
    p.alpha = 2.0;
    p.beta = 4.0;
    CHECK(elastic_energy_density(1.0, 1.0, p) == doctest::Approx(3.0));
}

TEST_CASE("property: H' matches central differences")
{
    prop::for_all(200, 1, [](prop::Gen& g) {
        const double a = g.positive(0.1, 10.0), gamma = g.uniform(1.05, 3.0), rho = g.uniform(0.1, 10.0);
        const double h = 1e-6 * rho;
        const double fd = (internal_energy(rho + h, a, gamma) - internal_energy(rho - h, a, gamma)) / (2 * h);
        const double exact = internal_energy_derivative(rho, a, gamma);
        CHECK(std::abs(fd - exact) <= 1e-6 * std::abs(exact));
    });
}

TEST_CASE("property: H is convex")
{
    prop::for_all(500, 2, [](prop::Gen& g) {
        const double a = g.positive(0.1, 10.0), gamma = g.uniform(1.05, 3.0);
        const double r1 = g.positive(1e-3, 10.0), r2 = g.positive(1e-3, 10.0), t = g.uniform(0.0, 1.0);
        const double lhs = internal_energy(t * r1 + (1 - t) * r2, a, gamma);
        const double rhs = t * internal_energy(r1, a, gamma) + (1 - t) * internal_energy(r2, a, gamma);
        CHECK(lhs <= rhs + 1e-12);
    });
}

TEST_CASE("property: p = rho H' - H")
{
    prop::for_all(500, 3, [](prop::Gen& g) {
        const double a = g.positive(0.1, 10.0), gamma = g.uniform(1.05, 3.0), rho = g.positive(1e-3, 100.0);
        const double p = pressure(rho, a, gamma);
        const double q = rho * internal_energy_derivative(rho, a, gamma) - internal_energy(rho, a, gamma);
        CHECK(std::abs(p - q) <= 1e-12 * p);
    });
}

TEST_CASE("pressure through dual numbers")
{
    const Dual<1> r = Dual<1>::variable(2.0, 0);
    const Dual<1> p = pressure(r, 1.5, 2.0);
    CHECK(p.v == doctest::Approx(6.0));
    CHECK(p.d[0] == doctest::Approx(6.0));  // 2 a rho
}

TEST_CASE("parameter validation reports every violation")
{
    Params p;
    CHECK(p.violations().empty());
    CHECK_NOTHROW(p.validate());
    CHECK(default_eps_up(1.4) == doctest::Approx(0.4));
    CHECK(default_eps_up(3.0) == 1.0);

    p.gamma = 1.0;
    auto v = p.violations();
    CHECK(std::find(v.begin(), v.end(), "gamma must exceed 1") != v.end());

    Params q;
    q.gamma = 1.4;
    q.eps_up = 0.9;  // 2 (gamma - 1) = 0.8
    CHECK_FALSE(q.violations().empty());
    q.eps_up = 0.79;
    CHECK(q.violations().empty());

    Params r;
    r.a = 0.0;
    r.mu = -1.0;
    r.alpha = 0.0;
    r.beta = -1.0;
    r.tau = 0.0;
    r.delta0 = 0.5;  // not below H/2
    CHECK(r.violations().size() >= 6);
    try {
        r.validate();
        FAIL("expected ParameterError");
    } catch (const ParameterError& e) {
        CHECK(e.violations() == r.violations());
    }

    Params s;
    s.mu = 0.1;
    s.lambda = -0.2;
    CHECK_FALSE(s.violations().empty());
    s.lambda = -0.1;
    CHECK(s.violations().empty());
}
