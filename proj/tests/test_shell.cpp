#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>

#include "fsi/shell.hpp"
#include "property.hpp"

using namespace fsi;

namespace {

ShellSpace random_space(prop::Gen& g)
{
    const int n = g.integer(3, 12);
    std::vector<double> k{0.0};
    for (int i = 0; i < n; ++i) k.push_back(k.back() + g.uniform(0.3, 1.0));
    return ShellSpace(k);
}

Eigen::VectorXd random_coeffs(const ShellSpace& s, prop::Gen& g)
{
    Eigen::VectorXd c(s.dim());
    for (int i = 0; i < c.size(); ++i) c[i] = g.uniform(-1, 1);
    return c;
}

// Five-point Gauss-Legendre on 8 sub-intervals of every knot interval.
template <class F>
double oracle_integral(const ShellSpace& s, F&& f)
{
    static const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                0.9061798459386640};
    static const double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                                0.2369268850561891};
    double acc = 0.0;
    for (int i = 0; i < s.intervals(); ++i) {
        const double a = s.knots()[i], b = s.knots()[i + 1];
        for (int j = 0; j < 8; ++j) {
            const double lo = a + (b - a) * j / 8.0, hi = a + (b - a) * (j + 1) / 8.0;
            for (int q = 0; q < 5; ++q) acc += 0.5 * (hi - lo) * w[q] * f(0.5 * (lo + hi) + 0.5 * (hi - lo) * x[q]);
        }
    }
    return acc;
}

Eigen::VectorXd unit(int n, int j)
{
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[j] = 1.0;
    return e;
}

}  // namespace

TEST_CASE("dimension and knots of the uniform space")
{
    const ShellSpace s = ShellSpace::uniform(8, 2.0);
    CHECK(s.dim() == 6);
    CHECK(s.intervals() == 8);
    CHECK(s.length() == 2.0);
    CHECK(s.knots().size() == 9);
    CHECK(ShellSpace::uniform(2, 1.0).dim() == 0);
    CHECK_THROWS_AS(s.interval_of(-0.01), std::domain_error);
    CHECK_THROWS_AS(s.interval_of(2.01), std::domain_error);
    CHECK(s.interval_of(2.0) == 7);
    CHECK(s.interval_of(0.0) == 0);
}

TEST_CASE("single basis function values")
{
    const double h = 0.25;
    const ShellSpace s = ShellSpace::uniform(4, 1.0);
    const Eigen::VectorXd e0 = unit(s.dim(), 0);
    // first free function is the uniform quadratic B-spline on [0, 3h]
    CHECK(s.evaluate(e0, h)[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(s.evaluate(e0, 2 * h)[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(s.evaluate(e0, 1.5 * h)[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(s.evaluate(e0, 0.5 * h)[2] == doctest::Approx(1.0 / (h * h)).epsilon(1e-12));
    CHECK(s.evaluate(e0, 1.5 * h)[2] == doctest::Approx(-2.0 / (h * h)).epsilon(1e-12));
    CHECK(s.evaluate(e0, 3.5 * h)[0] == 0.0);
    CHECK(s.evaluate(Eigen::VectorXd::Zero(s.dim()), 0.37)[0] == 0.0);
}

TEST_CASE("bending form entry of an interior function")
{
    const int n = 10;
    const double h = 1.0 / n;
    const ShellForms f = ShellSpace::uniform(n, 1.0).forms();
    // B'' = 1, -2, 1 over h^2 on three intervals: h * 6 / h^4
    CHECK(f.B(3, 3) == doctest::Approx(6.0 / (h * h * h)).epsilon(1e-12));
    // int psi = h, int psi^2 = 11 h / 20 for the uniform quadratic B-spline
    CHECK(f.M(3, 3) == doctest::Approx(11.0 * h / 20.0).epsilon(1e-12));
    CHECK((f.B - f.B.transpose()).norm() == 0.0);
    CHECK((f.M - f.M.transpose()).norm() == 0.0);
    CHECK((f.T - f.T.transpose()).norm() == 0.0);
    const Eigen::VectorXd load = ShellSpace::uniform(n, 1.0).load_vector([](double) { return 1.0; });
    for (int j = 0; j < load.size(); ++j) CHECK(load[j] == doctest::Approx(h).epsilon(1e-13));
}

TEST_CASE("property: clamped ends and C1 continuity")
{
    prop::for_all(100, 11, [](prop::Gen& g) {
        const ShellSpace s = random_space(g);
        const Eigen::VectorXd c = random_coeffs(s, g);
        for (double r : {0.0, s.length()}) {
            const auto v = s.evaluate(c, r);
            CHECK(std::abs(v[0]) <= 1e-14);
            CHECK(std::abs(v[1]) <= 1e-13);
        }
        for (int i = 1; i < s.intervals(); ++i) {
            const double r = s.knots()[i], d = 1e-9;
            const auto lo = s.evaluate(c, r - d), hi = s.evaluate(c, r + d);
            CHECK(std::abs(lo[0] - hi[0]) <= 1e-7);
            CHECK(std::abs(lo[1] - hi[1]) <= 1e-6 * (1 + std::abs(lo[2]) + std::abs(hi[2])));
        }
    });
}

TEST_CASE("property: forms integrate exactly against an independent rule")
{
    prop::for_all(30, 12, [](prop::Gen& g) {
        const ShellSpace s = random_space(g);
        const ShellForms f = s.forms();
        for (int i = 0; i < s.dim(); ++i)
            for (int j = 0; j < s.dim(); ++j) {
                const Eigen::VectorXd ei = unit(s.dim(), i), ej = unit(s.dim(), j);
                auto prod = [&](int k) {
                    return oracle_integral(s, [&](double r) { return s.evaluate(ei, r)[k] * s.evaluate(ej, r)[k]; });
                };
                const double scale = 1.0 + std::abs(f.B(i, i));
                CHECK(std::abs(f.M(i, j) - prod(0)) <= 1e-13);
                CHECK(std::abs(f.T(i, j) - prod(1)) <= 1e-13 * (1.0 + std::abs(f.T(i, i))));
                CHECK(std::abs(f.B(i, j) - prod(2)) <= 1e-13 * scale);
            }
    });
}

TEST_CASE("property: eta^T B eta is the sum of squared piecewise second derivatives")
{
    prop::for_all(100, 13, [](prop::Gen& g) {
        const ShellSpace s = random_space(g);
        const Eigen::VectorXd c = random_coeffs(s, g);
        double oracle = 0.0;
        for (int i = 0; i < s.intervals(); ++i) {
            const double l = s.knots()[i + 1] - s.knots()[i];
            const double d2 = s.evaluate(c, s.knots()[i] + 0.5 * l)[2];
            oracle += d2 * d2 * l;
        }
        const double q = c.dot(s.forms().B * c);
        CHECK(std::abs(q - oracle) <= 1e-12 * (1.0 + oracle));
    });
}

TEST_CASE("property: bending form is positive definite on the clamped space")
{
    prop::for_all(30, 14, [](prop::Gen& g) {
        const ShellSpace s = random_space(g);
        if (s.dim() == 0) return;
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.forms().B);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        CHECK(Eigen::LLT<Eigen::MatrixXd>(s.forms().M).info() == Eigen::Success);
    });
}

TEST_CASE("nodal projection")
{
    const std::vector<double> k{0.0, 0.5, 1.0};
    Eigen::VectorXd hat(3);
    hat << 0.0, 1.0, 0.0;
    CHECK(eval_p1(k, hat, 0.25) == doctest::Approx(0.5));
    CHECK(eval_p1(k, hat, 0.5) == 1.0);
    CHECK(eval_p1(k, Eigen::VectorXd::Constant(3, 2.5), 0.8) == doctest::Approx(2.5));

    prop::for_all(50, 15, [](prop::Gen& g) {
        const ShellSpace s = random_space(g);
        const Eigen::VectorXd c = random_coeffs(s, g);
        const Eigen::VectorXd nodal = s.knot_values(c);
        CHECK(nodal[0] == 0.0);
        CHECK(nodal[nodal.size() - 1] == 0.0);
        for (int i = 0; i < nodal.size(); ++i) {
            CHECK(std::abs(nodal[i] - s.evaluate(c, s.knots()[i])[0]) <= 1e-14);
            // idempotent: interpolating the interpolant leaves the nodal values
            CHECK(std::abs(eval_p1(s.knots(), nodal, s.knots()[i]) - nodal[i]) <= 1e-15);
        }
    });
}

TEST_CASE("shell energy")
{
    const ShellSpace s = ShellSpace::uniform(6, 1.0);
    const ShellForms f = s.forms();
    ShellState st{Eigen::VectorXd::Zero(s.dim()), Eigen::VectorXd::Zero(s.dim())};
    CHECK(shell_energy(f, st, 1.0, 1.0) == 0.0);
    st.eta = Eigen::VectorXd::LinSpaced(s.dim(), 0.1, 0.4);
    st.z = Eigen::VectorXd::Constant(s.dim(), 0.3);
    const double e = 0.5 * st.z.dot(f.M * st.z) + 1.5 * st.eta.dot(f.B * st.eta) + 0.25 * st.eta.dot(f.T * st.eta);
    CHECK(shell_energy(f, st, 3.0, 0.5) == doctest::Approx(e).epsilon(1e-14));
}
