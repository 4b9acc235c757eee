#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fsi/dual.hpp"
#include "fsi/upwind.hpp"
#include "property.hpp"

using namespace fsi;

TEST_CASE("upwind flux hand values")
{
    CHECK(upwind_flux(2.0, 2.0, 0.0, 0.3) == 0.0);
    CHECK(upwind_flux(1.0, 3.0, 2.0, 0.0) == 2.0);
    // 3 (-2) - 0.1 (3 - 1)
    CHECK(upwind_flux(1.0, 3.0, -2.0, std::pow(0.1, 1.0)) == doctest::Approx(-6.2).epsilon(1e-15));
}

TEST_CASE("property: upwind form equals central form plus dissipation")
{
    prop::for_all(10000, 41, [](prop::Gen& g) {
        const double ri = g.uniform(0, 5), ro = g.uniform(0, 5), vn = g.uniform(-3, 3), he = g.uniform(0, 1);
        const double central = 0.5 * (ri + ro) * vn - 0.5 * std::abs(vn) * (ro - ri) - he * (ro - ri);
        CHECK(std::abs(upwind_flux(ri, ro, vn, he) - central) <= 1e-14);
    });
}

TEST_CASE("smoothed absolute value only changes derivatives")
{
    const Dual<1> z = kink_abs(Dual<1>::variable(0.0, 0));
    CHECK(z.v == 0.0);
    CHECK(z.d[0] == 0.0);
    const Dual<1> n = kink_abs(Dual<1>::variable(-0.5, 0));
    CHECK(n.v == 0.5);
    CHECK(n.d[0] == doctest::Approx(-1.0).epsilon(1e-15));
    prop::for_all(200, 42, [](prop::Gen& g) {
        const double x = g.uniform(-10, 10);
        CHECK(kink_abs(Dual<1>::variable(x, 0)).v == std::abs(x));
    });
}

TEST_CASE("two-cell oracle")
{
    const ReferenceMesh m = mesh_from_triangles({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 3}, {1, 2, 3}}, 1.0, 1.0);
    const AleFrame f = reference_frame(m);
    int diag = -1;
    for (int e = 0; e < m.num_edges(); ++e)
        if (m.edges[e].cls == EdgeClass::Interior) diag = e;
    REQUIRE(diag >= 0);
    const int in = m.edges[diag].cell[0], out = m.edges[diag].cell[1];
    const double len = std::sqrt(2.0), h = 0.5, eps = 1.0;
    prop::for_all(200, 43, [&](prop::Gen& g) {
        Eigen::VectorXd r(2);
        r[in] = g.uniform(0.1, 3);
        r[out] = g.uniform(0.1, 3);
        const double vn = g.uniform(-2, 2);
        std::vector<double> V(m.num_edges(), 0.0);
        V[diag] = vn;
        const FluxField F = upwind_divergence(m, f, r, V, h, eps);
        // mass leaving "in" through the diagonal, by hand
        const double up = vn > 0 ? r[in] * vn : r[out] * vn;
        const double flux = len * (up - h * (r[out] - r[in]));
        CHECK(F.flux[diag] == doctest::Approx(flux).epsilon(1e-14));
        CHECK(F.div[in] == doctest::Approx(flux / 0.5).epsilon(1e-14));
        CHECK(F.div[out] == doctest::Approx(-flux / 0.5).epsilon(1e-14));
        for (int e = 0; e < m.num_edges(); ++e)
            if (e != diag) CHECK(F.flux[e] == 0.0);
    });
}

TEST_CASE("property: upwind divergence is globally conservative")
{
    prop::for_all(100, 44, [](prop::Gen& g) {
        const int n = g.integer(2, 8);
        const ReferenceMesh m = build_reference_mesh(1.0, 1.0, n, g.integer(2, 8));
        const ShellSpace s = ShellSpace::uniform(n, 1.0);
        Eigen::VectorXd c(s.dim());
        for (int i = 0; i < c.size(); ++i) c[i] = g.uniform(-0.3, 0.3);
        const AleFrame f = make_frame(m, s.knot_values(c), 1);
        Eigen::VectorXd r(m.num_cells());
        for (int k = 0; k < r.size(); ++k) r[k] = g.uniform(0.1, 3);
        std::vector<double> V(m.num_edges());
        for (auto& v : V) v = g.uniform(-2, 2);
        const FluxField F = upwind_divergence(m, f, r, V, m.h, g.uniform(0.1, 1.5));
        double total = 0.0, scale = 0.0;
        for (int k = 0; k < m.num_cells(); ++k) {
            total += f.area[k] * F.div[k];
            scale += f.area[k] * std::abs(F.div[k]);
        }
        CHECK(std::abs(total) <= 1e-12 * std::max(1.0, scale));
        for (int e = 0; e < m.num_edges(); ++e)
            if (m.edges[e].cls != EdgeClass::Interior) CHECK(F.flux[e] == 0.0);
    });
}

TEST_CASE("uniform states are transported exactly")
{
    const ReferenceMesh m = build_reference_mesh(1.0, 1.0, 5, 4);
    const AleFrame f = reference_frame(m);
    const Eigen::VectorXd r = Eigen::VectorXd::Constant(m.num_cells(), 1.7);
    const FluxField still = upwind_divergence(m, f, r, std::vector<double>(m.num_edges(), 0.0), m.h, 0.4);
    CHECK(still.div.cwiseAbs().maxCoeff() == 0.0);
    // constant field, static frame: <v.n> sums to zero around every cell
    EdgeField u(m.num_edges(), 2);
    for (int e = 0; e < m.num_edges(); ++e) u.row(e) = Eigen::RowVector2d(0.3, -0.8);
    std::vector<double> V = relative_normal_velocity(m, f, f, 0.1, u);
    const FluxField F = upwind_divergence(m, f, r, V, m.h, 0.4);
    double boundary = 0.0;
    for (int e = 0; e < m.num_edges(); ++e)
        if (m.edges[e].cls != EdgeClass::Interior) boundary += m.edge_length[e] * std::abs(V[e]);
    // only the exterior edges carry net flux, and those are excluded
    for (int k = 0; k < m.num_cells(); ++k) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            const int e = m.cells[k].e[i];
            if (m.edges[e].cls != EdgeClass::Interior) continue;
            s += (m.edges[e].cell[0] == k ? 1.0 : -1.0) * m.edge_length[e] * V[e];
        }
        double ext = 0.0;
        for (int i = 0; i < 3; ++i) {
            const int e = m.cells[k].e[i];
            if (m.edges[e].cls == EdgeClass::Interior) continue;
            ext += m.edge_length[e] * V[e];
        }
        CHECK(F.div[k] == doctest::Approx(1.7 * s / m.cell_area[k]).epsilon(1e-12));
        CHECK(std::abs(s + ext) <= 1e-14);
    }
    CHECK(boundary > 0.0);
}

TEST_CASE("relative normal velocity subtracts the mesh motion")
{
    const ReferenceMesh m = build_reference_mesh(1.0, 1.0, 4, 4);
    const AleFrame f0 = reference_frame(m);
    const AleFrame f1 = make_frame(m, Eigen::VectorXd::Constant(5, 0.1), 1);
    const double tau = 0.1;
    // u equal to the mesh velocity (0, y_hat) in the stretched frame: no relative flow
    EdgeField u(m.num_edges(), 2);
    for (int e = 0; e < m.num_edges(); ++e) {
        const Vec2 mid = 0.5 * (f1.x[m.edges[e].v[0]] + f1.x[m.edges[e].v[1]]);
        u.row(e) = Eigen::RowVector2d(0.0, mid.y() / 1.1 * 0.1 / tau);
    }
    for (double v : relative_normal_velocity(m, f0, f1, tau, u)) CHECK(std::abs(v) <= 1e-14);
}
