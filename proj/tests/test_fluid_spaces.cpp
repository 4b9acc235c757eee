#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fsi/fluid_spaces.hpp"
#include "fsi/quadrature.hpp"
#include "property.hpp"

using namespace fsi;

namespace {

ReferenceMesh unit_square_two_cells()
{
    return mesh_from_triangles({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 3}, {1, 2, 3}}, 1.0, 1.0);
}

AleFrame random_frame(const ReferenceMesh& m, prop::Gen& g)
{
    const ShellSpace s = ShellSpace::uniform(static_cast<int>(m.knots.size()) - 1, m.L);
    Eigen::VectorXd c(s.dim());
    for (int i = 0; i < c.size(); ++i) c[i] = g.uniform(-0.4, 0.4) * m.H;
    return make_frame(m, s.knot_values(c), 1);
}

EdgeField random_field(const ReferenceMesh& m, prop::Gen& g)
{
    EdgeField u(m.num_edges(), 2);
    for (int e = 0; e < m.num_edges(); ++e) u.row(e) = Eigen::RowVector2d(g.uniform(-1, 1), g.uniform(-1, 1));
    return u;
}

}  // namespace

TEST_CASE("cell projection")
{
    const ReferenceMesh m = unit_square_two_cells();
    const AleFrame f = reference_frame(m);
    const Eigen::VectorXd c = project_cells(m, f, [](const Vec2&) { return 2.5; });
    CHECK(c[0] == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(c[1] == doctest::Approx(2.5).epsilon(1e-15));
    // cell 0 is the unit reference triangle (0,0), (1,0), (0,1)
    const Eigen::VectorXd x = project_cells(m, f, [](const Vec2& p) { return p.x(); });
    CHECK(x[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(total_mass(f, x) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("property: cell projection is idempotent")
{
    prop::for_all(30, 31, [](prop::Gen& g) {
        const int n = g.integer(2, 6);
        const ReferenceMesh m = build_reference_mesh(1.0, 1.0, n, n);
        const AleFrame f = random_frame(m, g);
        const double k = g.uniform(1, 4);
        const Eigen::VectorXd once = project_cells(m, f, [&](const Vec2& p) { return std::sin(k * p.x()) * p.y(); });
        const Eigen::VectorXd twice = project_cells(m, f, [&](const Vec2& p) {
            const auto loc = locate(m, f.x, p);
            return once[loc->cell];
        });
        CHECK((once - twice).cwiseAbs().maxCoeff() <= 1e-13);
    });
}

TEST_CASE("edge projection")
{
    const ReferenceMesh m = unit_square_two_cells();
    const AleFrame f = reference_frame(m);
    const EdgeField c = project_edges(m, f, [](const Vec2&) { return Vec2(1.5, -2.0); });
    for (int e = 0; e < m.num_edges(); ++e) {
        CHECK(c(e, 0) == doctest::Approx(1.5).epsilon(1e-15));
        CHECK(c(e, 1) == doctest::Approx(-2.0).epsilon(1e-15));
    }
    const EdgeField y = project_edges(m, f, [](const Vec2& p) { return Vec2(p.y(), 0.0); });
    for (int e = 0; e < m.num_edges(); ++e) {
        const double mid = 0.5 * (m.vertices[m.edges[e].v[0]].y() + m.vertices[m.edges[e].v[1]].y());
        CHECK(y(e, 0) == doctest::Approx(mid).epsilon(1e-15));
        CHECK(y(e, 1) == 0.0);
    }
}

TEST_CASE("property: affine fields are reproduced on deformed frames")
{
    prop::for_all(50, 32, [](prop::Gen& g) {
        const int n = g.integer(2, 6);
        const ReferenceMesh m = build_reference_mesh(1.0, 1.0, n, g.integer(2, 6));
        const AleFrame f = random_frame(m, g);
        Eigen::Matrix2d A;
        A << g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1);
        const Vec2 b(g.uniform(-1, 1), g.uniform(-1, 1));
        const EdgeField u = project_edges(m, f, [&](const Vec2& p) { return Vec2(A * p + b); });
        // projecting a V_h function again leaves its dofs unchanged
        const EdgeField u2 = project_edges(m, f, [&](const Vec2& p) {
            const auto loc = locate(m, f.x, p);
            return evaluate(m, u, loc->cell, loc->bary);
        });
        CHECK((u - u2).cwiseAbs().maxCoeff() <= 1e-12);
        for (int c = 0; c < m.num_cells(); ++c) {
            CHECK((cell_gradient(m, f, u, c) - A).cwiseAbs().maxCoeff() <= 1e-12);
            const auto& v = m.cells[c].v;
            for (int i = 0; i < 3; ++i) CHECK((vertex_value(m, u, c, i) - (A * f.x[v[i]] + b)).norm() <= 1e-12);
            const Vec2 cen = (f.x[v[0]] + f.x[v[1]] + f.x[v[2]]) / 3.0;
            CHECK((cell_mean(m, u, c) - (A * cen + b)).norm() <= 1e-12);
        }
        const BrokenNorms nrm = broken_norms(m, f, u);
        CHECK(nrm.jump <= 1e-22);
    });
}

TEST_CASE("discrete derivatives of special fields")
{
    const ReferenceMesh m = build_reference_mesh(1.0, 1.0, 3, 3);
    const AleFrame f = reference_frame(m);
    const EdgeField c = project_edges(m, f, [](const Vec2&) { return Vec2(3.0, 1.0); });
    const EdgeField x = project_edges(m, f, [](const Vec2& p) { return Vec2(p.x(), 0.0); });
    const EdgeField rot = project_edges(m, f, [](const Vec2& p) { return Vec2(-p.y(), p.x()); });
    for (int k = 0; k < m.num_cells(); ++k) {
        CHECK(cell_gradient(m, f, c, k).norm() <= 1e-13);
        const Eigen::Matrix2d gx = cell_gradient(m, f, x, k);
        CHECK(gx(0, 0) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(gx(0, 1)) + std::abs(gx(1, 0)) + std::abs(gx(1, 1)) <= 1e-13);
        const Eigen::Matrix2d gr = cell_gradient(m, f, rot, k);
        CHECK(std::abs(gr.trace()) <= 1e-13);
        CHECK((gr + gr.transpose()).norm() <= 1e-13);
    }
}

TEST_CASE("broken norms")
{
    const ReferenceMesh m = unit_square_two_cells();
    const AleFrame f = reference_frame(m);
    const BrokenNorms zero = broken_norms(m, f, EdgeField::Zero(m.num_edges(), 2));
    CHECK(zero.grad == 0.0);
    CHECK(zero.jump == 0.0);
    const EdgeField x = project_edges(m, f, [](const Vec2& p) { return Vec2(p.x(), 0.0); });
    const BrokenNorms nx = broken_norms(m, f, x);
    CHECK(nx.grad == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(nx.jump <= 1e-28);

    prop::for_all(50, 33, [](prop::Gen& g) {
        const ReferenceMesh r = build_reference_mesh(1.0, 1.0, g.integer(2, 5), g.integer(2, 5));
        const AleFrame fr = random_frame(r, g);
        const EdgeField u = random_field(r, g);
        const BrokenNorms a = broken_norms(r, fr, u), b = broken_norms(r, fr, 2.0 * u);
        CHECK(b.grad == doctest::Approx(4.0 * a.grad).epsilon(1e-13));
        CHECK(b.jump == doctest::Approx(4.0 * a.jump).epsilon(1e-13));
    });
}

TEST_CASE("property: jumps have zero mean on interior edges")
{
    prop::for_all(100, 34, [](prop::Gen& g) {
        const ReferenceMesh m = build_reference_mesh(1.0, 1.0, g.integer(2, 5), g.integer(2, 5));
        const EdgeField u = random_field(m, g);
        for (const Edge& e : m.edges) {
            if (e.cell[1] < 0) continue;
            Vec2 mean = Vec2::Zero();
            for (int s = 0; s < 2; ++s)
                for (int side = 0; side < 2; ++side) {
                    const int c = e.cell[side];
                    int li = 0;
                    while (m.cells[c].v[li] != e.v[s]) ++li;
                    mean += (side ? 0.5 : -0.5) * vertex_value(m, u, c, li);
                }
            CHECK(mean.norm() <= 1e-14);
        }
    });
}

TEST_CASE("property: jump product rule")
{
    prop::for_all(1000, 35, [](prop::Gen& g) {
        const double ui = g.uniform(-2, 2), uo = g.uniform(-2, 2), vi = g.uniform(-2, 2), vo = g.uniform(-2, 2);
        const double lhs = uo * vo - ui * vi;
        const double rhs = ui * (vo - vi) + (uo - ui) * vo;
        CHECK(std::abs(lhs - rhs) <= 1e-14);
    });
}

TEST_CASE("cell projection error decays at first order")
{
    auto f = [](const Vec2& p) { return std::sin(2.0 * p.x()) * std::cos(p.y()) + p.x() * p.y(); };
    std::vector<double> err, hs;
    for (int n : {4, 8, 16, 32}) {
        const ReferenceMesh m = build_reference_mesh(1.0, 1.0, n, n);
        const AleFrame fr = reference_frame(m);
        const Eigen::VectorXd pf = project_cells(m, fr, f);
        double e2 = 0.0;
        for (int c = 0; c < m.num_cells(); ++c) {
            const auto& v = m.cells[c].v;
            for (const auto& q : quad::triangle7()) {
                const Vec2 p = q.l0 * fr.x[v[0]] + q.l1 * fr.x[v[1]] + q.l2 * fr.x[v[2]];
                e2 += q.w * fr.area[c] * std::pow(pf[c] - f(p), 2);
            }
        }
        err.push_back(std::sqrt(e2));
        hs.push_back(m.h);
    }
    for (std::size_t i = 1; i < err.size(); ++i) {
        const double slope = std::log2(err[i - 1] / err[i]) / std::log2(hs[i - 1] / hs[i]);
        CAPTURE(i);
        CHECK(slope >= 0.9);
    }
}

TEST_CASE("scaled outward normals close every cell")
{
    prop::for_all(20, 36, [](prop::Gen& g) {
        const ReferenceMesh m = build_reference_mesh(1.0, 1.0, 4, 4);
        const AleFrame f = random_frame(m, g);
        for (int c = 0; c < m.num_cells(); ++c) {
            const Vec2 s = scaled_outward_normal(m, f, c, 0) + scaled_outward_normal(m, f, c, 1) +
                           scaled_outward_normal(m, f, c, 2);
            CHECK(s.norm() <= 1e-14);
            const auto& v = m.cells[c].v;
            const Vec2 cen = (f.x[v[0]] + f.x[v[1]] + f.x[v[2]]) / 3.0;
            // outward: points away from the vertex opposite the edge
            for (int i = 0; i < 3; ++i) CHECK(scaled_outward_normal(m, f, c, i).dot(cen - f.x[v[i]]) > 0.0);
        }
    });
}
