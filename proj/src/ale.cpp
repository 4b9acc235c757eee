#include "fsi/ale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fsi {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c)
{
    return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

Eigen::Matrix2d edge_matrix(const Vec2& a, const Vec2& b, const Vec2& c)
{
    Eigen::Matrix2d E;
    E.col(0) = b - a;
    E.col(1) = c - a;
    return E;
}

}  // namespace

AleFrame make_frame(const ReferenceMesh& m, const Eigen::VectorXd& knot_eta, int level)
{
    if (knot_eta.size() != static_cast<Eigen::Index>(m.knots.size()))
        throw std::invalid_argument("frame needs one eta value per knot");
    for (Eigen::Index i = 0; i < knot_eta.size(); ++i)
        if (!(knot_eta[i] + m.H > 0.0))
            throw InvariantError("column collapses at knot " + std::to_string(i));

    AleFrame f;
    f.level = level;
    f.knot_eta = knot_eta;
    f.x.resize(m.vertices.size());
    for (std::size_t v = 0; v < m.vertices.size(); ++v) {
        const Vec2& p = m.vertices[v];
        f.x[v] = Vec2(p.x(), mapped_height(p.y(), knot_eta[m.vertex_knot[v]], m.H));
    }
    const int nc = m.num_cells();
    f.area.resize(nc);
    f.det.resize(nc);
    f.jac.resize(nc);
    for (int c = 0; c < nc; ++c) {
        const auto& t = m.cells[c].v;
        f.area[c] = signed_area(f.x[t[0]], f.x[t[1]], f.x[t[2]]);
        if (!(f.area[c] > 0.0)) throw InvariantError("inverted cell " + std::to_string(c));
        const Eigen::Matrix2d Eh = edge_matrix(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]);
        const Eigen::Matrix2d Ek = edge_matrix(f.x[t[0]], f.x[t[1]], f.x[t[2]]);
        f.jac[c] = Ek * Eh.inverse();
        f.det[c] = f.jac[c].determinant();
    }
    f.edge_length.resize(m.num_edges());
    f.edge_normal.resize(m.num_edges());
    for (int e = 0; e < m.num_edges(); ++e) {
        const auto& ed = m.edges[e];
        const Vec2 d = f.x[ed.v[1]] - f.x[ed.v[0]];
        f.edge_length[e] = d.norm();
        Vec2 n(d.y(), -d.x());
        n /= f.edge_length[e];
        const Cell& K = m.cells[ed.cell[0]];
        const Vec2 centroid = (f.x[K.v[0]] + f.x[K.v[1]] + f.x[K.v[2]]) / 3.0;
        if (n.dot(f.x[ed.v[0]] - centroid) < 0.0) n = -n;
        f.edge_normal[e] = n;
    }
    return f;
}

AleFrame reference_frame(const ReferenceMesh& m)
{
    return make_frame(m, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.knots.size())), 0);
}

std::optional<Location> locate(const ReferenceMesh& m, const std::vector<Vec2>& X, const Vec2& p)
{
    const double tol = 1e-12;
    for (int c = 0; c < m.num_cells(); ++c) {
        const auto& t = m.cells[c].v;
        const double A = signed_area(X[t[0]], X[t[1]], X[t[2]]);
        Eigen::Vector3d b(signed_area(p, X[t[1]], X[t[2]]) / A, signed_area(X[t[0]], p, X[t[2]]) / A,
                          signed_area(X[t[0]], X[t[1]], p) / A);
        if (b.minCoeff() >= -tol) return Location{c, b};
    }
    return std::nullopt;
}

Vec2 ale_map(const ReferenceMesh& m, const AleFrame& f, const Vec2& xhat)
{
    auto loc = locate(m, m.vertices, xhat);
    if (!loc) throw std::domain_error("point outside the reference domain");
    const auto& t = m.cells[loc->cell].v;
    return loc->bary[0] * f.x[t[0]] + loc->bary[1] * f.x[t[1]] + loc->bary[2] * f.x[t[2]];
}

Vec2 ale_inverse(const ReferenceMesh& m, const AleFrame& f, const Vec2& x)
{
    auto loc = locate(m, f.x, x);
    if (!loc) throw std::domain_error("point outside the current domain");
    const auto& t = m.cells[loc->cell].v;
    return loc->bary[0] * m.vertices[t[0]] + loc->bary[1] * m.vertices[t[1]] +
           loc->bary[2] * m.vertices[t[2]];
}

std::vector<double> det_jacobian(const AleFrame& fi, const AleFrame& fj)
{
    std::vector<double> out(fi.area.size());
    for (std::size_t c = 0; c < out.size(); ++c) {
        out[c] = fj.area[c] / fi.area[c];
        if (!(out[c] > 0.0)) throw InvariantError("non-positive Jacobian determinant");
    }
    return out;
}

std::vector<Vec2> mesh_velocity_vertices(const AleFrame& prev, const AleFrame& curr, double tau)
{
    std::vector<Vec2> w(curr.x.size());
    for (std::size_t v = 0; v < w.size(); ++v) w[v] = (curr.x[v] - prev.x[v]) / tau;
    return w;
}

Vec2 mesh_velocity(const ReferenceMesh& m, const AleFrame& prev, const AleFrame& curr, double tau,
                   const Vec2& x)
{
    auto loc = locate(m, curr.x, x);
    if (!loc) throw std::domain_error("point outside the current domain");
    const auto& t = m.cells[loc->cell].v;
    Vec2 w = Vec2::Zero();
    for (int i = 0; i < 3; ++i) w += loc->bary[i] * (curr.x[t[i]] - prev.x[t[i]]) / tau;
    return w;
}

std::vector<double> mesh_velocity_divergence(const ReferenceMesh& m, const AleFrame& prev,
                                             const AleFrame& curr, double tau)
{
    const auto w = mesh_velocity_vertices(prev, curr, tau);
    std::vector<double> div(m.num_cells());
    for (int c = 0; c < m.num_cells(); ++c) {
        const auto& t = m.cells[c].v;
        const Eigen::Matrix2d E = edge_matrix(curr.x[t[0]], curr.x[t[1]], curr.x[t[2]]);
        Eigen::Matrix2d W;
        W.col(0) = w[t[1]] - w[t[0]];
        W.col(1) = w[t[2]] - w[t[0]];
        div[c] = (W * E.inverse()).trace();
    }
    return div;
}

double geometric_conservation_residual(const ReferenceMesh& m, const AleFrame& prev,
                                       const AleFrame& curr, double tau)
{
    const auto w = mesh_velocity_vertices(prev, curr, tau);
    double worst = 0.0;
    for (int c = 0; c < m.num_cells(); ++c) {
        const auto& t = m.cells[c].v;
        double flux = 0.0;
        for (int i = 0; i < 3; ++i) {
            const Vec2 &p = curr.x[t[(i + 1) % 3]], &q = curr.x[t[(i + 2) % 3]];
            const Vec2 nl(q.y() - p.y(), p.x() - q.x());  // counterclockwise: outward times length
            flux += nl.dot(0.5 * (w[t[(i + 1) % 3]] + w[t[(i + 2) % 3]]));
        }
        const double r = (curr.area[c] - prev.area[c]) / tau - flux;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

GapReport gap_guard(const AleFrame& f, double H, double delta0)
{
    GapReport g;
    g.min_gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < f.knot_eta.size(); ++i) {
        const double gap = f.knot_eta[i] + H;
        if (gap < g.min_gap) {
            g.min_gap = gap;
            g.knot = static_cast<int>(i);
            g.value = f.knot_eta[i];
        }
    }
    // compared on eta itself so that eta == delta0 - H is admitted exactly
    g.admissible = g.value >= delta0 - H;
    return g;
}

}  // namespace fsi
