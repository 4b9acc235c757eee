#include "fsi/fluid_spaces.hpp"

#include "fsi/quadrature.hpp"

namespace fsi {

Eigen::VectorXd project_cells(const ReferenceMesh& m, const AleFrame& f,
                              const std::function<double(const Vec2&)>& g)
{
    Eigen::VectorXd out(m.num_cells());
    for (int c = 0; c < m.num_cells(); ++c) {
        const auto& t = m.cells[c].v;
        double s = 0.0;
        for (const auto& q : quad::triangle7())
            s += q.w * g(q.l0 * f.x[t[0]] + q.l1 * f.x[t[1]] + q.l2 * f.x[t[2]]);
        out[c] = s;
    }
    return out;
}

EdgeField project_edges(const ReferenceMesh& m, const AleFrame& f,
                        const std::function<Vec2(const Vec2&)>& g)
{
    EdgeField out(m.num_edges(), 2);
    for (int e = 0; e < m.num_edges(); ++e) {
        const Vec2 &p = f.x[m.edges[e].v[0]], &q = f.x[m.edges[e].v[1]];
        Vec2 s = Vec2::Zero();
        for (const auto& gp : quad::gauss3()) s += gp.w * g(p + gp.s * (q - p));
        out.row(e) = s.transpose();
    }
    return out;
}

Vec2 scaled_outward_normal(const ReferenceMesh& m, const AleFrame& f, int c, int i)
{
    const int e = m.cells[c].e[i];
    const double sign = m.edges[e].cell[0] == c ? 1.0 : -1.0;
    return sign * f.edge_length[e] * f.edge_normal[e];
}

Eigen::Matrix2d cell_gradient(const ReferenceMesh& m, const AleFrame& f, const EdgeField& u, int c)
{
    Eigen::Matrix2d G = Eigen::Matrix2d::Zero();
    for (int i = 0; i < 3; ++i) {
        const Vec2 ue = u.row(m.cells[c].e[i]).transpose();
        G += ue * scaled_outward_normal(m, f, c, i).transpose();
    }
    return G / f.area[c];
}

Vec2 cell_mean(const ReferenceMesh& m, const EdgeField& u, int c)
{
    const auto& e = m.cells[c].e;
    return (u.row(e[0]) + u.row(e[1]) + u.row(e[2])).transpose() / 3.0;
}

Vec2 vertex_value(const ReferenceMesh& m, const EdgeField& u, int c, int i)
{
    // the two edges through vertex i minus the one opposite it
    const auto& e = m.cells[c].e;
    return (u.row(e[(i + 1) % 3]) + u.row(e[(i + 2) % 3]) - u.row(e[i])).transpose();
}

Vec2 evaluate(const ReferenceMesh& m, const EdgeField& u, int c, const Eigen::Vector3d& b)
{
    Vec2 v = Vec2::Zero();
    for (int i = 0; i < 3; ++i) v += b[i] * vertex_value(m, u, c, i);
    return v;
}

BrokenNorms broken_norms(const ReferenceMesh& m, const AleFrame& f, const EdgeField& u)
{
    BrokenNorms n;
    for (int c = 0; c < m.num_cells(); ++c) n.grad += f.area[c] * cell_gradient(m, f, u, c).squaredNorm();
    for (int e = 0; e < m.num_edges(); ++e) {
        const Edge& ed = m.edges[e];
        if (ed.cell[1] < 0) continue;
        Vec2 jp[2];
        for (int s = 0; s < 2; ++s) {
            const int vtx = ed.v[s];
            Vec2 val[2];
            for (int side = 0; side < 2; ++side) {
                const int c = ed.cell[side];
                int li = 0;
                while (m.cells[c].v[li] != vtx) ++li;
                val[side] = vertex_value(m, u, c, li);
            }
            jp[s] = val[1] - val[0];
        }
        // the jump is affine along the edge
        const double len = f.edge_length[e];
        n.jump += len / 3.0 * (jp[0].squaredNorm() + jp[0].dot(jp[1]) + jp[1].squaredNorm()) / m.h;
    }
    return n;
}

double total_mass(const AleFrame& f, const Eigen::VectorXd& rho)
{
    double s = 0.0;
    for (Eigen::Index c = 0; c < rho.size(); ++c) s += f.area[c] * rho[c];
    return s;
}

}  // namespace fsi
