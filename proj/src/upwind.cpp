#include "fsi/upwind.hpp"

namespace fsi {

std::vector<double> relative_normal_velocity(const ReferenceMesh& m, const AleFrame& prev,
                                             const AleFrame& curr, double tau, const EdgeField& u)
{
    const auto w = mesh_velocity_vertices(prev, curr, tau);
    std::vector<double> V(m.num_edges());
    for (int e = 0; e < m.num_edges(); ++e) {
        const Vec2 we = 0.5 * (w[m.edges[e].v[0]] + w[m.edges[e].v[1]]);
        V[e] = (u.row(e).transpose() - we).dot(curr.edge_normal[e]);
    }
    return V;
}

FluxField upwind_divergence(const ReferenceMesh& m, const AleFrame& curr, const Eigen::VectorXd& r,
                            const std::vector<double>& V, double h, double eps)
{
    const double he = std::pow(h, eps);
    FluxField out;
    out.flux.assign(m.num_edges(), 0.0);
    out.div = Eigen::VectorXd::Zero(m.num_cells());
    for (int e = 0; e < m.num_edges(); ++e) {
        const Edge& ed = m.edges[e];
        if (ed.cell[1] < 0) continue;
        const int K = ed.cell[0], L = ed.cell[1];
        const double F = curr.edge_length[e] * upwind_flux(r[K], r[L], V[e], he);
        out.flux[e] = F;
        out.div[K] += F;
        out.div[L] -= F;
    }
    for (int c = 0; c < m.num_cells(); ++c) out.div[c] /= curr.area[c];
    return out;
}

}  // namespace fsi
