#include "fsi/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "fsi/upwind.hpp"

namespace fsi {

namespace {

/// Vertex jump of u across interior edge e at its first vertex.
Vec2 jump_at_first_vertex(const ReferenceMesh& m, const EdgeField& u, int e)
{
    const Edge& ed = m.edges[e];
    Vec2 val[2];
    for (int side = 0; side < 2; ++side) {
        const int c = ed.cell[side];
        int li = 0;
        while (m.cells[c].v[li] != ed.v[0]) ++li;
        val[side] = vertex_value(m, u, c, li);
    }
    return val[1] - val[0];
}

}  // namespace

double fluid_energy(const Discretization& d, const SystemState& s)
{
    const auto& m = d.mesh();
    const auto& p = d.params();
    double E = 0.0;
    for (int c = 0; c < m.num_cells(); ++c) {
        const double rho = s.fluid.rho[c];
        E += s.frame.area[c] *
             (0.5 * rho * cell_mean(m, s.fluid.u, c).squaredNorm() + internal_energy_checked(rho, p));
    }
    return E;
}

double state_energy(const Discretization& d, const SystemState& s)
{
    return fluid_energy(d, s) + shell_energy(d.forms(), s.shell, d.params().alpha, d.params().beta);
}

EnergyLedger initial_ledger(const Discretization& d, const SystemState& s)
{
    EnergyLedger L;
    L.step = s.level;
    L.time = s.time;
    L.E_f = fluid_energy(d, s);
    L.E_s = shell_energy(d.forms(), s.shell, d.params().alpha, d.params().beta);
    L.mass = total_mass(s.frame, s.fluid.rho);
    L.min_rho = s.fluid.rho.minCoeff();
    L.min_gap = gap_guard(s.frame, d.params().H, d.params().delta0).min_gap;
    return L;
}

Renormalization renormalization(const Discretization& d, const SystemState& prev, const SystemState& curr,
                                const std::function<double(double)>& B,
                                const std::function<double(double)>& dB)
{
    const auto& m = d.mesh();
    const auto& p = d.params();
    const double tau = p.tau;
    const double he = std::pow(m.h, p.eps_up);
    const auto V = relative_normal_velocity(m, prev.frame, curr.frame, tau, curr.fluid.u);
    const auto& rk = curr.fluid.rho;
    const auto& rp = prev.fluid.rho;

    Renormalization out;
    double dB_int = 0.0, div_term = 0.0;
    for (int c = 0; c < m.num_cells(); ++c) {
        const double Ak = curr.frame.area[c], Ap = prev.frame.area[c];
        dB_int += B(rk[c]) * Ak - B(rp[c]) * Ap;
        const double divu = cell_gradient(m, curr.frame, curr.fluid.u, c).trace();
        div_term += (rk[c] * dB(rk[c]) - B(rk[c])) * Ak * divu;
        out.D1 += Ap * (B(rp[c]) - B(rk[c]) - dB(rk[c]) * (rp[c] - rk[c]));
    }
    out.D1 /= tau;
    for (int e = 0; e < m.num_edges(); ++e) {
        const Edge& ed = m.edges[e];
        if (ed.cell[1] < 0) continue;
        const double len = curr.frame.edge_length[e];
        for (int side = 0; side < 2; ++side) {
            const int in = ed.cell[side], out_c = ed.cell[1 - side];
            const double v = side == 0 ? V[e] : -V[e];
            const double jr = rk[out_c] - rk[in];
            const double jB = B(rk[out_c]) - B(rk[in]);
            out.D2 += len * (dB(rk[in]) * jr - jB) * (std::min(v, 0.0) - he);
        }
    }
    out.residual = dB_int / tau + div_term + out.D1 + out.D2;
    return out;
}

EnergyLedger energy_ledger(const Discretization& d, const SystemState& prev, const SystemState& curr)
{
    const auto& m = d.mesh();
    const auto& p = d.params();
    const double tau = p.tau;
    const double he = std::pow(m.h, p.eps_up);

    EnergyLedger L = initial_ledger(d, curr);
    const EnergyLedger L0 = initial_ledger(d, prev);
    const auto& u = curr.fluid.u;
    const auto& rho = curr.fluid.rho;

    for (int c = 0; c < m.num_cells(); ++c) {
        const Eigen::Matrix2d G = cell_gradient(m, curr.frame, u, c);
        const Eigen::Matrix2d D = 0.5 * (G + G.transpose());
        L.visc += tau * curr.frame.area[c] * (2.0 * p.mu * D.squaredNorm() + p.lambda * G.trace() * G.trace());
        const double mprev = prev.fluid.rho[c] * prev.frame.area[c];
        L.kinetic_time += 0.5 * mprev * (cell_mean(m, u, c) - cell_mean(m, prev.fluid.u, c)).squaredNorm();
    }

    const auto V = relative_normal_velocity(m, prev.frame, curr.frame, tau, u);
    for (int e = 0; e < m.num_edges(); ++e) {
        const Edge& ed = m.edges[e];
        if (ed.cell[1] < 0) continue;
        const double len = curr.frame.edge_length[e];
        const Vec2 J = jump_at_first_vertex(m, u, e);
        // the jump is affine along the edge with zero mean
        L.penalty += tau * 2.0 * p.mu / m.h * len / 3.0 * J.squaredNorm();
        const int K = ed.cell[0], Lc = ed.cell[1];
        const double rup = V[e] >= 0.0 ? rho[K] : rho[Lc];
        const double rbar = 0.5 * (rho[K] + rho[Lc]);
        const Vec2 jP = cell_mean(m, u, Lc) - cell_mean(m, u, K);
        L.jump_kinetic += tau * len * (0.5 * rup * std::abs(V[e]) + he * rbar) * jP.squaredNorm();
    }

    const auto H = [&](double r) { return internal_energy(r, p.a, p.gamma); };
    const auto dH = [&](double r) { return internal_energy_derivative(r, p.a, p.gamma); };
    const Renormalization ren = renormalization(d, prev, curr, H, dH);
    L.D1 = tau * ren.D1;
    L.D2 = tau * ren.D2;

    const Eigen::VectorXd& z = curr.shell.z;
    const Eigen::VectorXd dz = z - prev.shell.z;
    const ShellForms& F = d.forms();
    L.shell_time = 0.5 * dz.dot(F.M * dz) +
                   0.5 * tau * tau * (p.alpha * z.dot(F.B * z) + p.beta * z.dot(F.T * z));

    const EdgeField f = d.edge_forcing(curr.frame, curr.level);
    for (int c = 0; c < m.num_cells(); ++c) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            const int e = m.cells[c].e[i];
            s += f.row(e).dot(u.row(e));
        }
        L.work_f += tau * rho[c] * curr.frame.area[c] / 3.0 * s;
    }
    if (z.size() > 0) L.work_g = tau * d.shell_load(curr.level).dot(z);

    L.residual = (L.E_f + L.E_s) - (L0.E_f + L0.E_s) + L.dissipation() - L.work_f - L.work_g;
    return L;
}

}  // namespace fsi
