#include "fsi/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fsi/diagnostics.hpp"
#include "fsi/format.hpp"
#include "fsi/dual.hpp"
#include "fsi/quadrature.hpp"

namespace fsi {

namespace {

using D2 = Dual<2>;
constexpr double pi = std::numbers::pi;

void check_layer(const std::vector<SystemState>& traj, const TestFunctions& tf, double H)
{
    if (!(tf.y0 > 0.0 && tf.y1 > tf.y0)) throw std::invalid_argument("cutoff layer must satisfy 0 < y0 < y1");
    for (const auto& s : traj)
        if (s.frame.knot_eta.minCoeff() + H <= tf.y1)
            throw std::domain_error("test-function layer reaches the shell at level " + std::to_string(s.level));
}

}  // namespace

double TestFunctions::theta(double t) const
{
    if (t >= T) return 0.0;
    const double s = 1.0 - t / T;
    return s * s * s;
}

template <class S>
S TestFunctions::cutoff(const S& y) const
{
    const S q = (y - y0) / (y1 - y0);
    if (value(q) <= 0.0) return S(0.0);
    if (value(q) >= 1.0) return S(1.0);
    return q * q * q * (10.0 + q * (-15.0 + 6.0 * q));
}

template double TestFunctions::cutoff(const double&) const;
template Dual<1> TestFunctions::cutoff(const Dual<1>&) const;
template Dual<2> TestFunctions::cutoff(const Dual<2>&) const;

void TestFunctions::continuity(int i, double t, const Vec2& x, double& phi, Vec2& grad) const
{
    const D2 X = D2::variable(x.x(), 0), Y = D2::variable(x.y(), 1);
    D2 f;
    switch (i) {
    case 0: f = cos(pi * X / L) * cos(pi * Y / H); break;
    case 1: f = sin(2.0 * pi * X / L) * Y / H; break;
    case 2: f = (X / L) * (X / L) * (1.0 + Y / H); break;
    default: throw std::out_of_range("continuity test index");
    }
    const double th = theta(t);
    phi = th * f.v;
    grad = th * Vec2(f.d[0], f.d[1]);
}

void TestFunctions::momentum(int i, double t, const Vec2& x, Vec2& Psi, Eigen::Matrix2d& grad) const
{
    const D2 X = D2::variable(x.x(), 0), Y = D2::variable(x.y(), 1);
    const D2 chi = cutoff(Y);
    D2 c0, c1;
    switch (i) {
    case 0: {
        const D2 s = sin(pi * X / L);
        c0 = D2(0.0);
        c1 = s * s * chi;
        break;
    }
    case 1: {
        const D2 s = sin(2.0 * pi * X / L);
        c0 = (1.0 - chi) * sin(pi * X / L) * sin(pi * Y / H);
        c1 = s * s * chi;
        break;
    }
    case 2:
        c0 = (1.0 - chi) * sin(2.0 * pi * X / L) * sin(pi * Y / H);
        c1 = (1.0 - chi) * sin(pi * X / L) * sin(2.0 * pi * Y / H);
        break;
    default: throw std::out_of_range("momentum test index");
    }
    const double th = theta(t);
    Psi = th * Vec2(c0.v, c1.v);
    grad << c0.d[0], c0.d[1], c1.d[0], c1.d[1];
    grad *= th;
}

void TestFunctions::shell(int i, double t, double r, double& psi, double& d1, double& d2) const
{
    // sin^2(m pi r / L): value, first and second derivative
    const double th = theta(t);
    if (i == 2) {
        psi = d1 = d2 = 0.0;
        return;
    }
    const double k = (i == 0 ? 1.0 : 2.0) * pi / L;
    const double s = std::sin(k * r);
    psi = th * s * s;
    d1 = th * k * std::sin(2.0 * k * r);
    d2 = th * 2.0 * k * k * std::cos(2.0 * k * r);
}

double continuity_defect(const Discretization& d, const std::vector<SystemState>& traj,
                         const TestFunctions& tf, int i)
{
    const ReferenceMesh& m = d.mesh();
    const double tau = d.params().tau;
    double R = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const SystemState& s = traj[k];
        const double t0 = static_cast<double>(k) * tau, t1 = t0 + tau;
        if (t0 >= tf.T) break;
        for (int c = 0; c < m.num_cells(); ++c) {
            const auto& v = m.cells[c].v;
            const double A = s.frame.area[c], rho = s.fluid.rho[c];
            for (const auto& q : quad::triangle7()) {
                const Vec2 x = q.l0 * s.frame.x[v[0]] + q.l1 * s.frame.x[v[1]] + q.l2 * s.frame.x[v[2]];
                const Vec2 u = evaluate(m, s.fluid.u, c, Eigen::Vector3d(q.l0, q.l1, q.l2));
                double p0, p1;
                Vec2 g;
                if (k == 0) {
                    tf.continuity(i, 0.0, x, p0, g);
                    R -= q.w * A * rho * p0;
                }
                tf.continuity(i, t0, x, p0, g);
                tf.continuity(i, t1, x, p1, g);
                double adv = 0.0;
                for (const auto& gt : quad::gauss3()) {
                    double ph;
                    tf.continuity(i, t0 + gt.s * tau, x, ph, g);
                    adv += gt.w * tau * u.dot(g);
                }
                R -= q.w * A * rho * ((p1 - p0) + adv);
            }
        }
    }
    return std::abs(R);
}

double momentum_defect(const Discretization& d, const std::vector<SystemState>& traj,
                       const TestFunctions& tf, int i)
{
    const ReferenceMesh& m = d.mesh();
    const Params& p = d.params();
    const ShellSpace& sp = d.shell_space();
    const Forcing& F = d.forcing();
    const double tau = p.tau;
    check_layer(traj, tf, p.H);

    double R = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const SystemState& s = traj[k];
        const double t0 = static_cast<double>(k) * tau, t1 = t0 + tau;
        if (t0 >= tf.T) break;
        for (int c = 0; c < m.num_cells(); ++c) {
            const auto& v = m.cells[c].v;
            const double A = s.frame.area[c], rho = s.fluid.rho[c];
            const Eigen::Matrix2d G = cell_gradient(m, s.frame, s.fluid.u, c);
            const Eigen::Matrix2d D = 0.5 * (G + G.transpose());
            const double pr = pressure_checked(rho, p);
            for (const auto& q : quad::triangle7()) {
                const Vec2 x = q.l0 * s.frame.x[v[0]] + q.l1 * s.frame.x[v[1]] + q.l2 * s.frame.x[v[2]];
                const Vec2 u = evaluate(m, s.fluid.u, c, Eigen::Vector3d(q.l0, q.l1, q.l2));
                Vec2 P0, P1;
                Eigen::Matrix2d Gp;
                if (k == 0) {
                    tf.momentum(i, 0.0, x, P0, Gp);
                    R -= q.w * A * rho * u.dot(P0);
                }
                tf.momentum(i, t0, x, P0, Gp);
                tf.momentum(i, t1, x, P1, Gp);
                double acc = -rho * u.dot(P1 - P0);
                for (const auto& gt : quad::gauss3()) {
                    const double t = t0 + gt.s * tau;
                    Vec2 Ps;
                    tf.momentum(i, t, x, Ps, Gp);
                    const double divPsi = Gp.trace();
                    const Vec2 f(F.fx(t, x.x(), x.y()), F.fy(t, x.x(), x.y()));
                    double integrand = -rho * u.dot(Gp * u) + 2.0 * p.mu * (D.cwiseProduct(Gp)).sum() +
                                       p.lambda * G.trace() * divPsi - pr * divPsi - rho * f.dot(Ps);
                    acc += gt.w * tau * integrand;
                }
                R += q.w * A * acc;
            }
        }
        if (sp.dim() == 0) continue;
        for (int iv = 0; iv < sp.intervals(); ++iv)
            for (auto [r, w] : sp.gauss(iv)) {
                const auto eta = sp.evaluate(s.shell.eta, r);
                const auto z = sp.evaluate(s.shell.z, r);
                double a0, a1, a2, b0, b1, b2;
                tf.shell(i, t0, r, a0, a1, a2);
                tf.shell(i, t1, r, b0, b1, b2);
                double acc = -z[0] * (b0 - a0);
                for (const auto& gt : quad::gauss3()) {
                    const double t = t0 + gt.s * tau;
                    double s0, s1, s2;
                    tf.shell(i, t, r, s0, s1, s2);
                    acc += gt.w * tau * (p.alpha * eta[2] * s2 + p.beta * eta[1] * s1 - F.g(t, r, 0.0) * s0);
                }
                R += w * acc;
            }
    }
    return std::abs(R);
}

std::vector<ConsistencyRow> consistency_study(const RunConfig& base, int levels, double layer0, double layer1)
{
    if (levels < 1) throw std::invalid_argument("need at least one level");
    std::vector<ConsistencyRow> rows;
    for (int l = 0; l < levels; ++l) {
        RunConfig c = base;
        c.nx = base.nx << l;
        c.ny = base.ny << l;
        c.params.tau = base.params.tau / static_cast<double>(1 << l);
        const Discretization d = make_discretization(c);
        const int steps = c.steps();
        RunResult res = run(d, d.initial_state(c.rho0, c.ux, c.uy), steps, c.solver);
        if (res.gap_stop) throw std::domain_error("consistency run stopped at the gap guard");
        TestFunctions tf;
        tf.L = c.params.L;
        tf.H = c.params.H;
        tf.T = steps * c.params.tau;
        tf.y0 = layer0 * c.params.H;
        tf.y1 = layer1 * c.params.H;
        ConsistencyRow row;
        row.nx = c.nx;
        row.h = d.mesh().h;
        row.tau = c.params.tau;
        for (int i = 0; i < TestFunctions::kContinuity; ++i)
            row.residual_den = std::max(row.residual_den, continuity_defect(d, res.states, tf, i));
        for (int i = 0; i < TestFunctions::kMomentum; ++i)
            row.residual_mom = std::max(row.residual_mom, momentum_defect(d, res.states, tf, i));
        rows.push_back(row);
    }
    return rows;
}

std::string consistency_csv(const std::vector<ConsistencyRow>& rows)
{
    std::string s = "h,tau,residual_den,residual_mom\n";
    for (const auto& r : rows)
        s += fmt17(r.h) + "," + fmt17(r.tau) + "," + fmt17(r.residual_den) + "," + fmt17(r.residual_mom) + "\n";
    return s;
}

namespace {

InvariantCheck upper(const std::string& name, double worst, double limit)
{
    return {name, worst, limit, worst <= limit};
}

}  // namespace

std::vector<InvariantCheck> check_invariants(const Discretization& d, const std::vector<SystemState>& traj,
                                             double solver_tol)
{
    const ReferenceMesh& m = d.mesh();
    const Params& p = d.params();
    const double tau = p.tau;
    const SystemState& s0 = traj.front();
    const double M0 = total_mass(s0.frame, s0.fluid.rho);
    const double E0 = state_energy(d, s0);

    double mass = 0.0, min_rho = s0.fluid.rho.minCoeff(), eta_up = 0.0, dirichlet = 0.0, top = 0.0;
    double energy = 0.0, diss = 0.0, gcl = 0.0, divw = 0.0, ren2 = 0.0, renH = 0.0, renD = 0.0;
    for (std::size_t k = 1; k < traj.size(); ++k) {
        const SystemState &a = traj[k - 1], &b = traj[k];
        mass = std::max(mass, std::abs(total_mass(b.frame, b.fluid.rho) - M0) / M0);
        min_rho = std::min(min_rho, b.fluid.rho.minCoeff());
        const Eigen::VectorXd rebuilt = a.shell.eta + tau * b.shell.z;
        eta_up = std::max(eta_up, (rebuilt - b.shell.eta).cwiseAbs().maxCoeff());
        const Eigen::VectorXd zk = d.shell_space().knot_values(b.shell.z);
        for (int e = 0; e < m.num_edges(); ++e) {
            const Edge& ed = m.edges[e];
            if (ed.cls == EdgeClass::Interior) continue;
            const Vec2 u = b.fluid.u.row(e).transpose();
            if (ed.cls == EdgeClass::Top) {
                const double mean = 0.5 * (zk[m.vertex_knot[ed.v[0]]] + zk[m.vertex_knot[ed.v[1]]]);
                top = std::max(top, (u - Vec2(0.0, mean)).cwiseAbs().maxCoeff());
            } else {
                dirichlet = std::max(dirichlet, u.cwiseAbs().maxCoeff());
            }
        }
        const EnergyLedger L = energy_ledger(d, a, b);
        energy = std::max(energy, std::abs(L.residual));
        for (double v : {L.visc, L.penalty, L.D1, L.D2, L.jump_kinetic, L.kinetic_time, L.shell_time})
            diss = std::min(diss, v);
        gcl = std::max(gcl, geometric_conservation_residual(m, a.frame, b.frame, tau));
        const auto dw = mesh_velocity_divergence(m, a.frame, b.frame, tau);
        const auto Fk = det_jacobian(b.frame, a.frame);
        for (int c = 0; c < m.num_cells(); ++c) divw = std::max(divw, std::abs(tau * dw[c] - (1.0 - Fk[c])));
        const auto r2 = renormalization(d, a, b, [](double r) { return r * r; }, [](double r) { return 2.0 * r; });
        const auto rH = renormalization(
            d, a, b, [&](double r) { return internal_energy(r, p.a, p.gamma); },
            [&](double r) { return internal_energy_derivative(r, p.a, p.gamma); });
        ren2 = std::max(ren2, std::abs(r2.residual));
        renH = std::max(renH, std::abs(rH.residual));
        renD = std::min({renD, r2.D1, r2.D2, rH.D1, rH.D2});
    }

    std::vector<InvariantCheck> out;
    out.push_back(upper("mass drift (relative)", mass, 10.0 * solver_tol));
    out.push_back({"positivity (min rho)", min_rho, 0.0, min_rho > 0.0});
    out.push_back(upper("eta update identity", eta_up, 0.0));
    out.push_back(upper("Dirichlet constraint", dirichlet, 1e-14));
    out.push_back(upper("shell coupling constraint", top, 1e-14));
    out.push_back(upper("energy identity residual / E0", energy / E0, 1e-8));
    out.push_back({"ledger dissipation (min)", diss, -1e-12, diss >= -1e-12});
    out.push_back(upper("geometric conservation", gcl, 1e-12));
    out.push_back(upper("tau div w = 1 - F", divw, 1e-12));
    out.push_back(upper("renormalization rho^2 / M0", ren2 / M0, 1e-9));
    out.push_back(upper("renormalization H / M0", renH / M0, 1e-9));
    out.push_back({"renormalization D1, D2 (min)", renD, -1e-12, renD >= -1e-12});
    return out;
}

}  // namespace fsi
