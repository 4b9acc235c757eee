#include "fsi/stepper.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>
#include <deque>
#include <string>

#include "fsi/dual.hpp"
#include "fsi/quadrature.hpp"
#include "fsi/upwind.hpp"

namespace fsi {

namespace {

constexpr int kSlots = 16;
using D16 = Dual<kSlots>;

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Discretization::Discretization(ReferenceMesh mesh, Params params, Forcing forcing)
    : mesh_(std::move(mesh)), params_(params), forcing_(std::move(forcing)), space_(mesh_.knots)
{
    params_.validate();
    if (std::abs(params_.L - mesh_.L) > 1e-12 * mesh_.L || std::abs(params_.H - mesh_.H) > 1e-12 * mesh_.H)
        throw std::invalid_argument("mesh extents differ from L and H");
    forms_ = space_.forms();
    stiffness_ = params_.alpha * forms_.B + params_.beta * forms_.T;
    h_eps_ = std::pow(mesh_.h, params_.eps_up);

    const int nc = mesh_.num_cells(), ne = mesh_.num_edges();
    free_of_edge_.assign(ne, -1);
    for (int e = 0; e < ne; ++e)
        if (mesh_.edges[e].cls == EdgeClass::Interior) {
            free_of_edge_[e] = static_cast<int>(edge_of_free_.size());
            edge_of_free_.push_back(e);
        }
    u_off_ = nc;
    z_off_ = nc + 2 * static_cast<int>(edge_of_free_.size());

    const Eigen::MatrixXd& E = space_.knot_evaluation();
    top_of_edge_.assign(ne, {});
    for (int e : mesh_.top_edges) {
        const int a = mesh_.vertex_knot[mesh_.edges[e].v[0]], b = mesh_.vertex_knot[mesh_.edges[e].v[1]];
        for (int j = 0; j < space_.dim(); ++j) {
            const double w = 0.5 * (E(a, j) + E(b, j));
            if (w != 0.0) top_of_edge_[e].emplace_back(j, w);
        }
    }
    u_fan_.assign(2 * ne, {});
    for (int e = 0; e < ne; ++e) {
        if (free_of_edge_[e] >= 0) {
            for (int c = 0; c < 2; ++c) u_fan_[2 * e + c] = {{u_off_ + 2 * free_of_edge_[e] + c, 1.0}};
        } else if (mesh_.edges[e].cls == EdgeClass::Top) {
            for (auto [j, w] : top_of_edge_[e]) u_fan_[2 * e + 1].push_back({z_off_ + j, w});
        }
    }
    knot_fan_.assign(mesh_.knots.size(), {});
    for (int i = 0; i < static_cast<int>(mesh_.knots.size()); ++i)
        for (int j = 0; j < space_.dim(); ++j)
            if (E(i, j) != 0.0) knot_fan_[i].push_back({z_off_ + j, params_.tau * E(i, j)});

    const AleFrame ref = reference_frame(mesh_);
    ref_sign_.resize(ne);
    for (int e = 0; e < ne; ++e) {
        const Vec2 d = mesh_.vertices[mesh_.edges[e].v[1]] - mesh_.vertices[mesh_.edges[e].v[0]];
        ref_sign_[e] = Vec2(d.y(), -d.x()).dot(ref.edge_normal[e]) > 0.0 ? 1.0 : -1.0;
    }
    ref_normal_.resize(nc);
    for (int c = 0; c < nc; ++c)
        for (int i = 0; i < 3; ++i) ref_normal_[c][i] = scaled_outward_normal(mesh_, ref, c, i);
}

SystemState Discretization::initial_state(const Expr& rho0, const Expr& ux, const Expr& uy) const
{
    SystemState s;
    s.frame = reference_frame(mesh_);
    s.fluid.rho = project_cells(mesh_, s.frame, [&](const Vec2& p) { return rho0(0.0, p.x(), p.y()); });
    if (!(s.fluid.rho.minCoeff() > 0.0)) throw InvariantError("initial density must be positive");
    s.fluid.u = project_edges(mesh_, s.frame,
                              [&](const Vec2& p) { return Vec2(ux(0.0, p.x(), p.y()), uy(0.0, p.x(), p.y())); });
    s.shell.eta = Eigen::VectorXd::Zero(space_.dim());
    s.shell.z = Eigen::VectorXd::Zero(space_.dim());
    return s;
}

Eigen::VectorXd Discretization::pack(const SystemState& s) const
{
    Eigen::VectorXd x(num_unknowns());
    x.head(mesh_.num_cells()) = s.fluid.rho;
    for (std::size_t f = 0; f < edge_of_free_.size(); ++f) {
        x[u_off_ + 2 * f] = s.fluid.u(edge_of_free_[f], 0);
        x[u_off_ + 2 * f + 1] = s.fluid.u(edge_of_free_[f], 1);
    }
    x.tail(space_.dim()) = s.shell.z;
    return x;
}

EdgeField Discretization::full_velocity(const Eigen::VectorXd& x) const
{
    EdgeField u = EdgeField::Zero(mesh_.num_edges(), 2);
    for (int e = 0; e < mesh_.num_edges(); ++e)
        for (int c = 0; c < 2; ++c)
            for (const Fan& f : u_fan(e, c)) u(e, c) += f.w * x[f.col];
    return u;
}

SystemState Discretization::unpack(const SystemState& prev, const Eigen::VectorXd& x) const
{
    SystemState s;
    s.level = prev.level + 1;
    s.time = s.level * params_.tau;
    s.fluid.rho = x.head(mesh_.num_cells());
    s.fluid.u = full_velocity(x);
    s.shell.z = x.tail(space_.dim());
    s.shell.eta = prev.shell.eta + params_.tau * s.shell.z;
    s.frame = make_frame(mesh_, space_.knot_values(s.shell.eta), s.level);
    return s;
}

template <class S>
S Discretization::edge_force(const S* X0, const S* X1, int level, int comp) const
{
    const Expr& f = comp == 0 ? forcing_.fx : forcing_.fy;
    const double t0 = level * params_.tau;
    S acc(0.0);
    for (const auto& gt : quad::gauss3()) {
        const double t = t0 + gt.s * params_.tau;
        if (!f.depends_on_space()) {
            acc += S(gt.w * f(t, 0.0, 0.0));
            continue;
        }
        for (const auto& gs : quad::gauss3()) {
            const S x = X0[0] + gs.s * (X1[0] - X0[0]);
            const S y = X0[1] + gs.s * (X1[1] - X0[1]);
            acc += gt.w * gs.w * f.eval<S>(t, x, y);
        }
    }
    return acc;
}

EdgeField Discretization::edge_forcing(const AleFrame& fr, int level) const
{
    EdgeField out(mesh_.num_edges(), 2);
    for (int e = 0; e < mesh_.num_edges(); ++e) {
        const Vec2 &p = fr.x[mesh_.edges[e].v[0]], &q = fr.x[mesh_.edges[e].v[1]];
        const double P[2] = {p.x(), p.y()}, Q[2] = {q.x(), q.y()};
        for (int c = 0; c < 2; ++c) out(e, c) = edge_force<double>(P, Q, level, c);
    }
    return out;
}

Eigen::VectorXd Discretization::shell_load(int level) const
{
    const double t0 = level * params_.tau;
    return space_.load_vector([&](double r) {
        double s = 0.0;
        for (const auto& gt : quad::gauss3()) s += gt.w * forcing_.g(t0 + gt.s * params_.tau, r, 0.0);
        return s;
    });
}

// in: [rho, u_e0 (x,y), u_e1, u_e2, eta at v0, v1, v2]
template <class S, class Sink>
void Discretization::cell_kernel(const SystemState& prev, int c, const S* in, double zeta, Mode mode,
                                 Sink&& sink) const
{
    const Cell& K = mesh_.cells[c];
    const int nc = mesh_.num_cells();
    const int level = prev.level + 1;
    const double tau = params_.tau, mu = params_.mu, lam = params_.lambda;

    S X[3][2];
    for (int i = 0; i < 3; ++i) {
        const Vec2& v = mesh_.vertices[K.v[i]];
        X[i][0] = S(v.x());
        X[i][1] = mapped_height(v.y(), in[7 + i], params_.H);
    }
    const S A = 0.5 * ((X[1][0] - X[0][0]) * (X[2][1] - X[0][1]) - (X[1][1] - X[0][1]) * (X[2][0] - X[0][0]));
    S N[3][2];
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        N[i][0] = X[k][1] - X[j][1];
        N[i][1] = X[j][0] - X[k][0];
    }
    const double Ah = mesh_.cell_area[c];
    const auto& Nh = ref_normal_[c];
    S G[2][2], Gh[2][2];
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            G[a][b] = S(0.0);
            Gh[a][b] = S(0.0);
            for (int i = 0; i < 3; ++i) {
                G[a][b] += in[1 + 2 * i + a] * N[i][b];
                Gh[a][b] += in[1 + 2 * i + a] * Nh[i][b];
            }
            G[a][b] /= A;
            Gh[a][b] = Gh[a][b] / Ah;
        }
    S Dm[2][2], Dh[2][2];
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            Dm[a][b] = 0.5 * (G[a][b] + G[b][a]);
            Dh[a][b] = 0.5 * (Gh[a][b] + Gh[b][a]);
        }
    const S div = G[0][0] + G[1][1];

    const double mprev = prev.fluid.rho[c] * prev.frame.area[c];
    const Vec2 Pprev = cell_mean(mesh_, prev.fluid.u, c);
    const S mass = mode == Mode::Start ? S(mprev) : in[0] * A;
    if (mode == Mode::Full) sink(c, (in[0] * A - mprev) / tau);
    const S p = pressure(in[0], params_.a, params_.gamma);

    for (int i = 0; i < 3; ++i) {
        const int e = K.e[i];
        // edge endpoints in the edge's own orientation
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        const bool forward = K.v[j] == mesh_.edges[e].v[0];
        S P0[2], P1[2];
        for (int d = 0; d < 2; ++d) {
            if (mode == Mode::Start) {
                P0[d] = S(prev.frame.x[forward ? K.v[j] : K.v[k]][d]);
                P1[d] = S(prev.frame.x[forward ? K.v[k] : K.v[j]][d]);
            } else {
                P0[d] = forward ? X[j][d] : X[k][d];
                P1[d] = forward ? X[k][d] : X[j][d];
            }
        }
        for (int comp = 0; comp < 2; ++comp) {
            const S P = (in[1 + comp] + in[3 + comp] + in[5 + comp]) / 3.0;
            const S f = edge_force<S>(P0, P1, level, comp);
            S val = (mass * P - mprev * Pprev[comp]) / (3.0 * tau);
            val += zeta * (2.0 * mu * (Dm[comp][0] * N[i][0] + Dm[comp][1] * N[i][1]) + lam * div * N[i][comp]);
            val += (1.0 - zeta) * 2.0 * mu * (Dh[comp][0] * Nh[i][0] + Dh[comp][1] * Nh[i][1]);
            val -= zeta * p * N[i][comp];
            val -= mass * f / 3.0;
            sink(nc + 2 * e + comp, val);
        }
    }
}

// in: [rho_K, rho_L, u_sigma, u_K1, u_K2, u_L1, u_L2, eta_p, eta_q]
// with K1/L1 opposite p and K2/L2 opposite q
template <class S, class Sink>
void Discretization::edge_kernel(const SystemState& prev, int e, const S* in, double zeta, Sink&& sink) const
{
    const Edge& ed = mesh_.edges[e];
    const int nc = mesh_.num_cells();
    const int K = ed.cell[0], L = ed.cell[1];
    const int p = ed.v[0], q = ed.v[1];
    const double tau = params_.tau, mu = params_.mu;

    const S yp = mapped_height(mesh_.vertices[p].y(), in[12], params_.H);
    const S yq = mapped_height(mesh_.vertices[q].y(), in[13], params_.H);
    const double dx = mesh_.vertices[q].x() - mesh_.vertices[p].x();
    const S dy = yq - yp;
    const S len = sqrt(dx * dx + dy * dy);
    const S Nx = ref_sign_[e] * dy;
    const double Ny = -ref_sign_[e] * dx;
    const S wy = 0.5 * ((yp - prev.frame.x[p].y()) + (yq - prev.frame.x[q].y())) / tau;
    const S V = (Nx * in[2] + Ny * (in[3] - wy)) / len;

    const S F = zeta * len * upwind_flux(in[0], in[1], V, h_eps_);
    sink(K, F);
    sink(L, -F);

    const Cell &CK = mesh_.cells[K], &CL = mesh_.cells[L];
    auto opposite = [](const Cell& C, int v) {
        for (int i = 0; i < 3; ++i)
            if (C.v[i] == v) return C.e[i];
        return -1;
    };
    const int K1 = opposite(CK, p), K2 = opposite(CK, q), L1 = opposite(CL, p), L2 = opposite(CL, q);
    const double wpen = 2.0 * mu / (3.0 * mesh_.h);
    const double len_hat = mesh_.edge_length[e];
    for (int c = 0; c < 2; ++c) {
        const S PK = (in[2 + c] + in[4 + c] + in[6 + c]) / 3.0;
        const S PL = (in[2 + c] + in[8 + c] + in[10 + c]) / 3.0;
        const S Fm = zeta * len * upwind_flux(in[0] * PK, in[1] * PL, V, h_eps_) / 3.0;
        sink(nc + 2 * K1 + c, Fm);
        sink(nc + 2 * K2 + c, Fm);
        sink(nc + 2 * L1 + c, -Fm);
        sink(nc + 2 * L2 + c, -Fm);

        const S Jp = (in[10 + c] - in[8 + c]) - (in[6 + c] - in[4 + c]);
        const S wJ = (zeta * len + (1.0 - zeta) * len_hat) * wpen * Jp;
        sink(nc + 2 * K1 + c, wJ);
        sink(nc + 2 * K2 + c, -wJ);
        sink(nc + 2 * L1 + c, -wJ);
        sink(nc + 2 * L2 + c, wJ);
    }
}

void Discretization::assemble(const SystemState& prev, const Eigen::VectorXd& x, double zeta, Mode mode,
                              Eigen::VectorXd& R, std::vector<Eigen::Triplet<double>>* trip) const
{
    const int nc = mesh_.num_cells(), ne = mesh_.num_edges(), ns = space_.dim();
    const int n = num_unknowns();
    const double tau = params_.tau;

    const EdgeField u = full_velocity(x);
    const Eigen::VectorXd z = x.tail(ns);
    const Eigen::VectorXd eta = prev.shell.eta + tau * z;
    const Eigen::VectorXd knot = space_.knot_values(eta);

    Eigen::VectorXd Rf = Eigen::VectorXd::Zero(nc + 2 * ne);
    auto row_fan = [&](int row, std::vector<Fan>& tmp) -> const std::vector<Fan>& {
        if (row < nc) {
            tmp.assign(1, {row, 1.0});
            return tmp;
        }
        return u_fan((row - nc) / 2, (row - nc) % 2);
    };
    // primitive ids: [0, nc) rho, [nc, nc + 2 ne) velocity, then vertices
    auto col_fan = [&](int id, std::vector<Fan>& tmp) -> const std::vector<Fan>& {
        if (id < nc) {
            tmp.assign(1, {id, 1.0});
            return tmp;
        }
        if (id < nc + 2 * ne) return u_fan((id - nc) / 2, (id - nc) % 2);
        return knot_fan_[mesh_.vertex_knot[id - nc - 2 * ne]];
    };
    auto prim_value = [&](int id) {
        if (id < nc) return x[id];
        if (id < nc + 2 * ne) return u((id - nc) / 2, (id - nc) % 2);
        return knot[mesh_.vertex_knot[id - nc - 2 * ne]];
    };

    std::vector<Fan> tr, tc;
    auto run = [&](int nv, const int* ids, auto&& kernel) {
        if (!trip) {
            double in[kSlots];
            for (int i = 0; i < nv; ++i) in[i] = prim_value(ids[i]);
            kernel(in, [&](int row, double v) { Rf[row] += v; });
            return;
        }
        D16 in[kSlots];
        for (int i = 0; i < nv; ++i) in[i] = D16::variable(prim_value(ids[i]), i);
        kernel(in, [&](int row, const D16& v) {
            Rf[row] += v.v;
            const auto& rf = row_fan(row, tr);
            for (const Fan& r : rf)
                for (int s = 0; s < nv; ++s) {
                    const auto& cf = col_fan(ids[s], tc);
                    for (const Fan& cc : cf) trip->emplace_back(r.col, cc.col, r.w * cc.w * v.d[s]);
                }
        });
    };

    for (int c = 0; c < nc; ++c) {
        const Cell& K = mesh_.cells[c];
        int ids[10];
        ids[0] = c;
        for (int i = 0; i < 3; ++i) {
            ids[1 + 2 * i] = nc + 2 * K.e[i];
            ids[2 + 2 * i] = nc + 2 * K.e[i] + 1;
            ids[7 + i] = nc + 2 * ne + K.v[i];
        }
        run(10, ids, [&](auto* in, auto&& sink) { cell_kernel(prev, c, in, zeta, mode, sink); });
    }
    for (int e = 0; e < ne; ++e) {
        const Edge& ed = mesh_.edges[e];
        if (ed.cell[1] < 0) continue;
        const Cell &CK = mesh_.cells[ed.cell[0]], &CL = mesh_.cells[ed.cell[1]];
        auto opposite = [](const Cell& C, int v) {
            for (int i = 0; i < 3; ++i)
                if (C.v[i] == v) return C.e[i];
            return -1;
        };
        const int edges5[5] = {e, opposite(CK, ed.v[0]), opposite(CK, ed.v[1]), opposite(CL, ed.v[0]),
                               opposite(CL, ed.v[1])};
        int ids[14];
        ids[0] = ed.cell[0];
        ids[1] = ed.cell[1];
        for (int k = 0; k < 5; ++k) {
            ids[2 + 2 * k] = nc + 2 * edges5[k];
            ids[3 + 2 * k] = nc + 2 * edges5[k] + 1;
        }
        ids[12] = nc + 2 * ne + ed.v[0];
        ids[13] = nc + 2 * ne + ed.v[1];
        run(14, ids, [&](auto* in, auto&& sink) { edge_kernel(prev, e, in, zeta, sink); });
    }

    R = Eigen::VectorXd::Zero(n);
    for (int row = 0; row < nc + 2 * ne; ++row)
        for (const Fan& r : row_fan(row, tr)) R[r.col] += r.w * Rf[row];
    if (ns > 0) {
        const Eigen::VectorXd Rs = forms_.M * (z - prev.shell.z) / tau + stiffness_ * eta - shell_load(prev.level + 1);
        R.tail(ns) += Rs;
        if (trip) {
            const Eigen::MatrixXd Js = forms_.M / tau + tau * stiffness_;
            for (int i = 0; i < ns; ++i)
                for (int j = 0; j < ns; ++j)
                    if (Js(i, j) != 0.0) trip->emplace_back(z_off_ + i, z_off_ + j, Js(i, j));
        }
    }
}

Eigen::VectorXd Discretization::residual(const SystemState& prev, const Eigen::VectorXd& x, double zeta) const
{
    Eigen::VectorXd R;
    assemble(prev, x, zeta, Mode::Full, R, nullptr);
    return R;
}

void Discretization::residual_and_jacobian(const SystemState& prev, const Eigen::VectorXd& x, double zeta,
                                           Eigen::VectorXd& R, Eigen::SparseMatrix<double>& J) const
{
    std::vector<Eigen::Triplet<double>> trip;
    assemble(prev, x, zeta, Mode::Full, R, &trip);
    J.resize(num_unknowns(), num_unknowns());
    J.setFromTriplets(trip.begin(), trip.end());
}

Eigen::SparseMatrix<double> Discretization::fd_jacobian(const SystemState& prev, const Eigen::VectorXd& x,
                                                        double zeta, double step) const
{
    const int n = num_unknowns();
    std::vector<Eigen::Triplet<double>> trip;
    for (int j = 0; j < n; ++j) {
        const double hj = step * std::max(1.0, std::abs(x[j]));
        Eigen::VectorXd xp = x, xm = x;
        xp[j] += hj;
        xm[j] -= hj;
        const Eigen::VectorXd col = (residual(prev, xp, zeta) - residual(prev, xm, zeta)) / (2.0 * hj);
        for (int i = 0; i < n; ++i)
            if (col[i] != 0.0) trip.emplace_back(i, j, col[i]);
    }
    Eigen::SparseMatrix<double> J(n, n);
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
}

void Discretization::start_system(const SystemState& prev, Eigen::SparseMatrix<double>& A,
                                  Eigen::VectorXd& b) const
{
    const int nc = mesh_.num_cells(), n = num_unknowns(), m = n - nc;
    Eigen::VectorXd x = pack(prev);
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd R;
    assemble(prev, x, 0.0, Mode::Start, R, &trip);
    std::vector<Eigen::Triplet<double>> sub;
    for (const auto& t : trip)
        if (t.row() >= nc && t.col() >= nc) sub.emplace_back(t.row() - nc, t.col() - nc, t.value());
    A.resize(m, m);
    A.setFromTriplets(sub.begin(), sub.end());
    // symmetric up to the rounding of the assembly order
    A = 0.5 * (A + Eigen::SparseMatrix<double>(A.transpose()));
    // the start residual is affine in (u, z): R = A y - b
    b = A * x.tail(m) - R.tail(m);
}

Eigen::VectorXd Discretization::start_solution(const SystemState& prev) const
{
    const int nc = mesh_.num_cells();
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd b;
    start_system(prev, A, b);
    Eigen::VectorXd y;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() == Eigen::Success) y = ldlt.solve(b);
    if (ldlt.info() != Eigen::Success || !y.allFinite()) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
        if (lu.info() != Eigen::Success) throw SolverError("start system is singular");
        y = lu.solve(b);
    }
    Eigen::VectorXd x(num_unknowns());
    x.tail(y.size()) = y;
    x.head(nc).setZero();
    SystemState s = unpack(prev, x);
    for (int c = 0; c < nc; ++c) x[c] = prev.fluid.rho[c] * prev.frame.area[c] / s.frame.area[c];
    return x;
}

SystemState Discretization::solve_step(const SystemState& prev, const HomotopyOptions& opt, StepStats* stats) const
{
    const int nc = mesh_.num_cells();
    StepStats st;
    Eigen::VectorXd x;
    try {
        x = start_solution(prev);
    } catch (const InvariantError& e) {
        throw SolverError(std::string("start solution inadmissible: ") + e.what());
    }

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool analyzed = false;
    auto admissible = [&](const Eigen::VectorXd& y) {
        if (!(y.head(nc).minCoeff() > 0.0) || !y.allFinite()) return false;
        try {
            (void)unpack(prev, y);
        } catch (const InvariantError&) {
            return false;
        }
        return true;
    };

    auto newton = [&](Eigen::VectorXd& y, double zeta) {
        Eigen::VectorXd R;
        Eigen::SparseMatrix<double> J;
        for (int it = 0; it <= opt.max_stage_newton; ++it) {
            residual_and_jacobian(prev, y, zeta, R, J);
            const double r0 = max_abs(R);
            if (it == 0) st.start_residual = r0;
            st.final_residual = r0;
            if (r0 <= opt.tol) return true;
            if (it == opt.max_stage_newton || st.newton_iterations >= opt.max_newton) return false;
            if (!analyzed) {
                lu.analyzePattern(J);
                analyzed = true;
            }
            lu.factorize(J);
            if (lu.info() != Eigen::Success) return false;
            const Eigen::VectorXd dx = lu.solve(-R);
            ++st.newton_iterations;
            const double n0 = R.norm();
            double step = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 30; ++ls, step *= 0.5) {
                const Eigen::VectorXd trial = y + step * dx;
                if (!admissible(trial)) continue;
                const double n1 = residual(prev, trial, zeta).norm();
                if (n1 <= (1.0 - 1e-4 * step) * n0 || (step == 1.0 && n1 <= n0)) {
                    y = trial;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) return false;
        }
        return false;
    };

    std::deque<double> pending(opt.zeta.begin(), opt.zeta.end());
    if (pending.empty() || pending.front() != 0.0) pending.push_front(0.0);
    if (pending.back() != 1.0) pending.push_back(1.0);
    double current = 0.0;
    bool first = true;
    while (!pending.empty()) {
        const double target = pending.front();
        Eigen::VectorXd y = x;
        ++st.stages;
        const bool ok = newton(y, target);
        if (ok) {
            x = y;
            current = target;
            first = false;
            pending.pop_front();
            continue;
        }
        if (first || st.newton_iterations >= opt.max_newton)
            throw SolverError("Newton failed at zeta = " + std::to_string(target) + " (level " +
                              std::to_string(prev.level + 1) + ", residual " + std::to_string(st.final_residual) + ")");
        const double mid = 0.5 * (current + target);
        if (mid - current < opt.min_dzeta)
            throw SolverError("homotopy step below minimum at zeta = " + std::to_string(current));
        pending.push_front(mid);
    }

    SystemState s = unpack(prev, x);
    if (!(s.fluid.rho.minCoeff() > 0.0)) throw SolverError("positivity lost");
    if (stats) *stats = st;
    return s;
}

RunResult run(const Discretization& d, SystemState initial, int steps, const HomotopyOptions& opt,
              const std::function<void(const SystemState&, const StepStats&)>& on_step)
{
    RunResult out;
    out.states.push_back(std::move(initial));
    out.gap = gap_guard(out.states.back().frame, d.params().H, d.params().delta0);
    for (int k = 0; k < steps; ++k) {
        StepStats st;
        SystemState s = d.solve_step(out.states.back(), opt, &st);
        const GapReport g = gap_guard(s.frame, d.params().H, d.params().delta0);
        if (!g.admissible) {
            out.gap_stop = true;
            out.gap = g;
            break;
        }
        out.gap = g;
        out.stats.push_back(st);
        out.states.push_back(std::move(s));
        if (on_step) on_step(out.states.back(), st);
    }
    out.time_reached = out.states.back().time;
    return out;
}

}  // namespace fsi
