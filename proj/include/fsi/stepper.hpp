#pragma once

/// \file stepper.hpp
/// One implicit time level of the coupled scheme, the homotopy continuation
/// used to solve it, and the time loop.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fsi/ale.hpp"
#include "fsi/expr.hpp"
#include "fsi/fluid_spaces.hpp"
#include "fsi/mesh.hpp"
#include "fsi/model.hpp"
#include "fsi/shell.hpp"

namespace fsi {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Body force f(t, x, y) = (fx, fy) and shell load g(t, r).
struct Forcing {
    Expr fx = Expr::constant(0.0);
    Expr fy = Expr::constant(0.0);
    Expr g = Expr::constant(0.0);
};

struct SystemState {
    int level = 0;
    double time = 0.0;
    FluidState fluid;
    ShellState shell;  ///< spline coefficients
    AleFrame frame;
};

struct HomotopyOptions {
    std::vector<double> zeta{0.0, 0.25, 0.5, 0.75, 1.0};
    double min_dzeta = 1.0 / 64.0;
    double tol = 1e-11;        ///< max-norm of the residual
    int max_newton = 64;       ///< per time step, over all stages
    int max_stage_newton = 20;
};

struct StepStats {
    int newton_iterations = 0;
    int stages = 0;
    double start_residual = 0.0;  ///< at the initial guess of the final stage
    double final_residual = 0.0;
};

class Discretization {
public:
    Discretization(ReferenceMesh mesh, Params params, Forcing forcing);

    const ReferenceMesh& mesh() const { return mesh_; }
    const ShellSpace& shell_space() const { return space_; }
    const ShellForms& forms() const { return forms_; }
    const Params& params() const { return params_; }
    const Forcing& forcing() const { return forcing_; }

    // unknown layout: [rho (cells) | u on interior edges (x, y) | z (shell)]
    int num_unknowns() const { return z_off_ + space_.dim(); }
    int u_offset() const { return u_off_; }
    int z_offset() const { return z_off_; }
    int free_index(int edge) const { return free_of_edge_[edge]; }
    /// y-velocity of top edge e as a combination of shell coefficients.
    const std::vector<std::pair<int, double>>& top_coupling(int edge) const { return top_of_edge_[edge]; }

    SystemState initial_state(const Expr& rho0, const Expr& ux, const Expr& uy) const;

    Eigen::VectorXd pack(const SystemState& s) const;
    /// Builds the level prev.level + 1 state with unknowns x; throws
    /// InvariantError when the frame would be degenerate.
    SystemState unpack(const SystemState& prev, const Eigen::VectorXd& x) const;
    /// Edge velocities including the constrained boundary values.
    EdgeField full_velocity(const Eigen::VectorXd& x) const;

    Eigen::VectorXd residual(const SystemState& prev, const Eigen::VectorXd& x, double zeta) const;
    void residual_and_jacobian(const SystemState& prev, const Eigen::VectorXd& x, double zeta,
                               Eigen::VectorXd& R, Eigen::SparseMatrix<double>& J) const;
    /// Central finite differences of residual(), column by column.
    Eigen::SparseMatrix<double> fd_jacobian(const SystemState& prev, const Eigen::VectorXd& x,
                                            double zeta, double step) const;

    /// The linear system A [u; z] = b solved at zeta = 0, where the new
    /// mass rho |K| is replaced by the old one.
    void start_system(const SystemState& prev, Eigen::SparseMatrix<double>& A, Eigen::VectorXd& b) const;
    /// Solution of the start system with rho from the closed form.
    Eigen::VectorXd start_solution(const SystemState& prev) const;

    SystemState solve_step(const SystemState& prev, const HomotopyOptions& opt, StepStats* stats = nullptr) const;

    /// Time-averaged edge means of f on frame f at level k.
    EdgeField edge_forcing(const AleFrame& f, int level) const;
    /// int over I^k of the shell load against each basis function, over tau.
    Eigen::VectorXd shell_load(int level) const;

private:
    struct Fan {
        int col;
        double w;
    };
    enum class Mode { Full, Start };

    template <class Scalar, class Sink>
    void cell_kernel(const SystemState& prev, int c, const Scalar* in, double zeta, Mode mode, Sink&& sink) const;
    template <class Scalar, class Sink>
    void edge_kernel(const SystemState& prev, int e, const Scalar* in, double zeta, Sink&& sink) const;
    template <class Scalar>
    Scalar edge_force(const Scalar* X0, const Scalar* X1, int level, int comp) const;

    void assemble(const SystemState& prev, const Eigen::VectorXd& x, double zeta, Mode mode,
                  Eigen::VectorXd& R, std::vector<Eigen::Triplet<double>>* trip) const;
    const std::vector<Fan>& u_fan(int edge, int comp) const { return u_fan_[2 * edge + comp]; }

    ReferenceMesh mesh_;
    Params params_;
    Forcing forcing_;
    ShellSpace space_;
    ShellForms forms_;
    Eigen::MatrixXd stiffness_;  ///< alpha B + beta T
    int u_off_ = 0, z_off_ = 0;
    std::vector<int> free_of_edge_;
    std::vector<int> edge_of_free_;
    std::vector<std::vector<std::pair<int, double>>> top_of_edge_;
    std::vector<std::vector<Fan>> u_fan_;
    std::vector<std::vector<Fan>> knot_fan_;
    std::vector<double> ref_sign_;  ///< orientation of rot(v1 - v0) relative to edge_normal
    std::vector<std::array<Vec2, 3>> ref_normal_;
    double h_eps_ = 1.0;
};

struct RunResult {
    std::vector<SystemState> states;  ///< levels 0..N
    std::vector<StepStats> stats;     ///< one per step
    bool gap_stop = false;
    GapReport gap;
    double time_reached = 0.0;
};

/// Advances `steps` levels, stopping early at a gap-guard violation (the
/// violating level is not kept). Solver failures propagate as SolverError.
RunResult run(const Discretization& d, SystemState initial, int steps, const HomotopyOptions& opt,
              const std::function<void(const SystemState&, const StepStats&)>& on_step = {});

}  // namespace fsi
