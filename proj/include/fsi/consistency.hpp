#pragma once

/// \file consistency.hpp
/// Weak-form defects of a computed trajectory against smooth test functions,
/// and the trajectory-wide invariant suite.

#include <string>
#include <vector>

#include "fsi/config.hpp"
#include "fsi/stepper.hpp"

namespace fsi {

/// Fixed smooth test functions on [0,L] x [0,T]. The momentum fields equal
/// psi(t, r) e_y above the cutoff layer [y0, y1] and vanish on the walls and
/// the bottom.
struct TestFunctions {
    double L = 1.0, H = 1.0, T = 1.0;
    double y0 = 0.5, y1 = 0.8;  ///< cutoff layer, in absolute height

    static constexpr int kContinuity = 3;
    static constexpr int kMomentum = 3;

    /// Time profile (1 - t/T)^3 on [0, T], zero afterwards.
    double theta(double t) const;
    /// C2 cutoff: 0 below y0, 1 above y1, slope at most 1.875/(y1 - y0).
    template <class S>
    S cutoff(const S& y) const;

    /// phi_i and its spatial gradient.
    void continuity(int i, double t, const Vec2& x, double& phi, Vec2& grad) const;
    /// Psi_i, its gradient (row a = grad of component a).
    void momentum(int i, double t, const Vec2& x, Vec2& Psi, Eigen::Matrix2d& grad) const;
    /// psi_i(t, r) with r-derivatives.
    void shell(int i, double t, double r, double& psi, double& d1, double& d2) const;
};

/// -int rho^0 phi^0 - sum_k [ int_{Omega^k} rho^k (phi(t^{k+1}) - phi(t^k))
///                            + int_{I^k} int_{Omega^k} rho^k u^k . grad phi ].
double continuity_defect(const Discretization& d, const std::vector<SystemState>& traj,
                         const TestFunctions& tf, int i);
/// Momentum and shell weak form of the coupled problem against pair i.
double momentum_defect(const Discretization& d, const std::vector<SystemState>& traj,
                       const TestFunctions& tf, int i);

struct ConsistencyRow {
    int nx = 0;
    double h = 0.0, tau = 0.0;
    double residual_den = 0.0, residual_mom = 0.0;  ///< max over the test functions
};

/// Runs the base configuration on `levels` meshes, doubling nx, ny and
/// halving tau per level, and evaluates the defects with test functions on
/// [0, T]. The cutoff layer is [layer0, layer1] * H.
std::vector<ConsistencyRow> consistency_study(const RunConfig& base, int levels, double layer0 = 0.5,
                                              double layer1 = 0.8);
std::string consistency_csv(const std::vector<ConsistencyRow>& rows);

struct InvariantCheck {
    std::string name;
    double worst = 0.0;
    double limit = 0.0;
    bool pass = true;
};

/// Runs every per-step invariant over a trajectory produced by run().
std::vector<InvariantCheck> check_invariants(const Discretization& d, const std::vector<SystemState>& traj,
                                             double solver_tol);

}  // namespace fsi
