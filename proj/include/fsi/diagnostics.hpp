#pragma once

/// \file diagnostics.hpp
/// Discrete energy balance, renormalized continuity and mass bookkeeping,
/// evaluated from stored states independently of the residual kernels.

#include <functional>

#include "fsi/stepper.hpp"

namespace fsi {

/// Energy levels at step k and the per-step contributions between k-1 and
/// k. Dissipation and work entries are amounts over the step (already
/// multiplied by tau).
struct EnergyLedger {
    int step = 0;
    double time = 0.0;
    double E_f = 0.0, E_s = 0.0;
    double visc = 0.0;          ///< int 2 mu |D u|^2 + lambda |div u|^2
    double penalty = 0.0;       ///< 2 mu / h sum int |[[u]]|^2
    double D1 = 0.0, D2 = 0.0;  ///< numerical dissipation of the pressure potential
    double jump_kinetic = 0.0;  ///< upwind dissipation of kinetic energy
    double kinetic_time = 0.0;  ///< sum rho^{k-1} |K^{k-1}| |P^k - P^{k-1}|^2 / 2
    double shell_time = 0.0;    ///< tau^2/2 (|dz/dt|_M^2 + alpha |z|_B^2 + beta |z|_T^2)
    double work_f = 0.0, work_g = 0.0;
    double mass = 0.0, min_rho = 0.0, min_gap = 0.0;
    double residual = 0.0;      ///< dE + dissipation - work

    double dissipation() const
    {
        return visc + penalty + D1 + D2 + jump_kinetic + kinetic_time + shell_time;
    }
};

double fluid_energy(const Discretization& d, const SystemState& s);
double state_energy(const Discretization& d, const SystemState& s);

/// Ledger row for level 0 (no increments).
EnergyLedger initial_ledger(const Discretization& d, const SystemState& s);
EnergyLedger energy_ledger(const Discretization& d, const SystemState& prev, const SystemState& curr);

struct Renormalization {
    double residual = 0.0;
    double D1 = 0.0, D2 = 0.0;  ///< rates (not multiplied by tau)
};
/// (1/tau)(int B^k - int B^{k-1}) + sum (rho B' - B) int div u + D1 + D2.
Renormalization renormalization(const Discretization& d, const SystemState& prev, const SystemState& curr,
                                const std::function<double(double)>& B,
                                const std::function<double(double)>& dB);

}  // namespace fsi
