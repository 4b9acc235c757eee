#pragma once

/// \file model.hpp
/// Physical and discretization parameters, barotropic constitutive laws and
/// the plate energy density.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsi/dual.hpp"

namespace fsi {

/// Thrown when a parameter set violates the model invariants. Carries every
/// violation found, not just the first.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

struct Params {
    // fluid
    double gamma = 1.4;
    double a = 1.0;
    double mu = 0.1;
    double lambda = 0.0;
    double eps_up = 0.4;  ///< upwind diffusion exponent, default min(1, gamma - 1)
    // shell; the plate density times thickness is fixed to 1
    double alpha = 1.0;
    double beta = 0.0;
    // geometry and time
    double L = 1.0;
    double H = 1.0;
    double tau = 1e-2;
    double delta0 = 0.1;

    /// Returns the list of violated invariants, empty when the set is valid.
    std::vector<std::string> violations() const;
    /// Throws ParameterError unless violations() is empty.
    void validate() const;
};

double default_eps_up(double gamma);

/// p(rho) = a rho^gamma.
template <class T>
T pressure(const T& rho, double a, double gamma)
{
    return a * pow(rho, gamma);
}

/// H(rho) = a/(gamma-1) rho^gamma, so that p = rho H' - H.
template <class T>
T internal_energy(const T& rho, double a, double gamma)
{
    return a / (gamma - 1.0) * pow(rho, gamma);
}

/// H'(rho) = a gamma/(gamma-1) rho^(gamma-1).
template <class T>
T internal_energy_derivative(const T& rho, double a, double gamma)
{
    return a * gamma / (gamma - 1.0) * pow(rho, gamma - 1.0);
}

/// Checked scalar versions; negative density is a domain error.
double pressure_checked(double rho, const Params& p);
double internal_energy_checked(double rho, const Params& p);

/// K(eta) density: alpha |eta''|^2 / 2 + beta |eta'|^2 / 2.
double elastic_energy_density(double d1, double d2, const Params& p);

}  // namespace fsi
