#include "fsi/model.hpp"

#include <algorithm>
#include <sstream>

namespace fsi {

namespace {
std::string join(const std::vector<std::string>& v)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "; " : "") << v[i];
    return os.str();
}
}  // namespace

ParameterError::ParameterError(std::vector<std::string> violations)
    : std::invalid_argument(join(violations)), violations_(std::move(violations))
{
}

double default_eps_up(double gamma) { return std::min(1.0, gamma - 1.0); }

std::vector<std::string> Params::violations() const
{
    std::vector<std::string> out;
    if (!(gamma > 1.0)) out.emplace_back("gamma must exceed 1");
    if (!(a > 0.0)) out.emplace_back("a must be positive");
    if (!(mu > 0.0)) out.emplace_back("mu must be positive");
    if (!(mu + lambda >= 0.0)) out.emplace_back("mu + lambda must be non-negative");
    if (!(alpha > 0.0)) out.emplace_back("alpha must be positive");
    if (!(beta >= 0.0)) out.emplace_back("beta must be non-negative");
    if (!(eps_up > 0.0 && eps_up < 2.0 * (gamma - 1.0)))
        out.emplace_back("eps_up outside (0, 2(gamma-1))");
    if (!(L > 0.0)) out.emplace_back("L must be positive");
    if (!(H > 0.0)) out.emplace_back("H must be positive");
    if (!(tau > 0.0)) out.emplace_back("tau must be positive");
    if (!(delta0 > 0.0 && delta0 < 0.5 * H)) out.emplace_back("delta0 outside (0, H/2)");
    return out;
}

void Params::validate() const
{
    auto v = violations();
    if (!v.empty()) throw ParameterError(std::move(v));
}

double pressure_checked(double rho, const Params& p)
{
    if (!(rho >= 0.0)) throw std::domain_error("pressure: negative density");
    return pressure(rho, p.a, p.gamma);
}

double internal_energy_checked(double rho, const Params& p)
{
    if (!(rho >= 0.0)) throw std::domain_error("internal energy: negative density");
    return internal_energy(rho, p.a, p.gamma);
}

double elastic_energy_density(double d1, double d2, const Params& p)
{
    return 0.5 * p.alpha * d2 * d2 + 0.5 * p.beta * d1 * d1;
}

}  // namespace fsi
