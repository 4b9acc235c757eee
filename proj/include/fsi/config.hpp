#pragma once

/// \file config.hpp
/// Line-oriented run configuration:
///
///     [section]
///     key = value   # comment
///
/// Sections: domain, fluid, shell, time, guard, forcing, initial, solver,
/// output, random. See README for the keys and defaults.

#include <stdexcept>
#include <string>
#include <vector>

#include "fsi/expr.hpp"
#include "fsi/model.hpp"
#include "fsi/stepper.hpp"

namespace fsi {

class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

struct RunConfig {
    Params params;  ///< holds L, H, tau and delta0 as well
    int nx = 16, ny = 16;
    double T = 1.0;
    Forcing forcing;
    Expr rho0 = Expr::constant(1.0);
    Expr ux = Expr::constant(0.0);
    Expr uy = Expr::constant(0.0);
    HomotopyOptions solver;
    std::string output_dir = "output";
    int stride = 1;
    unsigned long seed = 1;

    int steps() const;
};

bool operator==(const RunConfig& a, const RunConfig& b);

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string print_config(const RunConfig& c);

Discretization make_discretization(const RunConfig& c);

}  // namespace fsi
