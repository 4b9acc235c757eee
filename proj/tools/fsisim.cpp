// Command-line driver: run, verify and convergence studies from a config file.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "fsi/config.hpp"
#include "fsi/consistency.hpp"
#include "fsi/diagnostics.hpp"
#include "fsi/output.hpp"

namespace {

enum Exit { kOk = 0, kIo = 1, kConfig = 2, kSolver = 3, kInvariant = 4 };

int cmd_run(const std::string& path, const std::string& out_override, bool quiet)
{
    fsi::RunConfig cfg = fsi::load_config(path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    const fsi::Discretization d = fsi::make_discretization(cfg);
    fsi::OutputWriter writer(cfg.output_dir, cfg, d);

    fsi::SystemState s0 = d.initial_state(cfg.rho0, cfg.ux, cfg.uy);
    if (!fsi::gap_guard(s0.frame, cfg.params.H, cfg.params.delta0).admissible) {
        std::cerr << "initial gap inadmissible\n";
        return kInvariant;
    }
    writer.add(s0, fsi::initial_ledger(d, s0));
    std::optional<fsi::SystemState> prev(s0);
    const int steps = cfg.steps();
    fsi::RunResult res;
    try {
        res = fsi::run(d, s0, steps, cfg.solver, [&](const fsi::SystemState& s, const fsi::StepStats& st) {
            const fsi::EnergyLedger L = fsi::energy_ledger(d, *prev, s);
            writer.add(s, L);
            if (!quiet)
                std::printf("step %6d  t=%.6f  newton=%2d  E=%.12e  mass=%.15e  min_rho=%.6e\n", s.level, s.time,
                            st.newton_iterations, L.E_f + L.E_s, L.mass, L.min_rho);
            prev = s;
        });
    } catch (const fsi::SolverError& e) {
        writer.finish(*prev);
        std::cerr << "solver failure after level " << prev->level << ": " << e.what() << "\n";
        return kSolver;
    }
    writer.finish(res.states.back());
    if (res.gap_stop)
        std::printf("stopped by the gap guard at knot %d (eta = %.6e); time reached %.6f\n", res.gap.knot,
                    res.gap.value, res.time_reached);
    else
        std::printf("completed %d steps; time reached %.6f\n", steps, res.time_reached);
    return kOk;
}

int cmd_verify(const std::string& path)
{
    const fsi::RunConfig cfg = fsi::load_config(path);
    const fsi::Discretization d = fsi::make_discretization(cfg);
    fsi::SystemState s0 = d.initial_state(cfg.rho0, cfg.ux, cfg.uy);
    fsi::RunResult res;
    try {
        res = fsi::run(d, s0, cfg.steps(), cfg.solver);
    } catch (const fsi::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kSolver;
    }
    bool ok = true;
    for (const auto& c : fsi::check_invariants(d, res.states, cfg.solver.tol)) {
        std::printf("[%s] %-34s worst %.3e  limit %.3e\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.worst,
                    c.limit);
        ok = ok && c.pass;
    }
    std::printf("%d steps checked\n", static_cast<int>(res.states.size()) - 1);
    return ok ? kOk : kInvariant;
}

int cmd_convergence(const std::string& path, int levels)
{
    const fsi::RunConfig cfg = fsi::load_config(path);
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    std::ofstream f(std::filesystem::path(cfg.output_dir) / "consistency.csv");
    if (!f) throw fsi::IoError("cannot write consistency.csv in '" + cfg.output_dir + "'");
    const auto rows = fsi::consistency_study(cfg, levels);
    f << fsi::consistency_csv(rows);
    for (const auto& r : rows)
        std::printf("nx=%4d  h=%.4e  tau=%.4e  den=%.6e  mom=%.6e\n", r.nx, r.h, r.tau, r.residual_den,
                    r.residual_mom);
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Compressible fluid / elastic plate interaction solver"};
    app.require_subcommand(1);
    std::string config, out;
    bool quiet = false;
    int levels = 3;

    auto* run = app.add_subcommand("run", "advance the configured problem and write outputs");
    run->add_option("config", config, "configuration file")->required();
    run->add_option("--out", out, "override the output directory");
    run->add_flag("-q,--quiet", quiet, "no per-step log");
    auto* verify = app.add_subcommand("verify", "run and check every invariant; nonzero exit on failure");
    verify->add_option("config", config, "configuration file")->required();
    auto* conv = app.add_subcommand("convergence", "refinement study of the weak-form defects");
    conv->add_option("config", config, "configuration file")->required();
    conv->add_option("--levels", levels, "number of refinement levels")->check(CLI::Range(1, 8));

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(config, out, quiet);
        if (*verify) return cmd_verify(config);
        if (*conv) return cmd_convergence(config, levels);
    } catch (const fsi::ConfigError& e) {
        for (const auto& v : e.violations()) std::cerr << "config error: " << v << "\n";
        return kConfig;
    } catch (const fsi::ParameterError& e) {
        for (const auto& v : e.violations()) std::cerr << "config error: " << v << "\n";
        return kConfig;
    } catch (const fsi::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kSolver;
    } catch (const fsi::InvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kInvariant;
    } catch (const fsi::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const std::domain_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kInvariant;
    }
    return kOk;
}
