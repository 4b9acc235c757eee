#include "fsi/output.hpp"

#include <cstdio>
#include <ostream>

#include "fsi/format.hpp"

namespace fsi {

std::string energy_csv_header()
{
    return "step,time,E_f,E_s,visc,penalty,D1,D2,jump_kinetic,mass,min_rho,min_gap,energy_residual";
}

std::string energy_csv_row(const EnergyLedger& L)
{
    std::string s = std::to_string(L.step);
    for (double v : {L.time, L.E_f, L.E_s, L.visc, L.penalty, L.D1, L.D2, L.jump_kinetic, L.mass, L.min_rho,
                     L.min_gap, L.residual})
        s += "," + fmt17(v);
    return s;
}

void write_snapshot(std::ostream& os, const Discretization& d, const SystemState& s)
{
    const ReferenceMesh& m = d.mesh();
    os << "STEP " << s.level << " " << fmt17(s.time) << "\n";
    os << "VERTICES " << m.num_vertices() << "\n";
    for (int v = 0; v < m.num_vertices(); ++v)
        os << v << " " << fmt17(s.frame.x[v].x()) << " " << fmt17(s.frame.x[v].y()) << "\n";
    os << "CELLS " << m.num_cells() << "\n";
    for (int c = 0; c < m.num_cells(); ++c)
        os << c << " " << m.cells[c].v[0] << " " << m.cells[c].v[1] << " " << m.cells[c].v[2] << "\n";
    os << "RHO " << m.num_cells() << "\n";
    for (int c = 0; c < m.num_cells(); ++c) os << c << " " << fmt17(s.fluid.rho[c]) << "\n";
    os << "U_EDGES " << m.num_edges() << "\n";
    for (int e = 0; e < m.num_edges(); ++e)
        os << e << " " << fmt17(s.fluid.u(e, 0)) << " " << fmt17(s.fluid.u(e, 1)) << "\n";
    const auto& knots = m.knots;
    const Eigen::VectorXd eta = d.shell_space().knot_values(s.shell.eta);
    const Eigen::VectorXd z = d.shell_space().knot_values(s.shell.z);
    os << "ETA " << knots.size() << "\n";
    for (std::size_t i = 0; i < knots.size(); ++i) os << i << " " << fmt17(knots[i]) << " " << fmt17(eta[i]) << "\n";
    os << "Z " << knots.size() << "\n";
    for (std::size_t i = 0; i < knots.size(); ++i) os << i << " " << fmt17(knots[i]) << " " << fmt17(z[i]) << "\n";
}

OutputWriter::OutputWriter(const std::filesystem::path& dir, const RunConfig& cfg, const Discretization& d)
    : dir_(dir), d_(d), stride_(cfg.stride)
{
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_))
        throw IoError("cannot create output directory '" + dir_.string() + "'");
    {
        std::ofstream meta(dir_ / "run.meta");
        if (!meta) throw IoError("output directory '" + dir_.string() + "' is not writable");
        meta << print_config(cfg);
        if (!meta) throw IoError("cannot write run.meta");
    }
    {
        std::ofstream mesh(dir_ / "mesh.txt");
        write_mesh_snapshot(mesh, d.mesh());
    }
    energy_.open(dir_ / "energy.csv");
    if (!energy_) throw IoError("cannot write energy.csv");
    energy_ << energy_csv_header() << "\n";
    energy_.flush();
}

void OutputWriter::add(const SystemState& s, const EnergyLedger& L)
{
    if (s.level > 0) {
        energy_ << energy_csv_row(L) << "\n";
        energy_.flush();
    }
    if (s.level % stride_ == 0) {
        char name[32];
        std::snprintf(name, sizeof name, "state_%06d.txt", s.level);
        std::ofstream f(dir_ / name);
        write_snapshot(f, d_, s);
        if (!f) throw IoError(std::string("cannot write ") + name);
        last_snapshot_ = s.level;
    }
}

void OutputWriter::finish(const SystemState& last)
{
    if (last.level != last_snapshot_) {
        char name[32];
        std::snprintf(name, sizeof name, "state_%06d.txt", last.level);
        std::ofstream f(dir_ / name);
        write_snapshot(f, d_, last);
        last_snapshot_ = last.level;
    }
    energy_.flush();
}

void write_outputs(const std::filesystem::path& dir, const RunConfig& cfg, const Discretization& d,
                   const std::vector<SystemState>& states, const std::vector<EnergyLedger>& ledgers)
{
    OutputWriter w(dir, cfg, d);
    for (std::size_t i = 0; i < states.size(); ++i) w.add(states[i], ledgers.at(i));
    if (!states.empty()) w.finish(states.back());
}

}  // namespace fsi
