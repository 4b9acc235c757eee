#pragma once

/// \file output.hpp
/// energy.csv, state_<step>.txt snapshots, mesh.txt and run.meta.

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsi/config.hpp"
#include "fsi/diagnostics.hpp"

namespace fsi {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string energy_csv_header();
std::string energy_csv_row(const EnergyLedger& L);

/// STEP, VERTICES, CELLS, RHO, U_EDGES, ETA, Z. ETA and Z hold the nodal
/// values at the knots as "index r value".
void write_snapshot(std::ostream& os, const Discretization& d, const SystemState& s);

/// Streams outputs while a run progresses. The directory is created and
/// probed for writability in the constructor.
class OutputWriter {
public:
    OutputWriter(const std::filesystem::path& dir, const RunConfig& cfg, const Discretization& d);

    /// Level 0 writes the initial snapshot only; later levels append a CSV
    /// row and write a snapshot every `stride` levels.
    void add(const SystemState& s, const EnergyLedger& L);
    /// Writes the last state's snapshot if the stride skipped it.
    void finish(const SystemState& last);
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    const Discretization& d_;
    int stride_;
    std::ofstream energy_;
    int last_snapshot_ = -1;
};

/// Batch version over a finished trajectory; ledgers[i] belongs to states[i].
void write_outputs(const std::filesystem::path& dir, const RunConfig& cfg, const Discretization& d,
                   const std::vector<SystemState>& states, const std::vector<EnergyLedger>& ledgers);

}  // namespace fsi
