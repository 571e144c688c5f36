#pragma once

// Flat key-value run configuration:
//
//   # comment
//   grid.n = 1024
//   init.kind = gaussian
//
// One pair per line, dotted section keys. Every key has a default except
// those required by the chosen kinds (init.modes for mode_superposition,
// potential.table_file for tabulated).

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qfield/dynamics.hpp"
#include "qfield/potential.hpp"

namespace qfield::io {

/// Validation failure tied to a line of the config document (0 when the
/// problem is not attached to a single line).
class ConfigError : public ValidationError {
 public:
  ConfigError(int line, const std::string& key, const std::string& what);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

enum class InitKind { gaussian, planewave, mode_superposition };

struct SimulationConfig {
  struct Grid {
    double xmin = -40.0;
    double xmax = 40.0;
    long n = 1024;
    bool operator==(const Grid&) const = default;
  } grid;

  struct Init {
    InitKind kind = InitKind::gaussian;
    double x0 = 0.0;
    double sigma = 1.0;
    double k = 0.0;
    std::vector<int> modes;
    std::vector<double> weights;
    bool operator==(const Init&) const = default;
  } init;

  struct Potential {
    PotentialKind kind = PotentialKind::free;
    double stiffness = 1.0;
    double height = 1.0;
    double depth = 1.0;
    double width = 1.0;
    double center = 0.0;
    std::string table_file;
    bool operator==(const Potential&) const = default;
  } potential;

  struct Evolve {
    double t_final = 1.0;
    double dt = 1e-3;
    Scheme scheme = Scheme::split_step;
    int record_every = 10;
    bool operator==(const Evolve&) const = default;
  } evolve;

  struct Diagnostics {
    int nmax = kDefaultNMax;
    double confinement_threshold = kDefaultConfinementThreshold;
    bool operator==(const Diagnostics&) const = default;
  } diagnostics;

  bool operator==(const SimulationConfig&) const = default;
};

SimulationConfig parse_config(std::string_view text);
std::string serialize_config(const SimulationConfig& config);

/// Reads and parses a config file. A relative potential.table_file is
/// resolved against the config file's directory.
SimulationConfig load_config(const std::filesystem::path& path);

GridSpec<double> grid_from(const SimulationConfig& config);
PotentialSpec<double> potential_from(const SimulationConfig& config, const GridSpec<double>& grid);
EvolveConfig evolve_config_from(const SimulationConfig& config);

/// gaussian: normalized packet phi(x) (cos kx, sin kx); planewave: the
/// per-period plane wave; mode_superposition: weighted eigenmodes of the
/// configured potential, normalized.
FieldState<double> build_initial_state(const SimulationConfig& config);

std::string to_string(InitKind kind);
std::string to_string(PotentialKind kind);
std::string to_string(Scheme scheme);

}  // namespace qfield::io
