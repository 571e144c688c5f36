#include "qfield/io/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include "qfield/io/config.hpp"
#include "qfield/io/csv.hpp"
#include "qfield/io/format.hpp"
#include "qfield/io/snapshot.hpp"
#include "qfield/oracle.hpp"
#include "qfield/stationary.hpp"
#include "qfield/transforms.hpp"

namespace qfield::io {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

struct EvolveArgs {
  std::string config;
  std::string out;
  std::string snapshots;
  int every = 1;
};

void run_evolve(const EvolveArgs& args) {
  const SimulationConfig cfg = load_config(args.config);
  const auto initial = build_initial_state(cfg);
  const auto potential = potential_from(cfg, initial.grid);
  if (!args.snapshots.empty()) fs::create_directories(args.snapshots);
  int index = 0;
  RecordObserver<double> observer;
  if (!args.snapshots.empty()) {
    observer = [&](const FieldState<double>& state, const DiagnosticsRecord<double>&) {
      if (index % args.every == 0) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%06d.qfld", index);
        save_snapshot(state, fs::path(args.snapshots) / name);
      }
      ++index;
    };
  }
  const auto result = evolve(initial, potential, evolve_config_from(cfg), observer);
  auto out = open_output(args.out);
  write_diagnostics_csv(result.records, out, cfg.diagnostics.nmax);
}

void run_diagnose(const std::string& in, int nmax, std::ostream& out) {
  const auto state = load_snapshot(in);
  const auto rec = integrate_invariants(state, nmax);
  out << "t=" << format_double(rec.time) << '\n';
  for (int n = 0; n <= nmax; ++n) out << 'M' << n << '=' << format_double(rec.m[n]) << '\n';
  for (int n = 0; n <= nmax; ++n) out << 'P' << n << '=' << format_double(rec.p[n]) << '\n';
  out << "X=" << format_double(rec.center) << '\n'
      << "H=" << format_double(rec.energy) << '\n'
      << "boundary_max=" << format_double(rec.boundary_max) << '\n'
      << "confined=" << (rec.confined ? "true" : "false") << '\n';
}

void run_boost(const std::string& in, double v, const std::string& out_path) {
  const auto state = load_snapshot(in);
  save_snapshot(boost(state, BoostParams<double>{v}), out_path);
}

void run_stationary(const std::string& config, long count, const std::string& out_path) {
  const SimulationConfig cfg = load_config(config);
  const auto grid = grid_from(cfg);
  const auto potential = potential_from(cfg, grid);
  const auto modes = eigenmodes(potential, grid, count);
  auto out = open_output(out_path);
  out << "index,E,residual\n";
  const fs::path base(out_path);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    out << i << ',' << format_double(modes[i].energy) << ',' << format_double(modes[i].residual)
        << '\n';
    const fs::path snap =
        base.parent_path() / (base.stem().string() + "_mode" + std::to_string(i) + ".qfld");
    save_snapshot(stationary_state_from_mode(modes[i], 0.0), snap);
  }
  out.flush();
  if (!out) throw IoError("failed writing " + out_path);
}

void run_compare_oracle(const std::string& config, const std::string& out_path) {
  const SimulationConfig cfg = load_config(config);
  const auto initial = build_initial_state(cfg);
  const auto potential = potential_from(cfg, initial.grid);
  std::vector<FieldState<double>> states;
  evolve(initial, potential, evolve_config_from(cfg),
         RecordObserver<double>([&](const FieldState<double>& s, const DiagnosticsRecord<double>&) {
           states.push_back(s);
         }));
  auto out = open_output(out_path);
  out << "t,max_abs_diff\n";
  auto reference = oracle::to_complex(initial);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i > 0) {
      reference = oracle::schrodinger_evolve(reference, potential,
                                             states[i].time - states[i - 1].time, cfg.evolve.dt);
    }
    const auto ref = oracle::from_complex(reference);
    const double diff = std::max((ref.a - states[i].a).cwiseAbs().maxCoeff(),
                                 (ref.b - states[i].b).cwiseAbs().maxCoeff());
    out << format_double(states[i].time) << ',' << format_double(diff) << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed writing " + out_path);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-real-field quantum dynamics laboratory", "qfield"};
  app.require_subcommand(1);

  EvolveArgs evolve_args;
  auto* evolve_cmd = app.add_subcommand("evolve", "Integrate a configured run and write diagnostics CSV");
  evolve_cmd->add_option("--config", evolve_args.config, "Config file")->required();
  evolve_cmd->add_option("--out", evolve_args.out, "Diagnostics CSV output")->required();
  auto* snap_opt = evolve_cmd->add_option("--snapshots", evolve_args.snapshots,
                                          "Directory for state snapshots");
  evolve_cmd->add_option("--every", evolve_args.every, "Snapshot every N records")
      ->check(CLI::PositiveNumber)
      ->needs(snap_opt);

  std::string diag_in;
  int diag_nmax = kDefaultNMax;
  auto* diagnose_cmd = app.add_subcommand("diagnose", "Print integrated invariants of a snapshot");
  diagnose_cmd->add_option("--in", diag_in, "Snapshot file")->required();
  diagnose_cmd->add_option("--nmax", diag_nmax, "Highest order")->check(CLI::Range(1, 16));

  std::string boost_in, boost_out;
  double boost_v = 0;
  auto* boost_cmd = app.add_subcommand("boost", "Galilean boost of a snapshot");
  boost_cmd->add_option("--in", boost_in, "Input snapshot")->required();
  boost_cmd->add_option("--v", boost_v, "Boost velocity")->required();
  boost_cmd->add_option("--out", boost_out, "Output snapshot")->required();

  std::string stat_config, stat_out;
  long stat_count = 1;
  auto* stationary_cmd = app.add_subcommand("stationary", "Solve for the lowest eigenmodes");
  stationary_cmd->add_option("--config", stat_config, "Config file")->required();
  stationary_cmd->add_option("--count", stat_count, "Number of modes")->check(CLI::PositiveNumber);
  stationary_cmd->add_option("--out", stat_out, "CSV of (index, E, residual)")->required();

  std::string cmp_config, cmp_out;
  auto* compare_cmd =
      app.add_subcommand("compare-oracle", "Compare the field-pair run with the complex integrator");
  compare_cmd->add_option("--config", cmp_config, "Config file")->required();
  compare_cmd->add_option("--out", cmp_out, "CSV of per-record max-norm differences")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitValidation;
  }

  try {
    if (*evolve_cmd) run_evolve(evolve_args);
    if (*diagnose_cmd) run_diagnose(diag_in, diag_nmax, out);
    if (*boost_cmd) run_boost(boost_in, boost_v, boost_out);
    if (*stationary_cmd) run_stationary(stat_config, stat_count, stat_out);
    if (*compare_cmd) run_compare_oracle(cmp_config, cmp_out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace qfield::io
