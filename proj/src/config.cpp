#include "qfield/io/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "qfield/io/format.hpp"
#include "qfield/stationary.hpp"

namespace qfield::io {

ConfigError::ConfigError(int line, const std::string& key, const std::string& what)
    : ValidationError((line > 0 ? "line " + std::to_string(line) + ": " : std::string("config: ")) +
                      key + ": " + what),
      line_(line),
      key_(key) {}

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::gaussian: return "gaussian";
    case InitKind::planewave: return "planewave";
    case InitKind::mode_superposition: return "mode_superposition";
  }
  return "?";
}

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::free: return "free";
    case PotentialKind::harmonic: return "harmonic";
    case PotentialKind::barrier: return "barrier";
    case PotentialKind::well: return "well";
    case PotentialKind::tabulated: return "tabulated";
  }
  return "?";
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::spectral_free: return "spectral_free";
    case Scheme::split_step: return "split_step";
    case Scheme::leapfrog: return "leapfrog";
  }
  return "?";
}

namespace {

template <typename Enum>
Enum parse_enum(int line, const std::string& key, std::string_view text,
                std::initializer_list<Enum> options) {
  for (Enum e : options) {
    if (to_string(e) == text) return e;
  }
  std::string allowed;
  for (Enum e : options) allowed += (allowed.empty() ? "" : ", ") + to_string(e);
  throw ConfigError(line, key, "expected one of {" + allowed + "}, got '" + std::string(text) + "'");
}

double need_double(int line, const std::string& key, std::string_view text) {
  const auto v = parse_double(text);
  if (!v || !std::isfinite(*v)) {
    throw ConfigError(line, key, "expected a number, got '" + std::string(text) + "'");
  }
  return *v;
}

long need_integer(int line, const std::string& key, std::string_view text) {
  const auto v = parse_integer(text);
  if (!v) throw ConfigError(line, key, "expected an integer, got '" + std::string(text) + "'");
  return *v;
}

template <typename T, typename Parse>
std::vector<T> need_list(std::string_view text, Parse parse) {
  std::vector<T> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item =
        text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(static_cast<T>(parse(item)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void require(bool ok, int line, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(line, key, what);
}

using Setter = std::function<void(SimulationConfig&, int, const std::string&, std::string_view)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.xmin", [](auto& c, int l, auto& k, auto v) { c.grid.xmin = need_double(l, k, v); }},
      {"grid.xmax", [](auto& c, int l, auto& k, auto v) { c.grid.xmax = need_double(l, k, v); }},
      {"grid.n",
       [](auto& c, int l, auto& k, auto v) {
         c.grid.n = need_integer(l, k, v);
         require(c.grid.n >= 8, l, k, "must be at least 8");
       }},
      {"init.kind",
       [](auto& c, int l, auto& k, auto v) {
         c.init.kind = parse_enum(l, k, v, {InitKind::gaussian, InitKind::planewave,
                                            InitKind::mode_superposition});
       }},
      {"init.x0", [](auto& c, int l, auto& k, auto v) { c.init.x0 = need_double(l, k, v); }},
      {"init.sigma",
       [](auto& c, int l, auto& k, auto v) {
         c.init.sigma = need_double(l, k, v);
         require(c.init.sigma > 0, l, k, "must be positive");
       }},
      {"init.k", [](auto& c, int l, auto& k, auto v) { c.init.k = need_double(l, k, v); }},
      {"init.modes",
       [](auto& c, int l, auto& k, auto v) {
         c.init.modes = need_list<int>(v, [&](std::string_view s) {
           const long m = need_integer(l, k, s);
           require(m >= 0, l, k, "mode indices must be non-negative");
           return m;
         });
       }},
      {"init.weights",
       [](auto& c, int l, auto& k, auto v) {
         c.init.weights = need_list<double>(v, [&](std::string_view s) { return need_double(l, k, s); });
       }},
      {"potential.kind",
       [](auto& c, int l, auto& k, auto v) {
         c.potential.kind =
             parse_enum(l, k, v, {PotentialKind::free, PotentialKind::harmonic, PotentialKind::barrier,
                                  PotentialKind::well, PotentialKind::tabulated});
       }},
      {"potential.stiffness",
       [](auto& c, int l, auto& k, auto v) { c.potential.stiffness = need_double(l, k, v); }},
      {"potential.height",
       [](auto& c, int l, auto& k, auto v) { c.potential.height = need_double(l, k, v); }},
      {"potential.depth",
       [](auto& c, int l, auto& k, auto v) { c.potential.depth = need_double(l, k, v); }},
      {"potential.width",
       [](auto& c, int l, auto& k, auto v) {
         c.potential.width = need_double(l, k, v);
         require(c.potential.width > 0, l, k, "must be positive");
       }},
      {"potential.center",
       [](auto& c, int l, auto& k, auto v) { c.potential.center = need_double(l, k, v); }},
      {"potential.table_file",
       [](auto& c, int l, auto& k, auto v) {
         c.potential.table_file = std::string(v);
         require(!c.potential.table_file.empty(), l, k, "must not be empty");
       }},
      {"evolve.t_final",
       [](auto& c, int l, auto& k, auto v) {
         c.evolve.t_final = need_double(l, k, v);
         require(c.evolve.t_final > 0, l, k, "must be positive");
       }},
      {"evolve.dt",
       [](auto& c, int l, auto& k, auto v) {
         c.evolve.dt = need_double(l, k, v);
         require(c.evolve.dt > 0, l, k, "must be positive");
       }},
      {"evolve.scheme",
       [](auto& c, int l, auto& k, auto v) {
         c.evolve.scheme =
             parse_enum(l, k, v, {Scheme::spectral_free, Scheme::split_step, Scheme::leapfrog});
       }},
      {"evolve.record_every",
       [](auto& c, int l, auto& k, auto v) {
         const long r = need_integer(l, k, v);
         require(r >= 1, l, k, "must be at least 1");
         c.evolve.record_every = static_cast<int>(r);
       }},
      {"diagnostics.nmax",
       [](auto& c, int l, auto& k, auto v) {
         const long n = need_integer(l, k, v);
         require(n >= 1 && n <= 16, l, k, "must be in [1, 16]");
         c.diagnostics.nmax = static_cast<int>(n);
       }},
      {"diagnostics.confinement_threshold",
       [](auto& c, int l, auto& k, auto v) {
         c.diagnostics.confinement_threshold = need_double(l, k, v);
         require(c.diagnostics.confinement_threshold > 0, l, k, "must be positive");
       }},
  };
  return table;
}

// Cross-field checks that cannot be pinned to one value.
void validate(const SimulationConfig& c, const std::map<std::string, int>& lines) {
  auto line_of = [&](const std::string& key) {
    const auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
  };
  require(c.grid.xmax > c.grid.xmin, line_of("grid.xmax"), "grid.xmax", "must exceed grid.xmin");
  if (c.init.kind == InitKind::mode_superposition) {
    require(!c.init.modes.empty(), line_of("init.modes"), "init.modes",
            "required for init.kind = mode_superposition");
    require(c.init.weights.empty() || c.init.weights.size() == c.init.modes.size(),
            line_of("init.weights"), "init.weights", "must have one weight per mode");
    for (int m : c.init.modes) {
      require(m < c.grid.n, line_of("init.modes"), "init.modes", "mode index exceeds grid size");
    }
  }
  if (c.potential.kind == PotentialKind::tabulated) {
    require(!c.potential.table_file.empty(), line_of("potential.table_file"),
            "potential.table_file", "required for potential.kind = tabulated");
  }
  try {
    step_count(evolve_config_from(c));
  } catch (const ValidationError& e) {
    throw ConfigError(line_of("evolve.dt"), "evolve.dt", e.what());
  }
}

}  // namespace

SimulationConfig parse_config(std::string_view text) {
  SimulationConfig config;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view body = raw;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line, std::string(body), "expected 'key = value'");
    }
    const std::string key(trim(body.substr(0, eq)));
    const std::string_view value = trim(body.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(line, key, "unknown key");
    if (seen.contains(key)) {
      throw ConfigError(line, key, "duplicate key (first set on line " + std::to_string(seen[key]) + ")");
    }
    seen[key] = line;
    it->second(config, line, key, value);
  }
  validate(config, seen);
  return config;
}

std::string serialize_config(const SimulationConfig& c) {
  std::ostringstream out;
  auto join_ints = [](const std::vector<int>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
    return s;
  };
  auto join_doubles = [](const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + format_double(xs[i]);
    return s;
  };
  out << "grid.xmin = " << format_double(c.grid.xmin) << '\n'
      << "grid.xmax = " << format_double(c.grid.xmax) << '\n'
      << "grid.n = " << c.grid.n << '\n'
      << "init.kind = " << to_string(c.init.kind) << '\n'
      << "init.x0 = " << format_double(c.init.x0) << '\n'
      << "init.sigma = " << format_double(c.init.sigma) << '\n'
      << "init.k = " << format_double(c.init.k) << '\n';
  if (!c.init.modes.empty()) out << "init.modes = " << join_ints(c.init.modes) << '\n';
  if (!c.init.weights.empty()) out << "init.weights = " << join_doubles(c.init.weights) << '\n';
  out << "potential.kind = " << to_string(c.potential.kind) << '\n'
      << "potential.stiffness = " << format_double(c.potential.stiffness) << '\n'
      << "potential.height = " << format_double(c.potential.height) << '\n'
      << "potential.depth = " << format_double(c.potential.depth) << '\n'
      << "potential.width = " << format_double(c.potential.width) << '\n'
      << "potential.center = " << format_double(c.potential.center) << '\n';
  if (!c.potential.table_file.empty()) out << "potential.table_file = " << c.potential.table_file << '\n';
  out << "evolve.t_final = " << format_double(c.evolve.t_final) << '\n'
      << "evolve.dt = " << format_double(c.evolve.dt) << '\n'
      << "evolve.scheme = " << to_string(c.evolve.scheme) << '\n'
      << "evolve.record_every = " << c.evolve.record_every << '\n'
      << "diagnostics.nmax = " << c.diagnostics.nmax << '\n'
      << "diagnostics.confinement_threshold = " << format_double(c.diagnostics.confinement_threshold)
      << '\n';
  return out.str();
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  SimulationConfig config = parse_config(buffer.str());
  if (!config.potential.table_file.empty()) {
    const std::filesystem::path table(config.potential.table_file);
    if (table.is_relative()) {
      config.potential.table_file = (path.parent_path() / table).string();
    }
  }
  return config;
}

GridSpec<double> grid_from(const SimulationConfig& config) {
  return make_grid(config.grid.xmin, config.grid.xmax, static_cast<Index>(config.grid.n));
}

PotentialSpec<double> potential_from(const SimulationConfig& config, const GridSpec<double>& grid) {
  const auto& p = config.potential;
  switch (p.kind) {
    case PotentialKind::free: return PotentialSpec<double>::free();
    case PotentialKind::harmonic: return PotentialSpec<double>::harmonic(p.stiffness, p.center);
    case PotentialKind::barrier: return PotentialSpec<double>::barrier(p.height, p.width, p.center);
    case PotentialKind::well: return PotentialSpec<double>::well(p.depth, p.width, p.center);
    case PotentialKind::tabulated: break;
  }
  std::ifstream in(p.table_file);
  if (!in) throw IoError("cannot open potential table " + p.table_file);
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    const auto v = parse_double(token);
    if (!v || !std::isfinite(*v)) throw IoError("bad value '" + token + "' in " + p.table_file);
    values.push_back(*v);
  }
  if (static_cast<Index>(values.size()) != grid.n_points) {
    throw ValidationError("potential table has " + std::to_string(values.size()) +
                          " values, grid has " + std::to_string(grid.n_points));
  }
  return PotentialSpec<double>::tabulated(
      Eigen::Map<const VectorX<double>>(values.data(), static_cast<Index>(values.size())));
}

EvolveConfig evolve_config_from(const SimulationConfig& config) {
  EvolveConfig e;
  e.t_final = config.evolve.t_final;
  e.dt = config.evolve.dt;
  e.scheme = config.evolve.scheme;
  e.record_every = config.evolve.record_every;
  e.n_max = config.diagnostics.nmax;
  e.confinement_threshold = config.diagnostics.confinement_threshold;
  return e;
}

FieldState<double> build_initial_state(const SimulationConfig& config) {
  const auto grid = grid_from(config);
  const auto& init = config.init;
  switch (init.kind) {
    case InitKind::gaussian: {
      if (init.sigma > grid.length() / 10) {
        throw ValidationError("gaussian sigma " + format_double(init.sigma) +
                              " exceeds box length / 10; the packet would not be confined");
      }
      auto s = FieldState<double>::zero(grid);
      for (Index i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        const double d = (x - init.x0) / init.sigma;
        const double env = std::exp(-0.5 * d * d);
        s.a[i] = env * std::cos(init.k * x);
        s.b[i] = env * std::sin(init.k * x);
      }
      return normalize(s);
    }
    case InitKind::planewave:
      return plane_wave_state(init.k, grid);
    case InitKind::mode_superposition: {
      const auto potential = potential_from(config, grid);
      int highest = 0;
      for (int m : init.modes) highest = std::max(highest, m);
      const auto modes = eigenmodes(potential, grid, highest + 1);
      VectorX<double> phi = VectorX<double>::Zero(grid.n_points);
      for (std::size_t j = 0; j < init.modes.size(); ++j) {
        const double w = init.weights.empty() ? 1.0 : init.weights[j];
        phi += w * modes[init.modes[j]].profile;
      }
      return normalize(FieldState<double>{grid, phi, VectorX<double>::Zero(grid.n_points), 0.0});
    }
  }
  throw ValidationError("unknown init kind");
}

}  // namespace qfield::io
