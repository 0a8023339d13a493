#include "nlbeam/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "nlbeam/io.hpp"

namespace nlbeam {

namespace {

[[noreturn]] void bad_value(const std::string& path, const std::string& what,
                            const std::string& value) {
  throw ConfigError(path + ": expected " + what + ", got '" + value + "'");
}

Real parse_real(const std::string& path, const std::string& s) {
  try {
    std::size_t pos = 0;
    const Real v = std::stod(s, &pos);
    if (pos != s.size()) bad_value(path, "a real number", s);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(path, "a real number", s);
  }
}

long long parse_integer(const std::string& path, const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) bad_value(path, "an integer", s);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(path, "an integer", s);
  }
}

bool parse_bool(const std::string& path, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  bad_value(path, "a boolean (true/false)", s);
}

std::vector<Real> parse_real_list(const std::string& path,
                                  const std::string& s) {
  std::vector<Real> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(parse_real(path, item));
  return out;
}

std::string fmt_real_list(const std::vector<Real>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt_real(v[i]);
  }
  return out;
}

struct Binding {
  std::string section;
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
};

template <class T>
Binding bind_field(const char* sec, const char* key, T RunConfig::*f);

template <>
Binding bind_field<int>(const char* sec, const char* key, int RunConfig::*f) {
  return {sec, key,
          [f](const RunConfig& c) { return std::to_string(c.*f); },
          [f](RunConfig& c, const std::string& v, const std::string& p) {
            c.*f = static_cast<int>(parse_integer(p, v));
          }};
}

template <>
Binding bind_field<long>(const char* sec, const char* key,
                         long RunConfig::*f) {
  return {sec, key,
          [f](const RunConfig& c) { return std::to_string(c.*f); },
          [f](RunConfig& c, const std::string& v, const std::string& p) {
            c.*f = static_cast<long>(parse_integer(p, v));
          }};
}

template <>
Binding bind_field<std::uint64_t>(const char* sec, const char* key,
                                  std::uint64_t RunConfig::*f) {
  return {sec, key,
          [f](const RunConfig& c) { return std::to_string(c.*f); },
          [f](RunConfig& c, const std::string& v, const std::string& p) {
            try {
              std::size_t pos = 0;
              c.*f = std::stoull(v, &pos);
              if (pos != v.size()) bad_value(p, "an unsigned integer", v);
            } catch (const ConfigError&) {
              throw;
            } catch (const std::exception&) {
              bad_value(p, "an unsigned integer", v);
            }
          }};
}

template <>
Binding bind_field<Real>(const char* sec, const char* key,
                         Real RunConfig::*f) {
  return {sec, key,
          [f](const RunConfig& c) { return fmt_real(c.*f); },
          [f](RunConfig& c, const std::string& v, const std::string& p) {
            c.*f = parse_real(p, v);
          }};
}

template <>
Binding bind_field<bool>(const char* sec, const char* key,
                         bool RunConfig::*f) {
  return {sec, key,
          [f](const RunConfig& c) { return c.*f ? "true" : "false"; },
          [f](RunConfig& c, const std::string& v, const std::string& p) {
            c.*f = parse_bool(p, v);
          }};
}

template <>
Binding bind_field<std::string>(const char* sec, const char* key,
                                std::string RunConfig::*f) {
  return {sec, key, [f](const RunConfig& c) { return c.*f; },
          [f](RunConfig& c, const std::string& v, const std::string&) {
            c.*f = v;
          }};
}

template <>
Binding bind_field<std::vector<Real>>(const char* sec, const char* key,
                                      std::vector<Real> RunConfig::*f) {
  return {sec, key,
          [f](const RunConfig& c) { return fmt_real_list(c.*f); },
          [f](RunConfig& c, const std::string& v, const std::string& p) {
            c.*f = parse_real_list(p, v);
          }};
}

template <class T>
Binding bind_data(const char* key, InitialDataSpec RunConfig::*d,
                  T InitialDataSpec::*f);

template <>
Binding bind_data<Real>(const char* key, InitialDataSpec RunConfig::*d,
                        Real InitialDataSpec::*f) {
  return {"data", key,
          [d, f](const RunConfig& c) { return fmt_real(c.*d.*f); },
          [d, f](RunConfig& c, const std::string& v, const std::string& p) {
            (c.*d).*f = parse_real(p, v);
          }};
}

template <>
Binding bind_data<int>(const char* key, InitialDataSpec RunConfig::*d,
                       int InitialDataSpec::*f) {
  return {"data", key,
          [d, f](const RunConfig& c) { return std::to_string(c.*d.*f); },
          [d, f](RunConfig& c, const std::string& v, const std::string& p) {
            (c.*d).*f = static_cast<int>(parse_integer(p, v));
          }};
}

template <>
Binding bind_data<std::uint64_t>(const char* key,
                                 InitialDataSpec RunConfig::*d,
                                 std::uint64_t InitialDataSpec::*f) {
  return {"data", key,
          [d, f](const RunConfig& c) { return std::to_string(c.*d.*f); },
          [d, f](RunConfig& c, const std::string& v, const std::string& p) {
            try {
              std::size_t pos = 0;
              (c.*d).*f = std::stoull(v, &pos);
              if (pos != v.size()) bad_value(p, "an unsigned integer", v);
            } catch (const ConfigError&) {
              throw;
            } catch (const std::exception&) {
              bad_value(p, "an unsigned integer", v);
            }
          }};
}

Binding bind_family(const char* key, InitialDataSpec RunConfig::*d) {
  return {"data", key,
          [d](const RunConfig& c) { return family_name((c.*d).family); },
          [d](RunConfig& c, const std::string& v, const std::string& p) {
            try {
              (c.*d).family = family_from_name(v);
            } catch (const ConfigError&) {
              bad_value(p, "a data family name", v);
            }
          }};
}

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table = {
      bind_field("grid", "dim", &RunConfig::dim),
      bind_field("grid", "n", &RunConfig::n),
      bind_field("grid", "length", &RunConfig::length),

      bind_field("physics", "m", &RunConfig::m),
      bind_field("physics", "p", &RunConfig::p),
      bind_field("physics", "lambda", &RunConfig::lambda),

      bind_field("data", "sigma0", &RunConfig::sigma0),
      bind_family("u0_family", &RunConfig::u0),
      bind_data("u0_amplitude", &RunConfig::u0, &InitialDataSpec::amplitude),
      bind_data("u0_width", &RunConfig::u0, &InitialDataSpec::width),
      bind_data("u0_a", &RunConfig::u0, &InitialDataSpec::a),
      bind_data("u0_k", &RunConfig::u0, &InitialDataSpec::k),
      bind_data("u0_band", &RunConfig::u0, &InitialDataSpec::band),
      bind_data("u0_seed", &RunConfig::u0, &InitialDataSpec::seed),
      bind_family("u1_family", &RunConfig::u1),
      bind_data("u1_amplitude", &RunConfig::u1, &InitialDataSpec::amplitude),
      bind_data("u1_width", &RunConfig::u1, &InitialDataSpec::width),
      bind_data("u1_a", &RunConfig::u1, &InitialDataSpec::a),
      bind_data("u1_k", &RunConfig::u1, &InitialDataSpec::k),
      bind_data("u1_band", &RunConfig::u1, &InitialDataSpec::band),
      bind_data("u1_seed", &RunConfig::u1, &InitialDataSpec::seed),

      bind_field("scheme", "integrator", &RunConfig::integrator),
      bind_field("scheme", "dt", &RunConfig::dt),
      bind_field("scheme", "T", &RunConfig::T),
      bind_field("scheme", "output_stride", &RunConfig::output_stride),
      bind_field("scheme", "energy_drift_abort",
                 &RunConfig::energy_drift_abort),
      bind_field("scheme", "picard_sigma", &RunConfig::picard_sigma),
      bind_field("scheme", "picard_c0", &RunConfig::picard_c0),
      bind_field("scheme", "delta_max", &RunConfig::delta_max),
      bind_field("scheme", "picard_steps", &RunConfig::picard_steps),
      bind_field("scheme", "picard_tol", &RunConfig::picard_tol),
      bind_field("scheme", "picard_max_iter", &RunConfig::picard_max_iter),

      bind_field("analyticity", "sigmas", &RunConfig::sigmas),
      bind_field("analyticity", "delta_window", &RunConfig::delta_window),
      bind_field("analyticity", "noise_floor", &RunConfig::noise_floor),
      bind_field("analyticity", "drop_top_decade",
                 &RunConfig::drop_top_decade),
      bind_field("analyticity", "prefactor_s", &RunConfig::prefactor_s),
      bind_field("analyticity", "min_modes", &RunConfig::min_modes),
      bind_field("analyticity", "c_fit", &RunConfig::c_fit),

      bind_field("run", "seed", &RunConfig::seed),
      bind_field("run", "threads", &RunConfig::threads),
      bind_field("run", "samples", &RunConfig::samples),
      bind_field("run", "out", &RunConfig::out),
  };
  return table;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string upper(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::toupper(ch));
  return s;
}

}  // namespace

RunConfig parse_config_text(const std::string& text,
                            const std::string& origin) {
  std::map<std::string, const Binding*> index;
  for (const Binding& b : bindings()) index[b.section + "." + b.key] = &b;

  RunConfig cfg;
  std::set<std::string> seen;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(where + ": malformed section header '" + line +
                          "'");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError(where + ": key '" + key + "' appears before any "
                        "[section]");
    const std::string path = section + "." + key;
    const auto it = index.find(path);
    if (it == index.end())
      throw ConfigError(where + ": unknown key " + path);
    if (!seen.insert(path).second)
      throw ConfigError(where + ": duplicate key " + path);
    it->second->set(cfg, value, path);
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  RunConfig cfg = parse_config_text(read_text_file(path), path);
  apply_env_overrides(cfg);
  return cfg;
}

void apply_env_overrides(RunConfig& cfg) {
  for (const Binding& b : bindings()) {
    const std::string name =
        "NLBEAM_" + upper(b.section) + "_" + upper(b.key);
    if (const char* v = std::getenv(name.c_str()))
      b.set(cfg, v, name + " (env override of " + b.section + "." + b.key +
                        ")");
  }
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const Binding& b : bindings()) {
    if (b.section != section) {
      if (!section.empty()) out += "\n";
      section = b.section;
      out += "[" + section + "]\n";
    }
    out += b.key + " = " + b.get(cfg) + "\n";
  }
  return out;
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = serialize_config(cfg);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void validate_data(const InitialDataSpec& d, const std::string& prefix,
                   const RunConfig& cfg) {
  using Family = InitialDataSpec::Family;
  if (!std::isfinite(d.amplitude))
    throw ConfigError(prefix + "_amplitude: must be finite");
  switch (d.family) {
    case Family::GaussianBump:
      if (!(d.width > 0))
        throw ConfigError(prefix + "_width: must be > 0");
      break;
    case Family::LorentzPole:
      if (cfg.dim != 1)
        throw ConfigError(prefix + "_family: lorentz_pole requires grid.dim "
                          "= 1");
      if (!(d.a > 0)) throw ConfigError(prefix + "_a: must be > 0");
      break;
    case Family::ExpDecaySpectrum:
      if (!(d.a > 0)) throw ConfigError(prefix + "_a: must be > 0");
      break;
    case Family::SingleMode:
      if (d.k < 0 || d.k >= cfg.n / 2)
        throw ConfigError(prefix + "_k: must lie in [0, grid.n/2)");
      break;
    case Family::RandomBandLimited:
      if (d.band < 1) throw ConfigError(prefix + "_band: must be >= 1");
      break;
    case Family::Zero:
      break;
  }
}

}  // namespace

void validate_config(const RunConfig& cfg) {
  try {
    make_grid(cfg.dim, cfg.n, cfg.length);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  if (!(cfg.m > 0) || !std::isfinite(cfg.m))
    throw ConfigError("physics.m: must be positive and finite");
  if (cfg.p < 1 || cfg.p % 2 == 0)
    throw ConfigError("physics.p: must be odd and >= 1");
  if (!(cfg.lambda >= 0) || !std::isfinite(cfg.lambda))
    throw ConfigError("physics.lambda: must be finite and >= 0");
  if (!(cfg.sigma0 >= 0) || !std::isfinite(cfg.sigma0))
    throw ConfigError("data.sigma0: must be finite and >= 0");
  validate_data(cfg.u0, "data.u0", cfg);
  validate_data(cfg.u1, "data.u1", cfg);
  if (cfg.integrator != "strang" && cfg.integrator != "picard")
    throw ConfigError("scheme.integrator: must be 'strang' or 'picard'");
  if (!(cfg.dt > 0)) throw ConfigError("scheme.dt: must be > 0");
  if (!(cfg.T >= 0)) throw ConfigError("scheme.T: must be >= 0");
  if (cfg.output_stride < 0)
    throw ConfigError("scheme.output_stride: must be >= 0");
  if (!(cfg.energy_drift_abort > 0))
    throw ConfigError("scheme.energy_drift_abort: must be > 0");
  if (!(cfg.picard_sigma >= 0))
    throw ConfigError("scheme.picard_sigma: must be >= 0");
  if (!(cfg.picard_c0 > 0)) throw ConfigError("scheme.picard_c0: must be > 0");
  if (!(cfg.delta_max > 0)) throw ConfigError("scheme.delta_max: must be > 0");
  if (cfg.picard_steps < 1)
    throw ConfigError("scheme.picard_steps: must be >= 1");
  if (!(cfg.picard_tol > 0))
    throw ConfigError("scheme.picard_tol: must be > 0");
  if (cfg.picard_max_iter < 1)
    throw ConfigError("scheme.picard_max_iter: must be >= 1");
  for (std::size_t i = 0; i < cfg.sigmas.size(); ++i) {
    if (!(cfg.sigmas[i] >= 0) || !std::isfinite(cfg.sigmas[i]))
      throw ConfigError("analyticity.sigmas: entries must be finite and >= "
                        "0");
    if (i > 0 && !(cfg.sigmas[i] > cfg.sigmas[i - 1]))
      throw ConfigError("analyticity.sigmas: must be strictly increasing");
  }
  if (!(cfg.delta_window >= 0))
    throw ConfigError("analyticity.delta_window: must be >= 0");
  if (!(cfg.noise_floor > 0) || !(cfg.noise_floor < 1))
    throw ConfigError("analyticity.noise_floor: must lie in (0, 1)");
  if (!std::isfinite(cfg.prefactor_s))
    throw ConfigError("analyticity.prefactor_s: must be finite");
  if (cfg.min_modes < 2)
    throw ConfigError("analyticity.min_modes: must be >= 2");
  if (!(cfg.c_fit >= 0))
    throw ConfigError("analyticity.c_fit: must be >= 0");
  if (cfg.threads < 1) throw ConfigError("run.threads: must be >= 1");
  if (cfg.samples < 1) throw ConfigError("run.samples: must be >= 1");
  if (cfg.out.empty()) throw ConfigError("run.out: must not be empty");
}

Grid config_grid(const RunConfig& cfg) {
  return make_grid(cfg.dim, cfg.n, cfg.length);
}

BeamParams config_params(const RunConfig& cfg) {
  return BeamParams{cfg.m, cfg.p, cfg.lambda};
}

IntegrateOptions config_integrate_options(const RunConfig& cfg) {
  IntegrateOptions opt;
  opt.scheme = cfg.integrator == "picard" ? Scheme::PicardChain
                                          : Scheme::StrangSplit;
  opt.output_stride = cfg.output_stride;
  opt.energy_drift_abort = cfg.energy_drift_abort;
  opt.picard_sigma = cfg.picard_sigma;
  opt.picard_c0 = cfg.picard_c0;
  opt.delta_max = cfg.delta_max;
  opt.picard_steps = cfg.picard_steps;
  opt.picard_tol = cfg.picard_tol;
  opt.picard_max_iter = cfg.picard_max_iter;
  return opt;
}

FitPolicy config_fit_policy(const RunConfig& cfg) {
  FitPolicy policy;
  policy.noise_floor = cfg.noise_floor;
  policy.drop_top_decade = cfg.drop_top_decade;
  policy.prefactor_s = cfg.prefactor_s;
  policy.min_modes = cfg.min_modes;
  return policy;
}

}  // namespace nlbeam
