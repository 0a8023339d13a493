// Config parsing/serialization, initial-data families, io primitives, and
// end-to-end CLI behavior of the built binary (exit codes, output schemas,
// determinism).

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "nlbeam/config.hpp"
#include "nlbeam/initial_data.hpp"
#include "nlbeam/io.hpp"
#include "nlbeam/norms.hpp"
#include "nlbeam/transform.hpp"

using namespace nlbeam;
namespace fs = std::filesystem;

namespace {

constexpr Real kPi = 3.14159265358979323846264338328;

// Scratch area under the test working directory, wiped once per process.
fs::path scratch() {
  static const fs::path root = [] {
    const fs::path r = fs::absolute("harness_tmp");
    fs::remove_all(r);
    fs::create_directories(r);
    return r;
  }();
  return root;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = scratch() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Named path that must NOT exist yet (for no-partial-outputs checks).
fs::path fresh_path(const std::string& name) {
  const fs::path d = scratch() / name;
  fs::remove_all(d);
  return d;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(static_cast<bool>(out));
  out << text;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(static_cast<bool>(in));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct EnvGuard {
  std::string name;
  EnvGuard(const std::string& n, const std::string& value) : name(n) {
    ::setenv(name.c_str(), value.c_str(), 1);
  }
  ~EnvGuard() { ::unsetenv(name.c_str()); }
};

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the installed binary through /bin/sh; `prefix` may carry VAR=value
// environment assignments.
CliResult run_cli(const std::string& args, const std::string& prefix = "") {
  static int counter = 0;
  const fs::path cap = fresh_dir("capture" + std::to_string(counter++));
  std::string cmd = prefix;
  if (!cmd.empty()) cmd += " ";
  cmd += "\"" NLBEAM_BIN "\" " + args;
  cmd += " > \"" + (cap / "out.txt").string() + "\"";
  cmd += " 2> \"" + (cap / "err.txt").string() + "\"";
  const int rc = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(cap / "out.txt");
  r.err = slurp(cap / "err.txt");
  return r;
}

Json load_json(const fs::path& path) { return Json::parse(slurp(path)); }

Json manifest_without_timing(const fs::path& dir) {
  Json j = load_json(dir / "manifest.json");
  j.erase("wall_time_seconds");
  j.erase("created_unix");
  return j;
}

std::uint64_t bits(double v) {
  std::uint64_t b;
  std::memcpy(&b, &v, sizeof b);
  return b;
}

const std::string kTinyConfig =
    "[grid]\n"
    "dim = 1\n"
    "n = 16\n"
    "length = 6.283185307179586\n"
    "[physics]\n"
    "m = 1\n"
    "p = 3\n"
    "[data]\n"
    "u0_family = single_mode\n"
    "u0_k = 2\n"
    "u0_amplitude = 0.5\n"
    "[scheme]\n"
    "dt = 0.001\n"
    "T = 0.01\n";

}  // namespace

TEST_CASE("config serialization round-trips through the parser") {
  const RunConfig def;
  const std::string text = serialize_config(def);
  const RunConfig back = parse_config_text(text, "default");
  CHECK(serialize_config(back) == text);
  CHECK(config_hash(back) == config_hash(def));

  // Exercise every binding type: int, long, uint64, real, bool, string,
  // real list, family name.
  RunConfig cfg;
  cfg.dim = 2;
  cfg.n = 48;
  cfg.length = 17.5;
  cfg.m = 2.25;
  cfg.p = 5;
  cfg.lambda = 0.5;
  cfg.sigma0 = 0.125;
  cfg.u0.family = InitialDataSpec::Family::LorentzPole;
  cfg.u0.a = 0.7;
  cfg.u0.amplitude = -3.5;
  cfg.u1.family = InitialDataSpec::Family::RandomBandLimited;
  cfg.u1.band = 12;
  cfg.u1.seed = 987654321098765ULL;
  cfg.integrator = "picard";
  cfg.dt = 1e-4;
  cfg.T = 2.5;
  cfg.output_stride = 10;
  cfg.picard_steps = 9;
  cfg.sigmas = {0.001, 0.01, 0.1};
  cfg.drop_top_decade = false;
  cfg.prefactor_s = -1.5;
  cfg.seed = 42;
  cfg.threads = 4;
  cfg.samples = 123456789L;
  cfg.out = "runs/some where";
  const std::string text2 = serialize_config(cfg);
  const RunConfig back2 = parse_config_text(text2, "mutated");
  CHECK(serialize_config(back2) == text2);
  CHECK(back2.u0.family == InitialDataSpec::Family::LorentzPole);
  CHECK(back2.u1.seed == 987654321098765ULL);
  CHECK(back2.sigmas == std::vector<Real>{0.001, 0.01, 0.1});
  CHECK(back2.drop_top_decade == false);
  CHECK(back2.out == "runs/some where");
  CHECK(back2.samples == 123456789L);

  // Comments, blank lines, and ';' comments are tolerated.
  const RunConfig commented = parse_config_text(
      "# leading comment\n\n[physics]\np = 5 ; trailing\n\n[run]\nseed = 7\n",
      "c");
  CHECK(commented.p == 5);
  CHECK(commented.seed == 7);
}

TEST_CASE("config parser reports origin, line, and key for bad input") {
  auto message_of = [](const std::string& text) {
    try {
      parse_config_text(text, "test.cfg");
      return std::string("<no error>");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
  };

  const std::string unknown = message_of("[grid]\ndim = 1\nwibble = 3\n");
  CHECK(unknown.find("test.cfg:3") != std::string::npos);
  CHECK(unknown.find("unknown key grid.wibble") != std::string::npos);

  const std::string dup = message_of("[run]\nseed = 1\nseed = 2\n");
  CHECK(dup.find("test.cfg:3") != std::string::npos);
  CHECK(dup.find("duplicate key run.seed") != std::string::npos);

  const std::string orphan = message_of("seed = 1\n");
  CHECK(orphan.find("before any [section]") != std::string::npos);

  const std::string header = message_of("[run\nseed = 1\n");
  CHECK(header.find("malformed section header") != std::string::npos);

  const std::string noeq = message_of("[run]\nseed\n");
  CHECK(noeq.find("expected key = value") != std::string::npos);

  const std::string badreal = message_of("[physics]\nm = fast\n");
  CHECK(badreal.find("physics.m") != std::string::npos);
  CHECK(badreal.find("expected a real number") != std::string::npos);
  CHECK(badreal.find("'fast'") != std::string::npos);

  const std::string badint = message_of("[grid]\nn = 16.5\n");
  CHECK(badint.find("expected an integer") != std::string::npos);

  const std::string badbool =
      message_of("[analyticity]\ndrop_top_decade = maybe\n");
  CHECK(badbool.find("a boolean") != std::string::npos);

  const std::string badfam = message_of("[data]\nu0_family = wavelet\n");
  CHECK(badfam.find("a data family name") != std::string::npos);
}

TEST_CASE("environment variables override file values") {
  const fs::path dir = fresh_dir("env");
  const fs::path cfg_path = dir / "a.cfg";
  write_file(cfg_path, "[physics]\np = 3\n[run]\nseed = 7\n");

  {
    EnvGuard g1("NLBEAM_PHYSICS_P", "5");
    EnvGuard g2("NLBEAM_RUN_OUT", "env-out");
    const RunConfig cfg = parse_config_file(cfg_path.string());
    CHECK(cfg.p == 5);
    CHECK(cfg.seed == 7);  // file value survives where no env is set
    CHECK(cfg.out == "env-out");
  }
  // Without the overrides the file wins.
  const RunConfig cfg = parse_config_file(cfg_path.string());
  CHECK(cfg.p == 3);
  CHECK(cfg.out == RunConfig{}.out);

  // A malformed env value is a config error naming the variable.
  {
    EnvGuard g("NLBEAM_PHYSICS_P", "three");
    try {
      parse_config_file(cfg_path.string());
      CHECK(false);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("NLBEAM_PHYSICS_P") !=
            std::string::npos);
    }
  }

  // apply_env_overrides also works on defaults (the no-config-file path).
  {
    EnvGuard g("NLBEAM_GRID_N", "128");
    RunConfig base;
    apply_env_overrides(base);
    CHECK(base.n == 128);
  }
}

TEST_CASE("config hash is 16 hex chars tracking content") {
  const RunConfig a;
  const std::string h = config_hash(a);
  REQUIRE(h.size() == 16);
  for (char c : h)
    CHECK(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')));
  CHECK(config_hash(a) == h);

  RunConfig b;
  b.seed = a.seed + 1;
  CHECK(config_hash(b) != h);
  b.seed = a.seed;
  CHECK(config_hash(b) == h);
}

TEST_CASE("config validation rejects out-of-contract settings") {
  auto rejects = [](void (*mutate)(RunConfig&), const std::string& needle) {
    RunConfig cfg;
    mutate(cfg);
    try {
      validate_config(cfg);
      CHECK_MESSAGE(false, "expected rejection mentioning ", needle);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  RunConfig ok;
  validate_config(ok);  // defaults are valid

  rejects([](RunConfig& c) { c.p = 4; }, "physics.p");
  rejects([](RunConfig& c) { c.m = 0; }, "physics.m");
  rejects([](RunConfig& c) { c.dim = 4; }, "grid");
  rejects(
      [](RunConfig& c) {
        c.dim = 2;
        c.u0.family = InitialDataSpec::Family::LorentzPole;
      },
      "lorentz_pole");
  rejects([](RunConfig& c) { c.sigmas = {0.1, 0.1}; },
          "strictly increasing");
  rejects([](RunConfig& c) { c.noise_floor = 0; }, "noise_floor");
  rejects([](RunConfig& c) { c.integrator = "rk4"; }, "integrator");
  rejects([](RunConfig& c) { c.samples = 0; }, "run.samples");
  rejects([](RunConfig& c) { c.out.clear(); }, "run.out");
  rejects(
      [](RunConfig& c) {
        c.u1.family = InitialDataSpec::Family::RandomBandLimited;
        c.u1.band = 0;
      },
      "u1_band");
}

TEST_CASE("data families build the advertised profiles") {
  const Grid g = make_grid(1, 32, 2 * kPi);

  InitialDataSpec zero;
  CHECK(build_field(g, zero).coeffs.abs().maxCoeff() == 0.0);

  InitialDataSpec mode;
  mode.family = InitialDataSpec::Family::SingleMode;
  mode.k = 3;
  mode.amplitude = 0.75;
  const RealField f = inverse_transform(build_field(g, mode));
  for (Index j = 0; j < g.size(); ++j) {
    const Real x = g.axis_coordinate(g.unflatten(j)[0]);
    CHECK(std::abs(f.values[j] - 0.75 * std::cos(3 * x)) <= 1e-12);
  }
  mode.k = 0;
  const RealField fc = inverse_transform(build_field(g, mode));
  CHECK(fc.values.minCoeff() == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(fc.values.maxCoeff() == doctest::Approx(0.75).epsilon(1e-14));
  mode.k = 16;  // Nyquist index is out of contract
  CHECK_THROWS_AS(build_field(g, mode), ConfigError);

  InitialDataSpec expd;
  expd.family = InitialDataSpec::Family::ExpDecaySpectrum;
  expd.a = 0.7;
  expd.amplitude = 2.0;
  const SpectralField fe = build_field(g, expd);
  for (Index j = 0; j < g.size(); ++j) {
    const bool nyquist = g.unflatten(j)[0] == 16;
    const Real want =
        nyquist ? 0.0 : 2.0 * std::exp(-0.7 * g.abs_xi()[j]);
    CHECK(std::abs(fe.coeffs[j] - Complex(want, 0)) <= 1e-15 * 2.0);
  }

  InitialDataSpec gauss;
  gauss.family = InitialDataSpec::Family::GaussianBump;
  gauss.width = 0.5;
  gauss.amplitude = 1.5;
  const RealField fg = inverse_transform(build_field(g, gauss));
  for (Index j = 0; j < g.size(); ++j) {
    const Real x = g.axis_coordinate(g.unflatten(j)[0]);
    CHECK(std::abs(fg.values[j] - 1.5 * std::exp(-x * x / 0.25)) <= 1e-12);
  }

  InitialDataSpec lor;
  lor.family = InitialDataSpec::Family::LorentzPole;
  CHECK_THROWS_AS(build_field(make_grid(2, 8, 10), lor), ConfigError);
  lor.a = -1;
  CHECK_THROWS_AS(build_field(g, lor), ConfigError);

  InitialDataSpec rnd;
  rnd.family = InitialDataSpec::Family::RandomBandLimited;
  rnd.band = 5;
  rnd.amplitude = 2.5;
  rnd.seed = 11;
  const SpectralField fr = build_field(g, rnd);
  CHECK(weighted_norm(fr, NormSpec{0, 2, NormSpec::Weight::None}) ==
        doctest::Approx(2.5).epsilon(1e-12));
  for (Index j = 0; j < g.size(); ++j)
    if (g.abs_xi()[j] > 5.0) CHECK(std::abs(fr.coeffs[j]) == 0.0);
  const SpectralField fr2 = build_field(g, rnd);
  CHECK(std::memcmp(fr.coeffs.data(), fr2.coeffs.data(),
                    sizeof(Complex) * g.size()) == 0);
  rnd.seed = 12;
  const SpectralField fr3 = build_field(g, rnd);
  CHECK(std::memcmp(fr.coeffs.data(), fr3.coeffs.data(),
                    sizeof(Complex) * g.size()) != 0);
}

TEST_CASE("family names round-trip") {
  using Family = InitialDataSpec::Family;
  for (Family f : {Family::Zero, Family::GaussianBump, Family::LorentzPole,
                   Family::ExpDecaySpectrum, Family::SingleMode,
                   Family::RandomBandLimited})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK(family_name(Family::LorentzPole) == "lorentz_pole");
  CHECK_THROWS_AS(family_from_name("wavelet"), ConfigError);
}

TEST_CASE("boundary ratio flags non-decaying fields") {
  const Grid g = make_grid(1, 64, 16.0);

  RealField zero{g, ArrayXr::Zero(g.size())};
  CHECK(boundary_amplitude_ratio(zero) == 0.0);

  InitialDataSpec mode;
  mode.family = InitialDataSpec::Family::SingleMode;
  mode.k = 2;  // full period across the box: |u(-L/2)| = max|u|
  CHECK(boundary_amplitude_ratio(inverse_transform(build_field(g, mode))) ==
        doctest::Approx(1.0).epsilon(1e-12));

  InitialDataSpec gauss;
  gauss.family = InitialDataSpec::Family::GaussianBump;
  gauss.width = 1.0;  // boundary value e^{-64}: far below the warn ratio
  CHECK(boundary_amplitude_ratio(inverse_transform(build_field(g, gauss))) <
        kBoundaryWarnRatio);

  // Same bump in a box only 4 widths wide: boundary value e^{-4} trips the
  // monitor.
  const Grid tight = make_grid(1, 64, 4.0);
  CHECK(boundary_amplitude_ratio(
            inverse_transform(build_field(tight, gauss))) >
        kBoundaryWarnRatio);
}

TEST_CASE("real formatting round-trips doubles exactly") {
  const double values[] = {0.0,
                           1.0,
                           -1.0 / 3,
                           3.141592653589793,
                           0.1,
                           1e-300,
                           1e300,
                           6.02214076e23,
                           4.9406564584124654e-324,
                           1.7976931348623157e308};
  for (double v : values) {
    const std::string s = fmt_real(v);
    CHECK(bits(std::strtod(s.c_str(), nullptr)) == bits(v));
  }
  const std::string neg_zero = fmt_real(-0.0);
  CHECK(std::signbit(std::strtod(neg_zero.c_str(), nullptr)));
}

TEST_CASE("csv writer enforces the declared column count") {
  const fs::path dir = fresh_dir("csv");
  const fs::path path = dir / "t.csv";
  {
    CsvWriter csv(path, {"a", "b", "c"});
    csv.row({"1", "2", "3"});
    CHECK_THROWS_AS(csv.row({"1", "2"}), Error);
    CHECK_THROWS_AS(csv.row({"1", "2", "3", "4"}), Error);
    csv.row({"4", "5", "6"});
  }
  CHECK(slurp(path) == "a,b,c\n1,2,3\n4,5,6\n");
}

TEST_CASE("run directory collects outputs and warnings into the manifest") {
  const fs::path dir = fresh_dir("rundir");
  RunDirectory rd((dir / "run").string());
  {
    std::ofstream out(rd.file("a.csv"));
    out << "x\n";
  }
  rd.warn("watch out");
  rd.write_manifest("simulate", "0123456789abcdef", "[grid]\ndim = 1\n",
                    "ok", "", 1.5);

  const Json j = load_json(dir / "run" / "manifest.json");
  CHECK(j.at("tool") == "nlbeam");
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("command") == "simulate");
  CHECK(j.at("config_hash") == "0123456789abcdef");
  CHECK(j.at("outputs") == Json::array({"a.csv"}));
  CHECK(j.at("warnings") == Json::array({"watch out"}));
  CHECK(j.at("status") == "ok");
  CHECK(!j.contains("error"));
  CHECK(j.at("csv_schemas").contains("energy.csv"));
  CHECK(j.at("csv_schemas").contains("drift.csv"));
  CHECK(j.at("csv_schemas").contains("radius.csv"));
  CHECK(j.at("csv_schemas").contains("spectrum.csv"));
  CHECK(j.contains("wall_time_seconds"));
  CHECK(j.contains("created_unix"));
}

TEST_CASE("cli usage errors exit 2 and leave no outputs") {
  const fs::path out = fresh_path("usage_out");

  // Missing config file.
  CliResult r = run_cli("simulate --config " + (scratch() / "nope.cfg").string() +
                        " --out \"" + out.string() + "\"");
  CHECK(r.code == kExitUsage);
  CHECK(!fs::exists(out));
  CHECK(r.err.find("cannot open config file") != std::string::npos);

  // Malformed config file.
  const fs::path bad = fresh_dir("badcfg") / "bad.cfg";
  write_file(bad, "[grid]\nwibble = 3\n");
  r = run_cli("simulate --config \"" + bad.string() + "\" --out \"" +
              out.string() + "\"");
  CHECK(r.code == kExitUsage);
  CHECK(!fs::exists(out));
  CHECK(r.err.find("unknown key") != std::string::npos);

  // Parseable but invalid config (validation runs before any output).
  const fs::path invalid = fresh_dir("invalidcfg") / "invalid.cfg";
  write_file(invalid, "[physics]\np = 4\n");
  r = run_cli("simulate --config \"" + invalid.string() + "\" --out \"" +
              out.string() + "\"");
  CHECK(r.code == kExitUsage);
  CHECK(!fs::exists(out));
  CHECK(r.err.find("physics.p") != std::string::npos);

  // Non-integer --samples.
  r = run_cli("verify-lemmas --samples 2.5 --out \"" + out.string() + "\"");
  CHECK(r.code == kExitUsage);
  CHECK(!fs::exists(out));

  // Missing subcommand / unknown flag are usage errors too.
  CHECK(run_cli("").code == kExitUsage);
  CHECK(run_cli("simulate --frobnicate").code == kExitUsage);
  CHECK(run_cli("--help").code == kExitOk);
  CHECK(run_cli("--version").out.find("nlbeam") != std::string::npos);
}

TEST_CASE("cli simulate writes schema-conformant outputs") {
  const fs::path dir = fresh_dir("simrun");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg, kTinyConfig);
  const fs::path out = dir / "out";

  const CliResult r = run_cli("simulate --config \"" + cfg.string() +
                              "\" --out \"" + out.string() + "\"");
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("simulate:") != std::string::npos);

  const std::string energy = slurp(out / "energy.csv");
  CHECK(energy.rfind("time,kinetic,bending,mass,potential,total\n", 0) == 0);

  const Json j = load_json(out / "manifest.json");
  CHECK(j.at("status") == "ok");
  CHECK(j.at("command") == "simulate");
  std::vector<std::string> outputs = j.at("outputs");
  CHECK(outputs == std::vector<std::string>{"energy.csv"});
  // The embedded config text re-hashes to the recorded hash.
  const RunConfig merged =
      parse_config_text(j.at("config").get<std::string>(), "manifest");
  CHECK(config_hash(merged) == j.at("config_hash").get<std::string>());
}

TEST_CASE("cli runtime failures exit 1 with an error manifest") {
  const fs::path dir = fresh_dir("abortrun");
  const fs::path cfg = dir / "run.cfg";
  // An impossible drift budget trips the integrator's abort guard.
  write_file(cfg, kTinyConfig + "energy_drift_abort = 1e-15\n");
  const fs::path out = dir / "out";

  const CliResult r = run_cli("simulate --config \"" + cfg.string() +
                              "\" --out \"" + out.string() + "\"");
  CHECK(r.code == kExitRuntime);
  CHECK(r.err.find("energy drift") != std::string::npos);
  const Json j = load_json(out / "manifest.json");
  CHECK(j.at("status") == "error");
  CHECK(j.at("error").get<std::string>().find("energy drift") !=
        std::string::npos);
}

TEST_CASE("cli option precedence is file < env < flags") {
  const fs::path dir = fresh_dir("precedence");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg, "[grid]\nn = 8\n[run]\nseed = 1\n");

  auto merged_config_value = [&](const std::string& env,
                                 const std::string& extra_flags,
                                 const std::string& key) {
    static int counter = 0;
    const fs::path out = dir / ("out" + std::to_string(counter++));
    const CliResult r =
        run_cli("dump-spectrum --config \"" + cfg.string() + "\" --out \"" +
                    out.string() + "\" " + extra_flags,
                env);
    REQUIRE(r.code == kExitOk);
    const RunConfig merged = parse_config_text(
        load_json(out / "manifest.json").at("config").get<std::string>(),
        "manifest");
    if (key == "seed") return std::to_string(merged.seed);
    if (key == "n") return std::to_string(merged.n);
    return std::string();
  };

  CHECK(merged_config_value("", "", "seed") == "1");
  CHECK(merged_config_value("NLBEAM_RUN_SEED=2", "", "seed") == "2");
  CHECK(merged_config_value("NLBEAM_RUN_SEED=2", "--seed 3", "seed") == "3");
  // Env applies even to keys with no dedicated flag.
  CHECK(merged_config_value("NLBEAM_GRID_N=32", "", "n") == "32");
}

TEST_CASE("cli reruns are byte-identical apart from timing fields") {
  const fs::path dir = fresh_dir("determinism");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg,
             "[grid]\nn = 16\n[data]\nu0_family = exp_decay_spectrum\n"
             "u0_a = 0.7\n");

  // Identical config and seed, run from two working directories with the
  // same relative --out: everything but the timing fields must match.
  const fs::path wd1 = fresh_dir("determinism/a"),
                 wd2 = fresh_dir("determinism/b");
  const std::string rerun_args =
      "dump-spectrum --config \"" + cfg.string() + "\" --out out";
  REQUIRE(run_cli(rerun_args, "cd \"" + wd1.string() + "\" &&").code ==
          kExitOk);
  REQUIRE(run_cli(rerun_args, "cd \"" + wd2.string() + "\" &&").code ==
          kExitOk);
  CHECK(slurp(wd1 / "out" / "spectrum.csv") ==
        slurp(wd2 / "out" / "spectrum.csv"));
  CHECK(manifest_without_timing(wd1 / "out") ==
        manifest_without_timing(wd2 / "out"));

  // Randomized checks: identical for equal seeds, different otherwise.
  const fs::path v1 = dir / "v1", v2 = dir / "v2", v3 = dir / "v3";
  REQUIRE(run_cli("verify-lemmas --samples 2000 --seed 5 --out \"" +
                  v1.string() + "\"")
              .code == kExitOk);
  REQUIRE(run_cli("verify-lemmas --samples 2000 --seed 5 --out \"" +
                  v2.string() + "\"")
              .code == kExitOk);
  REQUIRE(run_cli("verify-lemmas --samples 2000 --seed 6 --out \"" +
                  v3.string() + "\"")
              .code == kExitOk);
  CHECK(slurp(v1 / "lemma_reports.jsonl") == slurp(v2 / "lemma_reports.jsonl"));
  CHECK(slurp(v1 / "lemma_reports.jsonl") != slurp(v3 / "lemma_reports.jsonl"));
}

TEST_CASE("cli verify-lemmas reports every suite with zero violations") {
  const fs::path out = fresh_dir("lemmarun") / "out";
  const CliResult r =
      run_cli("verify-lemmas --samples 3000 --out \"" + out.string() + "\"");
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("0 violations") != std::string::npos);

  std::istringstream lines(slurp(out / "lemma_reports.jsonl"));
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    const Json j = Json::parse(line);
    CHECK(j.at("violations") == 0);
    CHECK(j.at("samples").get<long>() > 0);
    ++n;
  }
  CHECK(n >= 10);
  const Json m = load_json(out / "manifest.json");
  CHECK(m.at("status") == "ok");
}

TEST_CASE("cli dump-spectrum emits one row per mode") {
  const fs::path dir = fresh_dir("spectrum");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg,
             "[grid]\ndim = 2\nn = 8\n[data]\nu0_family = gaussian_bump\n");
  const fs::path out = dir / "out";
  REQUIRE(run_cli("dump-spectrum --config \"" + cfg.string() + "\" --out \"" +
                  out.string() + "\"")
              .code == kExitOk);
  std::istringstream lines(slurp(out / "spectrum.csv"));
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "k1,k2,abs_coeff,log_abs_coeff");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 64);
}

TEST_CASE("bundled configs parse, validate, and keep their promises") {
  const fs::path cfg_dir = NLBEAM_CONFIG_DIR;
  REQUIRE(fs::is_directory(cfg_dir));
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(cfg_dir)) {
    if (entry.path().extension() != ".cfg") continue;
    ++seen;
    const std::string name = entry.path().filename().string();
    CAPTURE(name);
    const RunConfig cfg = parse_config_text(slurp(entry.path()), name);
    CHECK_NOTHROW(validate_config(cfg));
    CHECK(cfg.out.rfind("runs/", 0) == 0);  // each config owns a run dir
  }
  CHECK(seen == 6);

  // The linear demo's total-energy column is constant to roundoff.
  const fs::path dir = fresh_dir("bundled_linear");
  const CliResult r = run_cli(
      "simulate --config \"" +
          (cfg_dir / fs::path("linear_single_mode.cfg")).string() + "\"",
      "cd \"" + dir.string() + "\" &&");
  REQUIRE(r.code == kExitOk);
  std::istringstream lines(slurp(dir / "runs/linear_single_mode/energy.csv"));
  std::string line;
  REQUIRE(std::getline(lines, line));
  REQUIRE(line == "time,kinetic,bending,mass,potential,total");
  Real first = 0, drift = 0;
  int rows = 0;
  while (std::getline(lines, line)) {
    const Real total =
        std::strtod(line.substr(line.rfind(',') + 1).c_str(), nullptr);
    if (rows == 0) first = total;
    drift = std::max(drift, std::abs(total - first) / std::abs(first));
    ++rows;
  }
  CHECK(rows == 11);
  CHECK(drift < 1e-12);
}

TEST_CASE("cli track-radius exits 3 when the floor verdict fails") {
  const fs::path dir = fresh_dir("verdict");
  const fs::path cfg = dir / "run.cfg";
  // sigma0 above the pole distance: the t = 0 floor (= sigma0) already
  // exceeds the estimable radius, so the verdict must fail.
  write_file(cfg,
             "[grid]\ndim = 1\nn = 128\nlength = 20\n"
             "[data]\nsigma0 = 1.0\nu0_family = lorentz_pole\nu0_a = 0.5\n"
             "u0_amplitude = 0.1\n"
             "[scheme]\ndt = 1e-3\nT = 0.01\noutput_stride = 5\n");
  const fs::path out = dir / "out";
  const CliResult r = run_cli("track-radius --config \"" + cfg.string() +
                              "\" --out \"" + out.string() + "\"");
  CHECK(r.code == kExitViolation);
  CHECK(r.out.find(": NO") != std::string::npos);
  const Json m = load_json(out / "manifest.json");
  CHECK(m.at("status") == "violations");
  const Json fit = Json::parse(slurp(out / "radius_fit.jsonl"));
  CHECK(fit.at("verdict") == false);
}
