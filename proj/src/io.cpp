#include "nlbeam/io.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

namespace nlbeam {

std::string fmt_real(Real v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
  if (!out_) throw Error("cannot open '" + path.string() + "' for writing");
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw Error("csv row has " + std::to_string(cells.size()) +
                " cells, header has " + std::to_string(columns_));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path) : out_(path) {
  if (!out_) throw Error("cannot open '" + path.string() + "' for writing");
}

void JsonlWriter::write(const Json& object) {
  out_ << object.dump() << '\n';
}

Json check_report_json(const CheckReport& report) {
  Json j;
  j["check"] = report.check_name;
  j["samples"] = report.samples;
  j["violations"] = report.violations;
  j["worst_margin"] = fmt_real(report.worst_margin);
  j["worst_input"] = report.worst_input;
  j["seed"] = report.seed;
  j["tolerance"] = fmt_real(kCheckTol);
  return j;
}

RunDirectory::RunDirectory(const std::string& path) : root_(path) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec)
    throw Error("cannot create run directory '" + path + "': " +
                ec.message());
}

std::filesystem::path RunDirectory::file(const std::string& name) {
  outputs_.push_back(name);
  return root_ / name;
}

void RunDirectory::warn(const std::string& message) {
  warnings_.push_back(message);
}

void RunDirectory::write_manifest(const std::string& command,
                                  const std::string& config_hash,
                                  const std::string& config_text,
                                  const std::string& status,
                                  const std::string& error,
                                  double wall_seconds) {
  Json j;
  j["tool"] = "nlbeam";
  j["version"] = "0.1.0";
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["config"] = config_text;
  j["csv_schemas"] = Json{
      {"energy.csv", "time,kinetic,bending,mass,potential,total"},
      {"drift.csv", "sigma,delta,sup_drift,ratio"},
      {"radius.csv", "time,sigma_est,residual,n_modes,capped"},
      {"spectrum.csv", "k_index_per_axis...,abs_coeff,log_abs_coeff"},
  };
  j["outputs"] = outputs_;
  j["warnings"] = warnings_;
  j["status"] = status;
  if (!error.empty()) j["error"] = error;
  // Timing fields: excluded from byte-identity comparisons.
  j["wall_time_seconds"] = wall_seconds;
  j["created_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();

  std::ofstream out(root_ / "manifest.json");
  if (!out) throw Error("cannot write manifest");
  out << j.dump(2) << '\n';
}

}  // namespace nlbeam
