#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlbeam/inequality.hpp"
#include "nlbeam/types.hpp"

namespace nlbeam {

using Json = nlohmann::ordered_json;

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitViolation = 3;

inline constexpr int kSchemaVersion = 1;

// Shortest round-trip decimal form: %.17g everywhere a real is persisted,
// so identical runs diff byte-identically.
std::string fmt_real(Real v);

std::string read_text_file(const std::string& path);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

class JsonlWriter {
 public:
  explicit JsonlWriter(const std::filesystem::path& path);
  void write(const Json& object);

 private:
  std::ofstream out_;
};

Json check_report_json(const CheckReport& report);

// One run = one directory: CSVs, JSON-lines reports, and a manifest that
// records the config hash, outputs, warnings, and outcome.  Wall time and
// timestamps are the only non-deterministic fields and live in the manifest
// only.
class RunDirectory {
 public:
  explicit RunDirectory(const std::string& path);

  std::filesystem::path file(const std::string& name);
  void warn(const std::string& message);
  const std::vector<std::string>& warnings() const { return warnings_; }

  // status "ok" | "error" | "violations"; error empty unless status=error.
  void write_manifest(const std::string& command,
                      const std::string& config_hash,
                      const std::string& config_text,
                      const std::string& status, const std::string& error,
                      double wall_seconds);

 private:
  std::filesystem::path root_;
  std::vector<std::string> warnings_;
  std::vector<std::string> outputs_;
};

}  // namespace nlbeam
