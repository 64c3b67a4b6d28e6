#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace kothe::experiments {

// A command ("indicator", "circle", ...), an action ("eval", "commutator", ...)
// and command-specific parameters. Fully determines a run together with seed.
struct ExperimentConfig {
  std::string command;
  std::string action;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  double tolerance = 1e-6;
  std::string out;
  bool json = false;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

struct Report {
  nlohmann::json metadata;  // seed, version, wall time, command
  nlohmann::json results;   // estimates, each with its budget and tolerance
  Table table;              // empty unless the command produces a sweep
  bool ok = true;           // false when a checked criterion failed

  nlohmann::json to_json() const;
};

// Commands and the actions each accepts.
const std::vector<std::pair<std::string, std::vector<std::string>>>& command_table();

// Dispatches to the library. Throws KotheError on precondition violations and,
// when a required optimizer reports failure, with ErrorKind::NonConvergence.
Report run(const ExperimentConfig& config);

std::string format_double(double v);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kothe::experiments
