#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kothe/common.hpp"
#include "kothe/experiments.hpp"

namespace {

using kothe::experiments::ExperimentConfig;
using nlohmann::json;

constexpr int kExitPrecondition = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitUsage = 64;

std::string usage() {
  std::string text =
      "usage: omega-calc <command> [action] [--key value ...] [--seed S] [--out PATH] [--tol T] [--json]\n"
      "                  [--config FILE]\n\ncommands:\n";
  for (const auto& [command, actions] : kothe::experiments::command_table()) {
    text += "  " + command + " ";
    for (std::size_t i = 0; i < actions.size(); ++i) text += (i ? "|" : "") + actions[i];
    text += "\n";
  }
  return text;
}

bool looks_like_value(const std::string& s) {
  if (s.rfind("--", 0) != 0) return true;
  // "--" followed by a digit cannot be an option name.
  return s.size() > 2 && (std::isdigit(static_cast<unsigned char>(s[2])) != 0);
}

// "--key value", "--key=value" and bare "--flag" become params entries. Values
// that parse as JSON numbers are stored as numbers, everything else as text.
json extras_to_params(const std::vector<std::string>& extras) {
  json params = json::object();
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& tok = extras[i];
    if (tok.rfind("--", 0) != 0 || tok.size() < 3) {
      throw CLI::ValidationError("unexpected argument \"" + tok + "\"");
    }
    std::string key = tok.substr(2);
    std::string value = "true";
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else if (i + 1 < extras.size() && looks_like_value(extras[i + 1])) {
      value = extras[++i];
    }
    std::replace(key.begin(), key.end(), '-', '_');
    const json parsed = json::parse(value, nullptr, false);
    params[key] = (!parsed.is_discarded() && (parsed.is_number() || parsed.is_boolean())) ? parsed : json(value);
  }
  return params;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) kothe::fail_precondition("cannot open output file " + path);
  out << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("Complex interpolation calculator for Kothe spaces on finite measure spaces", "omega-calc");
  app.set_help_flag("-h,--help", "print usage");
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out_path;
  std::string config_path;
  double tolerance = 1e-6;
  bool as_json = false;
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  auto* out_opt = app.add_option("--out", out_path, "write the CSV table (or JSON report) here");
  auto* tol_opt = app.add_option("--tol", tolerance, "pass/fail tolerance");
  auto* json_opt = app.add_flag("--json", as_json, "print the full JSON report");
  app.add_option("--config", config_path, "JSON experiment config; command-line values override it");

  // Actions and command parameters are read from the unparsed remainder; a
  // CLI11 positional would swallow the value of an unknown --key.
  for (const auto& entry : kothe::experiments::command_table()) app.add_subcommand(entry.first)->allow_extras();

  if (argc < 2) {
    std::cerr << usage();
    return kExitUsage;
  }
  const std::string first = argv[1];
  if (first.rfind("-", 0) != 0) {
    const auto& table = kothe::experiments::command_table();
    const bool known = std::any_of(table.begin(), table.end(), [&](const auto& e) { return e.first == first; });
    if (!known) {
      std::cerr << "omega-calc: unknown command \"" << first << "\"\n" << usage();
      return kExitUsage;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << usage();
    return 0;
  } catch (const CLI::RequiredError&) {
    std::cerr << usage();
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    std::cerr << "omega-calc: " << e.what() << "\n";
    return kExitPrecondition;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    std::vector<std::string> rest = sub->remaining();
    std::string action;
    if (!rest.empty() && rest.front().rfind("-", 0) != 0) {
      action = rest.front();
      rest.erase(rest.begin());
    }
    json extras = extras_to_params(rest);
    if (extras.contains("config")) {
      config_path = extras["config"].get<std::string>();
      extras.erase("config");
    }

    ExperimentConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) kothe::fail_precondition("cannot read config " + config_path);
      cfg = ExperimentConfig::from_json(json::parse(in));
    }
    cfg.command = sub->get_name();
    if (!action.empty()) cfg.action = action;
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (out_opt->count() > 0) cfg.out = out_path;
    if (tol_opt->count() > 0) cfg.tolerance = tolerance;
    if (json_opt->count() > 0) cfg.json = as_json;
    // Global flags may also follow the subcommand.
    for (const auto& [key, value] : extras.items()) {
      if (key == "seed") {
        if (!value.is_number_unsigned()) kothe::fail_precondition("--seed must be a nonnegative integer");
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "out") {
        cfg.out = value.is_string() ? value.get<std::string>() : value.dump();
      } else if (key == "tol") {
        if (!value.is_number()) kothe::fail_precondition("--tol must be a number");
        cfg.tolerance = value.get<double>();
      } else if (key == "json") {
        cfg.json = value.is_boolean() ? value.get<bool>() : true;
      } else {
        cfg.params[key] = value;
      }
    }

    const auto report = kothe::experiments::run(cfg);
    const bool has_table = !report.table.header.empty();
    const std::string report_text = report.to_json().dump(2) + "\n";
    if (!cfg.out.empty()) {
      write_file(cfg.out, has_table ? report.table.to_csv() : report_text);
      std::cout << report_text;
    } else if (has_table && !cfg.json) {
      std::cout << report.table.to_csv();
    } else {
      std::cout << report_text;
    }
    return 0;
  } catch (const kothe::KotheError& e) {
    std::cerr << "omega-calc: " << e.what() << "\n";
    return e.kind() == kothe::ErrorKind::NonConvergence ? kExitNonConvergence : kExitPrecondition;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "omega-calc: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "omega-calc: invalid JSON: " << e.what() << "\n";
    return kExitPrecondition;
  }
}
