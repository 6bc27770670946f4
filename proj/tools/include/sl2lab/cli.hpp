#pragma once

// The sl2lab command-line driver as a library, so tests can run
// subcommands in-process.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sl2lab::cli {

using json = nlohmann::json;

enum ExitCode : int { kPass = 0, kFail = 1, kInvalidConfig = 2 };

/// Names of all subcommands, in help order.
const std::vector<std::string>& command_names();

/// What a subcommand produced: the "results" object, the verdict and an
/// optional CSV writer (empty when the command has no series to export).
struct Outcome {
  json results;
  bool pass = false;
  std::function<void(std::ostream&)> csv;
};

/// A validated experiment, ready to run. `config` is the fully resolved
/// configuration echoed into the report.
struct Prepared {
  std::string command;
  json config;
  std::string plan;
  bool has_csv = false;
  std::function<Outcome(unsigned threads)> execute;
};

/// Validates `config` for `command`, filling defaults. Throws ConfigError
/// on unknown commands, unknown fields and invalid values.
Prepared prepare(const std::string& command, json config);

/// {command, config, results, verdict, version}.
json make_report(const Prepared& p, const Outcome& o);

/// Entry point: args excludes the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sl2lab::cli
