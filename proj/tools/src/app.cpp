#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "sl2lab/cli.hpp"
#include "sl2lab/error.hpp"
#include "sl2lab/version.hpp"

namespace sl2lab::cli {
namespace {

struct Flags {
  std::string config_path;
  std::uint64_t seed = 0;
  std::uint64_t grid = 0;
  double tol = 0.0;
  std::int64_t n = 0;
  std::int64_t n_max = 0;
  std::int64_t samples = 0;
  std::int64_t seeds = 0;
  double a = 0.0;
  double b = 0.0;
  std::string out;
  std::string format = "json";
  unsigned threads = 1;
  bool dry_run = false;
};

void add_flags(CLI::App& sub, Flags& f) {
  sub.add_option("--config", f.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  sub.add_option("--seed", f.seed, "Seed for sampled experiments");
  sub.add_option("--grid", f.grid, "Largest quadrature grid (power of two)");
  sub.add_option("--tol", f.tol, "Verdict tolerance on the reported error");
  sub.add_option("--n", f.n, "Horizon / number of factors");
  sub.add_option("--n-max", f.n_max, "Largest horizon for series");
  sub.add_option("--samples", f.samples, "Number of samples");
  sub.add_option("--seeds", f.seeds, "Number of consecutive seeds to average");
  sub.add_option("--a", f.a, "Threshold a of the measure bound");
  sub.add_option("--b", f.b, "Parameter b of F(b)");
  sub.add_option("--out", f.out, "Output path");
  sub.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub.add_option("--threads", f.threads, "Worker cap; results do not depend on it")
      ->check(CLI::PositiveNumber);
  sub.add_flag("--dry-run", f.dry_run, "Validate and print the plan without computing");
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw ConfigError(path + ": top level must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

// Run options may sit in the file; they are not part of the echoed config.
void take_run_options(json& cfg, const CLI::App& sub, Flags& f) {
  if (cfg.contains("command")) {
    if (!cfg["command"].is_string() || cfg["command"].get<std::string>() != sub.get_name()) {
      throw ConfigError("config.command: does not match subcommand '" + sub.get_name() + "'");
    }
    cfg.erase("command");
  }
  if (cfg.contains("threads")) {
    const json& t = cfg["threads"];
    if (!t.is_number_integer() || t.get<std::int64_t>() < 1) {
      throw ConfigError("config.threads: expected a positive integer");
    }
    if (sub.count("--threads") == 0) f.threads = t.get<unsigned>();
    cfg.erase("threads");
  }
  if (cfg.contains("out")) {
    if (!cfg["out"].is_string()) throw ConfigError("config.out: expected a string");
    if (sub.count("--out") == 0) f.out = cfg["out"].get<std::string>();
    cfg.erase("out");
  }
  if (cfg.contains("format")) {
    const json& fm = cfg["format"];
    if (!fm.is_string() || (fm != "json" && fm != "csv")) {
      throw ConfigError("config.format: expected \"json\" or \"csv\"");
    }
    if (sub.count("--format") == 0) f.format = fm.get<std::string>();
    cfg.erase("format");
  }
}

void overlay_flags(json& cfg, const CLI::App& sub, const Flags& f) {
  if (sub.count("--seed")) cfg["seed"] = f.seed;
  if (sub.count("--grid")) {
    if (sub.get_name() == "measure-bound") {
      cfg["grid"] = f.grid;
    } else {
      cfg["quadrature"]["max_grid"] = f.grid;
    }
  }
  if (sub.count("--tol")) cfg["tolerance"] = f.tol;
  if (sub.count("--n")) cfg["n"] = f.n;
  if (sub.count("--n-max")) cfg["n_max"] = f.n_max;
  if (sub.count("--samples")) cfg["samples"] = f.samples;
  if (sub.count("--seeds")) cfg["seeds"] = f.seeds;
  if (sub.count("--a")) cfg["a"] = f.a;
  if (sub.count("--b")) cfg["b"] = f.b;
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& w) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open '" + path.string() + "' for writing");
  w(os);
  if (!os) throw ConfigError("write to '" + path.string() + "' failed");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical experiments on averages of log-norms and spectral radii in SL(2,R)",
               "sl2lab"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Flags flags;
  for (const auto& name : command_names()) add_flags(*app.add_subcommand(name), flags);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInvalidConfig;
  }
  const CLI::App& sub = *app.get_subcommands().front();

  Prepared prepared;
  try {
    json cfg = flags.config_path.empty() ? json::object() : load_config(flags.config_path);
    take_run_options(cfg, sub, flags);
    overlay_flags(cfg, sub, flags);
    prepared = prepare(sub.get_name(), std::move(cfg));
    if (flags.format == "csv" && !prepared.has_csv) {
      throw ConfigError(sub.get_name() + " has no CSV export");
    }
    if (flags.format == "csv" && flags.out.empty()) {
      throw ConfigError("--format csv needs --out");
    }
  } catch (const ConfigError& e) {
    err << "sl2lab: invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  }

  if (flags.dry_run) {
    const json plan = {{"command", prepared.command},
                       {"config", prepared.config},
                       {"plan", prepared.plan},
                       {"dry_run", true},
                       {"version", kVersion}};
    out << plan.dump(2) << '\n';
    return kPass;
  }

  Outcome outcome;
  try {
    outcome = prepared.execute(flags.threads);
  } catch (const Error& e) {
    err << "sl2lab: " << sub.get_name() << " failed: " << e.what() << '\n';
    return kFail;
  }
  const std::string report = make_report(prepared, outcome).dump(2) + "\n";

  try {
    if (flags.out.empty()) {
      out << report;
    } else if (flags.format == "json") {
      write_file(flags.out, [&](std::ostream& os) { os << report; });
    } else {
      std::filesystem::path json_path = flags.out;
      json_path.replace_extension(".json");
      if (json_path == std::filesystem::path(flags.out)) json_path += ".json";
      write_file(flags.out, outcome.csv);
      write_file(json_path, [&](std::ostream& os) { os << report; });
    }
  } catch (const ConfigError& e) {
    err << "sl2lab: " << e.what() << '\n';
    return kInvalidConfig;
  }
  err << sub.get_name() << ": " << (outcome.pass ? "PASS" : "FAIL") << '\n';
  return outcome.pass ? kPass : kFail;
}

}  // namespace sl2lab::cli
