#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hochsplit_cli/config.hpp"
#include "hochsplit_cli/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hochsplit::cli::ConfigError("config", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hochsplit::cli;
  CLI::App app{"Splitting-map verification sweeps for point modules"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  std::string format;
  std::uint64_t seed = 0;
  std::size_t jobs = 0;
  bool exact = false;
  std::vector<std::string> settings;

  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--out", out, "output path (default stdout)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  auto* seed_opt = app.add_option("--seed", seed, "base seed");
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker threads (0 = all cores)");
  app.add_flag("--exact", exact, "exact rational arithmetic");

  const std::vector<std::pair<std::string, std::string>> subs{
      {"sweep", ""}, {"audit", "norm-audit"}, {"stabilize", "stabilize"},
      {"rational", "rational"}, {"halfline", "halfline"}, {"appendix", "appendix"}};
  for (const auto& [name, mode] : subs) {
    auto* sub = app.add_subcommand(name, mode.empty() ? "run the mode named in the config" : "run mode " + mode);
    sub->add_option("settings", settings, "key=value overrides");
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<std::string> overrides;
    for (const auto& [name, mode] : subs)
      if (app.got_subcommand(name) && !mode.empty()) overrides.push_back("mode=" + mode);
    overrides.insert(overrides.end(), settings.begin(), settings.end());
    if (!out.empty()) overrides.push_back("out=" + out);
    if (!format.empty()) overrides.push_back("format=" + format);
    if (*seed_opt) overrides.push_back("seed=" + std::to_string(seed));
    if (*jobs_opt) {
      overrides.push_back("jobs=" + std::to_string(jobs));
    } else if (const char* env = std::getenv("HOCHSPLIT_JOBS")) {
      overrides.push_back(std::string("jobs=") + env);
    }
    if (exact) overrides.push_back("exact=true");

    const SweepConfig cfg = parse_config(config_path.empty() ? "" : read_file(config_path), overrides);
    const ReportEnvelope env = run(cfg);

    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw ConfigError("out", "cannot write " + cfg.out);
    }
    std::ostream& os = cfg.out.empty() ? std::cout : file;
    if (cfg.format == Format::csv) write_csv(os, env);
    else os << to_json(env).dump(2) << '\n';

    std::cerr << env.summary.passed << '/' << env.summary.total << " records passed";
    if (env.summary.errors) std::cerr << " (" << env.summary.errors << " errors)";
    std::cerr << '\n';
    return env.all_pass() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
