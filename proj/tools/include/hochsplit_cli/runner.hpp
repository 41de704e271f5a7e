#pragma once

#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hochsplit/discsplit.hpp"
#include "hochsplit_cli/config.hpp"

namespace hochsplit::cli {

/// One verified case. Modes other than the disc modes map their numbers onto
/// the SplitReport fields and keep the rest in `extra`.
struct Record {
  std::string mode;
  SplitReport report;
  bool pass{false};
  std::string error;
  nlohmann::json extra = nlohmann::json::object();
};

struct Summary {
  std::size_t total{0};
  std::size_t passed{0};
  std::size_t failed{0};
  std::size_t errors{0};
  double max_residual{0};
  double max_opnorm{0};

  bool operator==(const Summary&) const = default;
};

struct ReportEnvelope {
  SweepConfig config;
  std::vector<Record> records;
  Summary summary;
  double wall_clock{0};

  bool all_pass() const { return summary.failed == 0; }
};

Summary summarize(const std::vector<Record>& records);

/// The disc grid for the config: the lambda list if given, else radii x phases.
std::vector<Complex> disc_grid(const SweepConfig& cfg);

/// Runs every case of cfg.mode on cfg.jobs threads (0 = hardware concurrency).
/// Module errors are recorded per case.
ReportEnvelope run(const SweepConfig& cfg);

nlohmann::json to_json(const Record& r);
/// Envelope as JSON. wall_clock is the only nondeterministic field.
nlohmann::json to_json(const ReportEnvelope& env, bool with_wall_clock = true);
void write_csv(std::ostream& os, const ReportEnvelope& env);

/// Runs tasks[i]() for all i on `jobs` threads; results keep task order.
std::vector<std::vector<Record>> parallel_map(const std::vector<std::function<std::vector<Record>()>>& tasks,
                                              std::size_t jobs);

}  // namespace hochsplit::cli
