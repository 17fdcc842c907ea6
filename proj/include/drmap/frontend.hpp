#pragma once

#include <string>
#include <vector>

#include "drmap/engine.hpp"

namespace drmap {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kInfeasibleLayer = 3,
  kOracleMismatch = 4,
};

struct RunConfig {
  std::string network_path;
  std::string geometry_path;  // empty: built-in Table-II default
  std::string costs_path;     // empty: built-in derived default
  BufferConfig buffers;
  std::vector<DramArch> archs = {DramArch::DDR3, DramArch::SALP1,
                                 DramArch::SALP2, DramArch::SALP_MASA};
  std::vector<ScheduleScheme> schemes = {
      ScheduleScheme::IfmsReuse, ScheduleScheme::WghsReuse,
      ScheduleScheme::OfmsReuse, ScheduleScheme::AdaptiveReuse};
  std::vector<int> mappings = {1, 2, 3, 4, 5, 6};
  EnumerationMode mode = EnumerationMode::divisors();
  std::string out_dir = "drmap_out";
  int oracle_check = 32;  // sampled candidates re-verified by replay; 0 = off
  bool log_candidates = false;
  int workers = 0;
};

// Runs the exploration, writes <out>/results.csv and <out>/summary.json
// (plus <out>/candidates.csv when logging), spot-checks sampled candidates
// against the trace oracle, and prints a short summary to `log`. Errors are
// reported on `err` and mapped to distinct exit codes.
int run(const RunConfig& config, std::ostream& log, std::ostream& err);

}  // namespace drmap
