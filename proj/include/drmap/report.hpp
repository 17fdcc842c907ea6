#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "drmap/engine.hpp"

namespace drmap {

// One CSV line of the results table: a flattened CandidateResult. Column
// order is fixed; exactly one row per (layer, arch, scheme) group carries
// is_best.
struct ReportRow {
  std::string layer;
  DramArch arch = DramArch::DDR3;
  ScheduleScheme scheme = ScheduleScheme::IfmsReuse;  // DSE axis value
  int mapping = 0;
  int Tp = 1, Tq = 1, Tm = 1, Tc = 1;
  std::uint64_t n_same_row = 0, n_dif_bank = 0, n_dif_subarray = 0, n_dif_row = 0;
  std::uint64_t cycles = 0;
  double energy_pj = 0.0;
  double latency_ns = 0.0;
  double edp = 0.0;
  bool is_best = false;

  static ReportRow from(const DseRow& row);
  bool operator==(const ReportRow&) const = default;
};

// Fixed 6-significant-digit formatting used everywhere a float is emitted.
std::string format_sig6(double v);
double round_sig6(double v);

std::vector<ReportRow> collect_rows(const DseOutput& out);

void write_rows_csv(std::ostream& out, const std::vector<ReportRow>& rows);
std::vector<ReportRow> parse_rows_csv(std::istream& in);

struct MappingStat {
  int mapping = 0;
  double edp = 0.0;
  double normalized = 0.0;   // edp / max edp in group, in (0, 1]
  double improvement = 0.0;  // 1 - normalized, in [0, 1)
};

struct GroupComparison {
  std::string layer;
  DramArch arch = DramArch::DDR3;
  ScheduleScheme scheme = ScheduleScheme::IfmsReuse;
  std::vector<MappingStat> mappings;
};

struct SalpImprovement {
  std::string layer;
  ScheduleScheme scheme = ScheduleScheme::IfmsReuse;
  int mapping = 0;
  DramArch arch = DramArch::SALP1;
  double improvement = 0.0;  // 1 - edp(arch) / edp(ddr3)
};

struct ComparisonTable {
  std::vector<GroupComparison> groups;
  std::vector<SalpImprovement> salp_vs_ddr3;
  std::vector<std::string> warnings;
};

// Per-(layer, arch, scheme) normalization against the worst mapping, plus the
// per-mapping SALP-vs-DDR3 improvement when DDR3 rows are present. Groups
// with a single mapping are skipped with a warning.
ComparisonTable build_comparison(const std::vector<ReportRow>& rows);

}  // namespace drmap
