#include "drmap/report.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace drmap {

ReportRow ReportRow::from(const DseRow& row) {
  const CandidateResult& c = row.cand;
  ReportRow r;
  r.layer = c.layer;
  r.arch = c.arch;
  r.scheme = c.scheme;
  r.mapping = c.mapping_id;
  r.Tp = c.tile.Tp;
  r.Tq = c.tile.Tq;
  r.Tm = c.tile.Tm;
  r.Tc = c.tile.Tc;
  r.n_same_row = c.counts.n_same_row;
  r.n_dif_bank = c.counts.n_dif_bank;
  r.n_dif_subarray = c.counts.n_dif_subarray;
  r.n_dif_row = c.counts.n_dif_row;
  r.cycles = c.cycles;
  r.energy_pj = c.energy_pj;
  r.latency_ns = c.latency_ns;
  r.edp = c.edp;
  r.is_best = row.is_best;
  return r;
}

std::string format_sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double round_sig6(double v) { return std::strtod(format_sig6(v).c_str(), nullptr); }

std::vector<ReportRow> collect_rows(const DseOutput& out) {
  std::vector<ReportRow> rows;
  for (const LayerOutcome& layer : out.layers)
    for (const DseRow& row : layer.rows) rows.push_back(ReportRow::from(row));
  return rows;
}

static const char kCsvHeader[] =
    "layer,arch,scheme,mapping,Tp,Tq,Tm,Tc,n_same_row,n_dif_bank,"
    "n_dif_subarray,n_dif_row,cycles,energy_pj,latency_ns,edp,is_best";

void write_rows_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << kCsvHeader << '\n';
  for (const ReportRow& r : rows) {
    out << r.layer << ',' << to_string(r.arch) << ',' << to_string(r.scheme)
        << ',' << r.mapping << ',' << r.Tp << ',' << r.Tq << ',' << r.Tm << ','
        << r.Tc << ',' << r.n_same_row << ',' << r.n_dif_bank << ','
        << r.n_dif_subarray << ',' << r.n_dif_row << ',' << r.cycles << ','
        << format_sig6(r.energy_pj) << ',' << format_sig6(r.latency_ns) << ','
        << format_sig6(r.edp) << ',' << (r.is_best ? 1 : 0) << '\n';
  }
}

std::vector<ReportRow> parse_rows_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw ConfigError("results csv: bad or missing header row");

  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 17)
      throw ConfigError("results csv: expected 17 columns, got " +
                        std::to_string(cells.size()));
    ReportRow r;
    r.layer = cells[0];
    r.arch = arch_from_string(cells[1]);
    r.scheme = scheme_from_string(cells[2]);
    r.mapping = std::stoi(cells[3]);
    r.Tp = std::stoi(cells[4]);
    r.Tq = std::stoi(cells[5]);
    r.Tm = std::stoi(cells[6]);
    r.Tc = std::stoi(cells[7]);
    r.n_same_row = std::stoull(cells[8]);
    r.n_dif_bank = std::stoull(cells[9]);
    r.n_dif_subarray = std::stoull(cells[10]);
    r.n_dif_row = std::stoull(cells[11]);
    r.cycles = std::stoull(cells[12]);
    r.energy_pj = std::strtod(cells[13].c_str(), nullptr);
    r.latency_ns = std::strtod(cells[14].c_str(), nullptr);
    r.edp = std::strtod(cells[15].c_str(), nullptr);
    r.is_best = cells[16] == "1";
    rows.push_back(std::move(r));
  }
  return rows;
}

ComparisonTable build_comparison(const std::vector<ReportRow>& rows) {
  ComparisonTable table;

  // Group key preserving first-seen (i.e. emission) order.
  std::vector<std::tuple<std::string, DramArch, ScheduleScheme>> group_order;
  std::map<std::tuple<std::string, DramArch, ScheduleScheme>,
           std::vector<const ReportRow*>>
      groups;
  for (const ReportRow& r : rows) {
    const auto key = std::make_tuple(r.layer, r.arch, r.scheme);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) group_order.push_back(key);
    it->second.push_back(&r);
  }

  for (const auto& key : group_order) {
    const auto& members = groups.at(key);
    if (members.size() < 2) {
      table.warnings.push_back("group " + std::get<0>(key) + "/" +
                               to_string(std::get<1>(key)) + "/" +
                               to_string(std::get<2>(key)) +
                               " has a single mapping; ratios omitted");
      continue;
    }
    GroupComparison g;
    g.layer = std::get<0>(key);
    g.arch = std::get<1>(key);
    g.scheme = std::get<2>(key);
    double max_edp = 0.0;
    for (const ReportRow* r : members) max_edp = std::max(max_edp, r->edp);
    for (const ReportRow* r : members) {
      MappingStat s;
      s.mapping = r->mapping;
      s.edp = r->edp;
      s.normalized = r->edp / max_edp;
      s.improvement = 1.0 - s.normalized;
      g.mappings.push_back(s);
    }
    table.groups.push_back(std::move(g));
  }

  // SALP-vs-DDR3 improvement per (layer, scheme, mapping).
  std::map<std::tuple<std::string, ScheduleScheme, int>, double> ddr3_edp;
  for (const ReportRow& r : rows)
    if (r.arch == DramArch::DDR3)
      ddr3_edp[{r.layer, r.scheme, r.mapping}] = r.edp;
  for (const ReportRow& r : rows) {
    if (r.arch == DramArch::DDR3) continue;
    auto it = ddr3_edp.find({r.layer, r.scheme, r.mapping});
    if (it == ddr3_edp.end() || it->second <= 0.0) continue;
    table.salp_vs_ddr3.push_back(
        {r.layer, r.scheme, r.mapping, r.arch, 1.0 - r.edp / it->second});
  }
  return table;
}

}  // namespace drmap
