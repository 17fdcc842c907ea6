#include "drmap/frontend.hpp"

#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"

#include "drmap/io.hpp"
#include "drmap/oracle.hpp"
#include "drmap/report.hpp"

namespace drmap {

namespace {

using nlohmann::ordered_json;

void validate_config(const RunConfig& c) {
  if (c.network_path.empty())
    throw ConfigError("run config: network path is required");
  if (c.archs.empty() || c.schemes.empty() || c.mappings.empty())
    throw ConfigError("run config: arch, scheme and mapping lists must be non-empty");
  for (int id : c.mappings) MappingPolicy::table(id);
  if (c.buffers.ifm_bytes < 1 || c.buffers.wgh_bytes < 1 || c.buffers.ofm_bytes < 1)
    throw ConfigError("run config: buffer sizes must be >= 1 byte");
  if (c.oracle_check < 0)
    throw ConfigError("run config: oracle-check count must be >= 0");
}

ordered_json tile_json(const TileConfig& t) {
  return ordered_json::array({t.Tp, t.Tq, t.Tm, t.Tc});
}

ordered_json candidate_json(const CandidateResult& c) {
  ordered_json j;
  j["mapping"] = c.mapping_id;
  j["scheme"] = to_string(c.scheme);
  j["resolved_scheme"] = to_string(c.resolved_scheme);
  j["tile"] = tile_json(c.tile);
  j["total_words"] = c.total_words;
  j["cycles"] = c.cycles;
  j["energy_pj"] = round_sig6(c.energy_pj);
  j["latency_ns"] = round_sig6(c.latency_ns);
  j["edp"] = round_sig6(c.edp);
  return j;
}

// Deterministic spot check: re-derive sampled candidates along the closed-form
// path and the replay path; any disagreement fails the run.
std::uint64_t oracle_spot_check(const DseRequest& req, int samples) {
  struct LayerSpace {
    const ConvLayer* layer;
    std::vector<TileConfig> tilings;
    std::vector<LoopOrder> orders;        // per scheme axis
    std::vector<ScheduleScheme> schemes;  // axis values
  };
  std::vector<LayerSpace> spaces;
  std::uint64_t total = 0;
  for (const ConvLayer& layer : req.network) {
    LayerSpace s;
    s.layer = &layer;
    s.tilings = enumerate_tilings(layer, req.buffers, req.mode);
    for (ScheduleScheme axis : req.schemes) {
      const ScheduleScheme fixed =
          axis == ScheduleScheme::AdaptiveReuse
              ? adaptive_select(layer, req.buffers, req.mode)
              : axis;
      s.schemes.push_back(axis);
      s.orders.push_back(scheme_to_loop_order(fixed));
    }
    total += s.tilings.size() * s.schemes.size() * req.mapping_ids.size() *
             req.archs.size();
    spaces.push_back(std::move(s));
  }
  if (total == 0) return 0;

  std::mt19937_64 rng(0x5eedu);
  std::uint64_t performed = 0;
  for (int i = 0; i < samples; ++i) {
    std::uint64_t pick = rng() % total;
    for (const LayerSpace& s : spaces) {
      const std::uint64_t span = s.tilings.size() * s.schemes.size() *
                                 req.mapping_ids.size() * req.archs.size();
      if (pick >= span) {
        pick -= span;
        continue;
      }
      const std::size_t a = pick % req.archs.size();
      pick /= req.archs.size();
      const std::size_t m = pick % req.mapping_ids.size();
      pick /= req.mapping_ids.size();
      const std::size_t sc = pick % s.schemes.size();
      const std::size_t t = pick / s.schemes.size();

      const MappingPolicy& policy = MappingPolicy::table(req.mapping_ids[m]);
      const CandidateResult model =
          layer_cost(*s.layer, s.tilings[t], s.orders[sc], policy,
                     req.archs[a], req.geom, req.table);
      const auto [cycles, energy] =
          replay_layer(*s.layer, s.tilings[t], s.orders[sc], policy, req.geom,
                       req.table, req.archs[a]);
      if (cycles != model.cycles || energy != model.energy_pj)
        throw OracleMismatchError(
            "oracle mismatch on layer '" + s.layer->name + "' tile (" +
            std::to_string(s.tilings[t].Tp) + "," +
            std::to_string(s.tilings[t].Tq) + "," +
            std::to_string(s.tilings[t].Tm) + "," +
            std::to_string(s.tilings[t].Tc) + ") mapping " +
            std::to_string(policy.id) + " arch " + to_string(req.archs[a]));
      ++performed;
      break;
    }
  }
  return performed;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + path.string());
  out << content;
}

int run_impl(const RunConfig& config, std::ostream& log) {
  validate_config(config);

  DseRequest req;
  req.network = load_network(config.network_path);
  req.geom = config.geometry_path.empty() ? DramGeometry{}
                                          : load_geometry(config.geometry_path);
  req.table = config.costs_path.empty() ? CostTable::builtin_default()
                                        : load_cost_table(config.costs_path);
  req.buffers = config.buffers;
  req.archs = config.archs;
  req.schemes = config.schemes;
  req.mapping_ids = config.mappings;
  req.mode = config.mode;
  req.workers = config.workers;
  req.log_candidates = config.log_candidates;

  const DseOutput out = dse(req);
  const std::vector<ReportRow> rows = collect_rows(out);

  std::filesystem::create_directories(config.out_dir);
  const std::filesystem::path out_dir(config.out_dir);

  {
    std::ostringstream csv;
    write_rows_csv(csv, rows);
    write_text_file(out_dir / "results.csv", csv.str());
  }
  if (config.log_candidates) {
    std::vector<ReportRow> log_rows;
    log_rows.reserve(out.candidate_log.size());
    for (const CandidateResult& c : out.candidate_log)
      log_rows.push_back(ReportRow::from({c, false}));
    std::ostringstream csv;
    write_rows_csv(csv, log_rows);
    write_text_file(out_dir / "candidates.csv", csv.str());
  }

  // The axes as explored, canonical order.
  DseRequest checked = req;
  checked.archs = out.archs;
  checked.schemes = out.schemes;
  checked.mapping_ids = out.mapping_ids;
  const std::uint64_t oracle_performed =
      config.oracle_check > 0 ? oracle_spot_check(checked, config.oracle_check)
                              : 0;

  const ComparisonTable cmp = build_comparison(rows);

  ordered_json summary;
  summary["config"] = {
      {"network", config.network_path},
      {"geometry", config.geometry_path.empty() ? "<built-in>" : config.geometry_path},
      {"costs", config.costs_path.empty() ? "<built-in>" : config.costs_path},
      {"buffers", {config.buffers.ifm_bytes, config.buffers.wgh_bytes, config.buffers.ofm_bytes}},
      {"tiling", config.mode.to_string()},
      {"oracle_check", config.oracle_check},
  };

  summary["layers"] = ordered_json::array();
  for (const LayerOutcome& layer : out.layers) {
    ordered_json lj;
    lj["name"] = layer.layer;
    if (layer.adaptive_resolution)
      lj["adaptive_resolution"] = to_string(*layer.adaptive_resolution);
    ordered_json best;
    for (std::size_t a = 0; a < out.archs.size(); ++a)
      best[to_string(out.archs[a])] = candidate_json(layer.best_by_arch[a]);
    lj["best"] = std::move(best);
    summary["layers"].push_back(std::move(lj));
  }

  ordered_json totals;
  for (const auto& [arch, edp] : out.network_edp)
    totals[to_string(arch)] = round_sig6(edp);
  summary["network_edp"] = std::move(totals);

  ordered_json groups = ordered_json::array();
  for (const GroupComparison& g : cmp.groups) {
    ordered_json gj;
    gj["layer"] = g.layer;
    gj["arch"] = to_string(g.arch);
    gj["scheme"] = to_string(g.scheme);
    ordered_json maps = ordered_json::array();
    for (const MappingStat& s : g.mappings)
      maps.push_back({{"mapping", s.mapping},
                      {"edp", round_sig6(s.edp)},
                      {"normalized", round_sig6(s.normalized)},
                      {"improvement", round_sig6(s.improvement)}});
    gj["mappings"] = std::move(maps);
    groups.push_back(std::move(gj));
  }
  summary["comparison"]["groups"] = std::move(groups);

  ordered_json salp = ordered_json::array();
  for (const SalpImprovement& s : cmp.salp_vs_ddr3)
    salp.push_back({{"layer", s.layer},
                    {"scheme", to_string(s.scheme)},
                    {"mapping", s.mapping},
                    {"arch", to_string(s.arch)},
                    {"improvement", round_sig6(s.improvement)}});
  summary["comparison"]["salp_vs_ddr3"] = std::move(salp);
  summary["comparison"]["warnings"] = cmp.warnings;

  summary["oracle_check"] = {{"requested", config.oracle_check},
                             {"performed", oracle_performed},
                             {"mismatches", 0}};

  write_text_file(out_dir / "summary.json", summary.dump(2) + "\n");

  log << "explored " << out.layers.size() << " layer(s); results in "
      << (out_dir / "results.csv").string() << "\n";
  for (const auto& [arch, edp] : out.network_edp)
    log << "  network EDP [" << to_string(arch) << "] = " << format_sig6(edp)
        << " pJ*ns\n";
  if (config.oracle_check > 0)
    log << "  oracle spot checks: " << oracle_performed << " ok\n";
  return kOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& log, std::ostream& err) {
  try {
    return run_impl(config, log);
  } catch (const InfeasibleLayerError& e) {
    err << "error: " << e.what() << "\n";
    return kInfeasibleLayer;
  } catch (const OracleMismatchError& e) {
    err << "error: " << e.what() << "\n";
    return kOracleMismatch;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace drmap
