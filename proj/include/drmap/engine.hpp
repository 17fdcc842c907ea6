#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "drmap/cost.hpp"
#include "drmap/workload.hpp"

namespace drmap {

// One fully evaluated (layer, partitioning, schedule, mapping, architecture)
// point of the design space.
struct CandidateResult {
  std::string layer;
  DramArch arch = DramArch::DDR3;
  ScheduleScheme scheme = ScheduleScheme::IfmsReuse;           // DSE axis value
  ScheduleScheme resolved_scheme = ScheduleScheme::IfmsReuse;  // fixed scheme evaluated
  int mapping_id = 0;
  TileConfig tile;
  AccessCounts counts;  // aggregated over all tile fetches
  std::uint64_t total_words = 0;
  std::uint64_t cycles = 0;
  double energy_pj = 0.0;
  double latency_ns = 0.0;
  double edp = 0.0;  // energy_pj * latency_ns
};

// Cost of one layer pass: every tile fetch event classified independently,
// cycles and energy accumulated per the linear cost model.
CandidateResult layer_cost(const ConvLayer& layer, const TileConfig& tile,
                           const LoopOrder& order, const MappingPolicy& policy,
                           DramArch arch, const DramGeometry& geom,
                           const CostTable& table);

struct DseRequest {
  std::vector<ConvLayer> network;
  DramGeometry geom;
  BufferConfig buffers;
  std::vector<DramArch> archs = {DramArch::DDR3, DramArch::SALP1,
                                 DramArch::SALP2, DramArch::SALP_MASA};
  std::vector<ScheduleScheme> schemes = {
      ScheduleScheme::IfmsReuse, ScheduleScheme::WghsReuse,
      ScheduleScheme::OfmsReuse, ScheduleScheme::AdaptiveReuse};
  std::vector<int> mapping_ids = {1, 2, 3, 4, 5, 6};
  CostTable table = CostTable::builtin_default();
  EnumerationMode mode = EnumerationMode::divisors();
  int workers = 0;  // 0 = DRMAP_WORKERS env or hardware default
  bool log_candidates = false;
};

struct DseRow {
  CandidateResult cand;
  bool is_best = false;  // winner of its (layer, arch, scheme) group
};

struct LayerOutcome {
  std::string layer;
  std::optional<ScheduleScheme> adaptive_resolution;
  // Group bests, arch-major then scheme then mapping, matching the request's
  // canonical axis order.
  std::vector<DseRow> rows;
  // Overall minimum-EDP candidate per requested architecture.
  std::vector<CandidateResult> best_by_arch;
};

struct DseOutput {
  std::vector<DramArch> archs;                 // canonical, as explored
  std::vector<ScheduleScheme> schemes;         // canonical, as explored
  std::vector<int> mapping_ids;                // ascending
  std::vector<LayerOutcome> layers;
  std::vector<std::pair<DramArch, double>> network_edp;
  std::vector<CandidateResult> candidate_log;  // only when log_candidates
};

// Exhaustive exploration: tilings x schemes x mappings per layer, priced per
// architecture. A later candidate whose EDP ties the incumbent replaces it,
// so reported bests are the last minimum in enumeration order regardless of
// worker count.
DseOutput dse(const DseRequest& request);

}  // namespace drmap
