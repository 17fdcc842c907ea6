#include "drmap/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace drmap {

namespace {

struct Aggregate {
  AccessCounts counts;
  std::uint64_t words = 0;
};

Aggregate aggregate_counts(const std::vector<VolumeBucket>& hist,
                           const MappingPolicy& policy,
                           const DramGeometry& geom) {
  Aggregate agg;
  for (const VolumeBucket& b : hist) {
    agg.counts.add_scaled(classify_tile_stream(b.words, policy, geom), b.count);
    agg.words += b.words * b.count;
  }
  return agg;
}

CandidateResult price(const Aggregate& agg, DramArch arch,
                      const CostTable& table) {
  CandidateResult r;
  r.arch = arch;
  r.counts = agg.counts;
  r.total_words = agg.words;
  r.cycles = tile_cycles(agg.counts, arch, table);
  r.energy_pj = tile_energy(agg.counts, arch, table);
  r.latency_ns = static_cast<double>(r.cycles) * table.clock_period_ns;
  r.edp = r.energy_pj * r.latency_ns;
  return r;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DRMAP_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

// Algorithm-style incumbent update: a later candidate with EDP <= incumbent
// replaces it. Candidates must be offered in enumeration order.
void offer(std::optional<CandidateResult>& incumbent,
           const CandidateResult& cand) {
  if (!incumbent || cand.edp <= incumbent->edp) incumbent = cand;
}

// Partial DSE result over a contiguous tiling range. Merging right-hand
// partials after left-hand ones reproduces the sequential fold exactly.
struct Fold {
  std::size_t n_schemes = 0, n_maps = 0, n_archs = 0;
  std::vector<std::optional<CandidateResult>> group;         // [arch][scheme][map]
  std::vector<std::optional<CandidateResult>> scheme_winner; // [arch][scheme]
  std::vector<std::optional<CandidateResult>> overall;       // [arch]
  std::vector<CandidateResult> log;

  Fold(std::size_t archs, std::size_t schemes, std::size_t maps)
      : n_schemes(schemes), n_maps(maps), n_archs(archs),
        group(archs * schemes * maps), scheme_winner(archs * schemes),
        overall(archs) {}

  std::size_t gidx(std::size_t a, std::size_t s, std::size_t m) const {
    return (a * n_schemes + s) * n_maps + m;
  }

  void add(std::size_t a, std::size_t s, std::size_t m,
           const CandidateResult& cand) {
    offer(group[gidx(a, s, m)], cand);
    offer(scheme_winner[a * n_schemes + s], cand);
    offer(overall[a], cand);
  }

  void absorb(Fold&& right) {
    auto merge = [](std::vector<std::optional<CandidateResult>>& left,
                    std::vector<std::optional<CandidateResult>>& rhs) {
      for (std::size_t i = 0; i < left.size(); ++i)
        if (rhs[i]) offer(left[i], *rhs[i]);
    };
    merge(group, right.group);
    merge(scheme_winner, right.scheme_winner);
    merge(overall, right.overall);
    log.insert(log.end(), right.log.begin(), right.log.end());
  }
};

struct ResolvedScheme {
  ScheduleScheme axis;
  ScheduleScheme fixed;
  LoopOrder order;
};

Fold evaluate_range(const ConvLayer& layer,
                    const std::vector<TileConfig>& tilings, std::size_t begin,
                    std::size_t end,
                    const std::vector<ResolvedScheme>& schemes,
                    const std::vector<int>& mapping_ids,
                    const std::vector<DramArch>& archs,
                    const DramGeometry& geom, const CostTable& table,
                    bool log_candidates) {
  Fold fold(archs.size(), schemes.size(), mapping_ids.size());
  for (std::size_t t = begin; t < end; ++t) {
    const TileConfig& tile = tilings[t];
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      const auto hist = fetch_histogram(layer, tile, schemes[s].order);
      for (std::size_t m = 0; m < mapping_ids.size(); ++m) {
        const MappingPolicy& policy = MappingPolicy::table(mapping_ids[m]);
        const Aggregate agg = aggregate_counts(hist, policy, geom);
        for (std::size_t a = 0; a < archs.size(); ++a) {
          CandidateResult cand = price(agg, archs[a], table);
          cand.layer = layer.name;
          cand.scheme = schemes[s].axis;
          cand.resolved_scheme = schemes[s].fixed;
          cand.mapping_id = mapping_ids[m];
          cand.tile = tile;
          fold.add(a, s, m, cand);
          if (log_candidates) fold.log.push_back(std::move(cand));
        }
      }
    }
  }
  return fold;
}

void validate_request(const DseRequest& req) {
  if (req.network.empty()) throw ConfigError("dse: network has no layers");
  if (req.archs.empty()) throw ConfigError("dse: architecture list is empty");
  if (req.schemes.empty()) throw ConfigError("dse: scheme list is empty");
  if (req.mapping_ids.empty()) throw ConfigError("dse: mapping list is empty");
  for (int id : req.mapping_ids) MappingPolicy::table(id);  // throws on bad id
  for (const ConvLayer& l : req.network) l.validate();
  req.geom.validate();
  req.table.validate();
}

template <typename T>
std::vector<T> canonical_subset(const std::vector<T>& requested,
                                std::initializer_list<T> canon) {
  std::vector<T> out;
  for (T v : canon)
    if (std::find(requested.begin(), requested.end(), v) != requested.end())
      out.push_back(v);
  return out;
}

}  // namespace

CandidateResult layer_cost(const ConvLayer& layer, const TileConfig& tile,
                           const LoopOrder& order, const MappingPolicy& policy,
                           DramArch arch, const DramGeometry& geom,
                           const CostTable& table) {
  const Aggregate agg =
      aggregate_counts(fetch_histogram(layer, tile, order), policy, geom);
  CandidateResult r = price(agg, arch, table);
  r.layer = layer.name;
  r.mapping_id = policy.id;
  r.tile = tile;
  return r;
}

DseOutput dse(const DseRequest& request) {
  validate_request(request);

  DseOutput out;
  out.archs = canonical_subset(
      request.archs, {DramArch::DDR3, DramArch::SALP1, DramArch::SALP2,
                      DramArch::SALP_MASA});
  out.schemes = canonical_subset(
      request.schemes,
      {ScheduleScheme::IfmsReuse, ScheduleScheme::WghsReuse,
       ScheduleScheme::OfmsReuse, ScheduleScheme::AdaptiveReuse});
  out.mapping_ids = request.mapping_ids;
  std::sort(out.mapping_ids.begin(), out.mapping_ids.end());
  out.mapping_ids.erase(
      std::unique(out.mapping_ids.begin(), out.mapping_ids.end()),
      out.mapping_ids.end());

  const int workers = resolve_workers(request.workers);
  std::vector<double> totals(out.archs.size(), 0.0);

  for (const ConvLayer& layer : request.network) {
    const std::vector<TileConfig> tilings =
        enumerate_tilings(layer, request.buffers, request.mode);
    if (tilings.empty()) throw InfeasibleLayerError(layer.name);

    LayerOutcome outcome;
    outcome.layer = layer.name;

    std::vector<ResolvedScheme> schemes;
    for (ScheduleScheme axis : out.schemes) {
      ScheduleScheme fixed = axis;
      if (axis == ScheduleScheme::AdaptiveReuse) {
        fixed = adaptive_select(layer, request.buffers, request.mode);
        outcome.adaptive_resolution = fixed;
      }
      schemes.push_back({axis, fixed, scheme_to_loop_order(fixed)});
    }

    const std::size_t n_chunks = std::min<std::size_t>(
        static_cast<std::size_t>(workers), tilings.size());
    std::vector<Fold> partials;
    partials.reserve(n_chunks);
    if (n_chunks <= 1) {
      partials.push_back(evaluate_range(
          layer, tilings, 0, tilings.size(), schemes, out.mapping_ids,
          out.archs, request.geom, request.table, request.log_candidates));
    } else {
      partials.resize(n_chunks, Fold(out.archs.size(), schemes.size(),
                                     out.mapping_ids.size()));
      std::vector<std::thread> pool;
      const std::size_t per = (tilings.size() + n_chunks - 1) / n_chunks;
      for (std::size_t c = 0; c < n_chunks; ++c) {
        const std::size_t begin = c * per;
        const std::size_t end = std::min(begin + per, tilings.size());
        pool.emplace_back([&, c, begin, end] {
          partials[c] = evaluate_range(layer, tilings, begin, end, schemes,
                                       out.mapping_ids, out.archs, request.geom,
                                       request.table, request.log_candidates);
        });
      }
      for (std::thread& th : pool) th.join();
    }

    Fold fold = std::move(partials.front());
    for (std::size_t c = 1; c < partials.size(); ++c)
      fold.absorb(std::move(partials[c]));

    for (std::size_t a = 0; a < out.archs.size(); ++a) {
      for (std::size_t s = 0; s < schemes.size(); ++s) {
        const auto& winner = fold.scheme_winner[a * schemes.size() + s];
        for (std::size_t m = 0; m < out.mapping_ids.size(); ++m) {
          const auto& cand = fold.group[fold.gidx(a, s, m)];
          DseRow row{*cand, winner->mapping_id == cand->mapping_id};
          outcome.rows.push_back(std::move(row));
        }
      }
      outcome.best_by_arch.push_back(*fold.overall[a]);
      totals[a] += fold.overall[a]->edp;
    }
    out.candidate_log.insert(out.candidate_log.end(), fold.log.begin(),
                             fold.log.end());
    out.layers.push_back(std::move(outcome));
  }

  for (std::size_t a = 0; a < out.archs.size(); ++a)
    out.network_edp.emplace_back(out.archs[a], totals[a]);
  return out;
}

}  // namespace drmap
