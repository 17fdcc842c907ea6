#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "drmap/cost.hpp"
#include "drmap/workload.hpp"

namespace drmap {

struct TraceEntry {
  std::uint64_t word_index;
  DramCoord coord;
  AccessCategory category;
};

struct ReplayReport {
  AccessCounts counts;
  std::vector<TraceEntry> trace;          // only when requested
  std::uint64_t hit_on_bank_return = 0;   // state-machine mode diagnostic
};

// Category of one access given the previous one: the outer-most loop level
// whose coordinate differs. A repeated address is a hit. Chip/rank/channel
// switches count as device-level parallelism, priced like a bank switch.
AccessCategory transition_category(const DramCoord& prev, const DramCoord& cur,
                                   const MappingPolicy& policy);

// Brute-force counterpart of classify_tile_stream: decodes every word of the
// consecutive stream 0..tile_words-1 and classifies by explicit coordinate
// comparison. The first access is the tile's row activation.
ReplayReport replay_tile(std::uint64_t tile_words, const MappingPolicy& policy,
                         const DramGeometry& geom, bool with_trace = false);

// Same, for an arbitrary word-address stream.
ReplayReport replay_stream(const std::vector<std::uint64_t>& addresses,
                           const MappingPolicy& policy,
                           const DramGeometry& geom, bool with_trace = false);

// Brute-force counterpart of layer_cost: walks the full fetch-event schedule
// and replays every tile stream. Must match layer_cost exactly.
std::pair<std::uint64_t, double> replay_layer(
    const ConvLayer& layer, const TileConfig& tile, const LoopOrder& order,
    const MappingPolicy& policy, const DramGeometry& geom,
    const CostTable& table, DramArch arch);

// Diagnostic fidelity mode: tracks open rows (per bank on DDR3, per
// bank/subarray cell on SALP) and classifies hits from that state instead of
// from the loop-boundary transition. hit_on_bank_return counts accesses the
// transition model charges as a switch but the tracked state serves as a hit.
ReplayReport replay_state_machine(std::uint64_t tile_words,
                                  const MappingPolicy& policy,
                                  const DramGeometry& geom, DramArch arch,
                                  bool with_trace = false);

ReplayReport replay_state_machine_stream(
    const std::vector<std::uint64_t>& addresses, const MappingPolicy& policy,
    const DramGeometry& geom, DramArch arch, bool with_trace = false);

// word_index, channel, rank, chip, bank, subarray, row, column, category
void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace);

}  // namespace drmap
