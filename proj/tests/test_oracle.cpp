#include <sstream>

#include "doctest.h"
#include "drmap/engine.hpp"
#include "drmap/oracle.hpp"

using namespace drmap;

namespace {
const DramGeometry kGeom{};
}

TEST_CASE("replay of one word is a single activation") {
  for (const MappingPolicy& p : MappingPolicy::all())
    CHECK(replay_tile(1, p, kGeom).counts == AccessCounts{0, 0, 0, 1});
}

TEST_CASE("replay of exactly one row: all hits after the activation") {
  const auto rep =
      replay_tile(kGeom.columns_per_row, MappingPolicy::table(3), kGeom);
  CHECK(rep.counts == AccessCounts{kGeom.columns_per_row - 1, 0, 0, 1});
}

TEST_CASE("replay trace records one entry per word") {
  const auto rep = replay_tile(300, MappingPolicy::table(5), kGeom, true);
  REQUIRE(rep.trace.size() == 300);
  CHECK(rep.trace.front().category == AccessCategory::DifferentRow);
  CHECK(rep.counts.total() == 300);
  // repeated replays are identical
  const auto again = replay_tile(300, MappingPolicy::table(5), kGeom, true);
  for (std::size_t i = 0; i < rep.trace.size(); ++i) {
    CHECK(rep.trace[i].coord == again.trace[i].coord);
    CHECK(rep.trace[i].category == again.trace[i].category);
  }
}

TEST_CASE("state machine mode matches the transition model within one row") {
  for (const MappingPolicy& p : MappingPolicy::all()) {
    for (DramArch arch : {DramArch::DDR3, DramArch::SALP_MASA}) {
      const auto sm = replay_state_machine(kGeom.columns_per_row, p, kGeom, arch);
      CHECK(sm.counts == replay_tile(kGeom.columns_per_row, p, kGeom).counts);
      CHECK(sm.hit_on_bank_return == 0);
    }
  }
}

TEST_CASE("a linear stream never returns to a bank under mapping 3") {
  const auto sm = replay_state_machine(2 * kGeom.columns_per_row,
                                       MappingPolicy::table(3), kGeom,
                                       DramArch::DDR3);
  CHECK(sm.hit_on_bank_return == 0);
  CHECK(sm.counts ==
        AccessCounts{2 * kGeom.columns_per_row - 2, 1, 0, 1});
}

TEST_CASE("handcrafted bank0 -> bank1 -> bank0 stream, same row") {
  // Under mapping 3, address 128 sits in bank 1 and address 1 back in
  // bank 0, column 1: the transition model charges two bank switches, the
  // open-row state machine serves the return as a hit.
  const MappingPolicy& p = MappingPolicy::table(3);
  const std::vector<std::uint64_t> stream = {0, 128, 1};

  const ReplayReport transition = replay_stream(stream, p, kGeom);
  CHECK(transition.counts == AccessCounts{0, 2, 0, 1});

  const ReplayReport sm =
      replay_state_machine_stream(stream, p, kGeom, DramArch::DDR3);
  CHECK(sm.counts == AccessCounts{1, 1, 0, 1});
  CHECK(sm.hit_on_bank_return == 1);
}

TEST_CASE("ddr3 keeps one open row per bank; salp one per subarray") {
  // Mapping 2 walks subarrays first: ..., (sub7, col0), (sub0, col1), ...
  // The return to subarray 0 is a hit only if its local row buffer survived.
  const MappingPolicy& p = MappingPolicy::table(2);
  const std::uint64_t words = kGeom.subarrays_per_bank + 1;

  const auto salp = replay_state_machine(words, p, kGeom, DramArch::SALP_MASA);
  CHECK(salp.counts.n_same_row == 1);  // the wrap back to subarray 0
  // the transition model also calls that access a hit (column is the
  // outer-most change), so no divergence is recorded
  CHECK(salp.hit_on_bank_return == 0);
  CHECK(salp.counts == replay_tile(words, p, kGeom).counts);

  const auto ddr3 = replay_state_machine(words, p, kGeom, DramArch::DDR3);
  CHECK(ddr3.counts.n_same_row == 0);  // displaced by the other subarrays
  CHECK(ddr3.counts.n_dif_subarray == words - 1);
  CHECK(ddr3.hit_on_bank_return == 0);
}

TEST_CASE("layer-level replay equals layer_cost on small instances") {
  const ConvLayer layer{"s", 6, 6, 4, 3, 3, 3, 1, 1, 1};
  const CostTable& table = CostTable::builtin_default();
  for (const TileConfig tile :
       {TileConfig{2, 3, 2, 2}, TileConfig{1, 1, 1, 1}, TileConfig{6, 6, 3, 4}}) {
    for (ScheduleScheme scheme :
         {ScheduleScheme::IfmsReuse, ScheduleScheme::WghsReuse,
          ScheduleScheme::OfmsReuse}) {
      const LoopOrder order = scheme_to_loop_order(scheme);
      for (int mapping = 1; mapping <= 6; ++mapping) {
        const MappingPolicy& policy = MappingPolicy::table(mapping);
        for (DramArch arch : {DramArch::DDR3, DramArch::SALP2}) {
          const CandidateResult model =
              layer_cost(layer, tile, order, policy, arch, kGeom, table);
          const auto [cycles, energy] =
              replay_layer(layer, tile, order, policy, kGeom, table, arch);
          CHECK(model.cycles == cycles);
          CHECK(model.energy_pj == energy);
        }
      }
    }
  }
}

TEST_CASE("trace csv carries the documented columns") {
  const auto rep = replay_tile(3, MappingPolicy::table(3), kGeom, true);
  std::ostringstream out;
  write_trace_csv(out, rep.trace);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "word_index,channel,rank,chip,bank,subarray,row,column,category");
  std::getline(in, line);
  CHECK(line == "0,0,0,0,0,0,0,0,dif_row");
  std::getline(in, line);
  CHECK(line == "1,0,0,0,0,0,0,1,same_row");
}
