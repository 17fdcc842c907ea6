#include "drmap/oracle.hpp"

#include <map>
#include <ostream>
#include <tuple>
#include <unordered_map>

namespace drmap {

namespace {

using BankKey = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t,
                           std::uint64_t>;  // channel, rank, chip, bank

BankKey bank_key(const DramCoord& c) {
  return {c.channel, c.rank, c.chip, c.bank};
}

struct OpenRowState {
  bool ddr3;  // one open row per bank vs one per subarray cell
  std::map<BankKey, std::pair<std::uint64_t, std::uint64_t>> per_bank;
  std::map<std::pair<BankKey, std::uint64_t>, std::uint64_t> per_cell;

  bool hit(const DramCoord& c) const {
    if (ddr3) {
      auto it = per_bank.find(bank_key(c));
      return it != per_bank.end() &&
             it->second == std::make_pair(c.subarray, c.row);
    }
    auto it = per_cell.find({bank_key(c), c.subarray});
    return it != per_cell.end() && it->second == c.row;
  }

  void activate(const DramCoord& c) {
    if (ddr3)
      per_bank[bank_key(c)] = {c.subarray, c.row};  // displaces the bank's row
    else
      per_cell[{bank_key(c), c.subarray}] = c.row;
  }
};

template <typename AddressAt>
ReplayReport replay_transitions(std::uint64_t count, AddressAt&& address_at,
                                const MappingPolicy& policy,
                                const DramGeometry& geom, bool with_trace) {
  ReplayReport rep;
  if (with_trace) rep.trace.reserve(count);
  DramCoord prev;
  for (std::uint64_t i = 0; i < count; ++i) {
    const DramCoord cur = linear_to_coord(address_at(i), policy, geom);
    const AccessCategory cat = (i == 0) ? AccessCategory::DifferentRow
                                        : transition_category(prev, cur, policy);
    rep.counts.at(cat) += 1;
    if (with_trace) rep.trace.push_back({address_at(i), cur, cat});
    prev = cur;
  }
  return rep;
}

template <typename AddressAt>
ReplayReport replay_stateful(std::uint64_t count, AddressAt&& address_at,
                             const MappingPolicy& policy,
                             const DramGeometry& geom, DramArch arch,
                             bool with_trace) {
  ReplayReport rep;
  if (with_trace) rep.trace.reserve(count);
  OpenRowState state{arch == DramArch::DDR3, {}, {}};
  DramCoord prev;
  for (std::uint64_t i = 0; i < count; ++i) {
    const DramCoord cur = linear_to_coord(address_at(i), policy, geom);
    AccessCategory cat;
    if (i == 0) {
      cat = AccessCategory::DifferentRow;
      state.activate(cur);
    } else if (state.hit(cur)) {
      cat = AccessCategory::SameRow;
      if (transition_category(prev, cur, policy) != AccessCategory::SameRow)
        rep.hit_on_bank_return += 1;
    } else {
      if (prev.channel != cur.channel || prev.rank != cur.rank ||
          prev.chip != cur.chip || prev.bank != cur.bank)
        cat = AccessCategory::DifferentBank;
      else if (prev.subarray != cur.subarray)
        cat = AccessCategory::DifferentSubarray;
      else
        cat = AccessCategory::DifferentRow;
      state.activate(cur);
    }
    rep.counts.at(cat) += 1;
    if (with_trace) rep.trace.push_back({address_at(i), cur, cat});
    prev = cur;
  }
  return rep;
}

void check_tile_words(std::uint64_t tile_words, const DramGeometry& geom) {
  if (tile_words < 1) throw std::invalid_argument("tile_words must be >= 1");
  if (tile_words > geom.chip_words())
    throw CapacityError("tile of " + std::to_string(tile_words) +
                        " words exceeds chip capacity of " +
                        std::to_string(geom.chip_words()) + " words");
}

}  // namespace

AccessCategory transition_category(const DramCoord& prev, const DramCoord& cur,
                                   const MappingPolicy& policy) {
  if (prev.channel != cur.channel || prev.rank != cur.rank ||
      prev.chip != cur.chip)
    return AccessCategory::DifferentBank;
  for (std::size_t i = policy.loop_order.size(); i-- > 0;) {
    const Level level = policy.loop_order[i];
    if (prev.at(level) != cur.at(level)) return category_of(level);
  }
  return AccessCategory::SameRow;
}

ReplayReport replay_tile(std::uint64_t tile_words, const MappingPolicy& policy,
                         const DramGeometry& geom, bool with_trace) {
  check_tile_words(tile_words, geom);
  return replay_transitions(
      tile_words, [](std::uint64_t i) { return i; }, policy, geom, with_trace);
}

ReplayReport replay_stream(const std::vector<std::uint64_t>& addresses,
                           const MappingPolicy& policy,
                           const DramGeometry& geom, bool with_trace) {
  return replay_transitions(
      addresses.size(), [&](std::uint64_t i) { return addresses[i]; }, policy,
      geom, with_trace);
}

std::pair<std::uint64_t, double> replay_layer(
    const ConvLayer& layer, const TileConfig& tile, const LoopOrder& order,
    const MappingPolicy& policy, const DramGeometry& geom,
    const CostTable& table, DramArch arch) {
  std::unordered_map<std::uint64_t, std::pair<std::uint64_t, double>> memo;
  std::uint64_t cycles = 0;
  double energy = 0.0;
  for_each_fetch_event(layer, tile, order, [&](FetchEvent ev) {
    auto it = memo.find(ev.words);
    if (it == memo.end()) {
      const AccessCounts counts = replay_tile(ev.words, policy, geom).counts;
      it = memo.emplace(ev.words, std::make_pair(tile_cycles(counts, arch, table),
                                                 tile_energy(counts, arch, table)))
               .first;
    }
    cycles += it->second.first;
    energy += it->second.second;
  });
  return {cycles, energy};
}

ReplayReport replay_state_machine(std::uint64_t tile_words,
                                  const MappingPolicy& policy,
                                  const DramGeometry& geom, DramArch arch,
                                  bool with_trace) {
  check_tile_words(tile_words, geom);
  return replay_stateful(
      tile_words, [](std::uint64_t i) { return i; }, policy, geom, arch,
      with_trace);
}

ReplayReport replay_state_machine_stream(
    const std::vector<std::uint64_t>& addresses, const MappingPolicy& policy,
    const DramGeometry& geom, DramArch arch, bool with_trace) {
  return replay_stateful(
      addresses.size(), [&](std::uint64_t i) { return addresses[i]; }, policy,
      geom, arch, with_trace);
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace) {
  out << "word_index,channel,rank,chip,bank,subarray,row,column,category\n";
  for (const TraceEntry& t : trace) {
    out << t.word_index << ',' << t.coord.channel << ',' << t.coord.rank << ','
        << t.coord.chip << ',' << t.coord.bank << ',' << t.coord.subarray
        << ',' << t.coord.row << ',' << t.coord.column << ','
        << to_string(t.category) << '\n';
  }
}

}  // namespace drmap
