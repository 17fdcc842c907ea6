#include "drmap/dram.hpp"

#include <sstream>

namespace drmap {

const char* to_string(DramArch arch) {
  switch (arch) {
    case DramArch::DDR3: return "ddr3";
    case DramArch::SALP1: return "salp1";
    case DramArch::SALP2: return "salp2";
    case DramArch::SALP_MASA: return "salpmasa";
  }
  return "?";
}

DramArch arch_from_string(const std::string& name) {
  if (name == "ddr3") return DramArch::DDR3;
  if (name == "salp1") return DramArch::SALP1;
  if (name == "salp2") return DramArch::SALP2;
  if (name == "salpmasa") return DramArch::SALP_MASA;
  throw ConfigError("unknown DRAM architecture '" + name +
                    "' (expected ddr3, salp1, salp2 or salpmasa)");
}

const char* to_string(AccessCategory cat) {
  switch (cat) {
    case AccessCategory::SameRow: return "same_row";
    case AccessCategory::DifferentBank: return "dif_bank";
    case AccessCategory::DifferentSubarray: return "dif_subarray";
    case AccessCategory::DifferentRow: return "dif_row";
  }
  return "?";
}

AccessCategory category_of(Level level) {
  switch (level) {
    case Level::Column: return AccessCategory::SameRow;
    case Level::Bank: return AccessCategory::DifferentBank;
    case Level::Subarray: return AccessCategory::DifferentSubarray;
    case Level::Row: return AccessCategory::DifferentRow;
  }
  return AccessCategory::DifferentRow;
}

std::uint64_t DramGeometry::radix(Level level) const {
  switch (level) {
    case Level::Column: return columns_per_row;
    case Level::Bank: return banks_per_chip;
    case Level::Subarray: return subarrays_per_bank;
    case Level::Row: return rows_per_subarray;
  }
  return 0;
}

std::uint64_t DramGeometry::chip_words() const {
  return banks_per_chip * subarrays_per_bank * rows_per_subarray *
         columns_per_row;
}

std::uint64_t DramGeometry::total_words() const {
  return chip_words() * chips_per_rank * ranks_per_channel * channels;
}

void DramGeometry::validate() const {
  auto check = [](std::uint64_t v, const char* name) {
    if (v < 1) throw ConfigError(std::string("geometry field '") + name + "' must be >= 1");
  };
  check(channels, "channels");
  check(ranks_per_channel, "ranks_per_channel");
  check(chips_per_rank, "chips_per_rank");
  check(banks_per_chip, "banks_per_chip");
  check(subarrays_per_bank, "subarrays_per_bank");
  check(rows_per_subarray, "rows_per_subarray");
  check(columns_per_row, "columns_per_row");
  check(burst_bytes, "burst_bytes");
}

std::uint64_t& DramCoord::at(Level level) {
  switch (level) {
    case Level::Column: return column;
    case Level::Bank: return bank;
    case Level::Subarray: return subarray;
    case Level::Row: return row;
  }
  return row;
}

std::uint64_t DramCoord::at(Level level) const {
  return const_cast<DramCoord*>(this)->at(level);
}

namespace {

constexpr Level C = Level::Column;
constexpr Level B = Level::Bank;
constexpr Level S = Level::Subarray;
constexpr Level R = Level::Row;

// Table of the six explored policies, inner-most loop first.
const std::array<MappingPolicy, 6> kPolicies = {{
    {1, {C, S, B, R}},
    {2, {S, C, B, R}},
    {3, {C, B, S, R}},
    {4, {B, C, S, R}},
    {5, {S, B, C, R}},
    {6, {B, S, C, R}},
}};

const char* level_tag(Level l) {
  switch (l) {
    case Level::Column: return "col";
    case Level::Bank: return "bank";
    case Level::Subarray: return "sub";
    case Level::Row: return "row";
  }
  return "?";
}

}  // namespace

const MappingPolicy& MappingPolicy::table(int id) {
  if (id < 1 || id > 6)
    throw ConfigError("mapping policy id must be in 1..6, got " +
                      std::to_string(id));
  return kPolicies[static_cast<std::size_t>(id - 1)];
}

const std::array<MappingPolicy, 6>& MappingPolicy::all() { return kPolicies; }

std::string MappingPolicy::name() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < loop_order.size(); ++i) {
    if (i) out << '.';
    out << level_tag(loop_order[i]);
  }
  return out.str();
}

std::uint64_t& AccessCounts::at(AccessCategory cat) {
  switch (cat) {
    case AccessCategory::SameRow: return n_same_row;
    case AccessCategory::DifferentBank: return n_dif_bank;
    case AccessCategory::DifferentSubarray: return n_dif_subarray;
    case AccessCategory::DifferentRow: return n_dif_row;
  }
  return n_dif_row;
}

std::uint64_t AccessCounts::at(AccessCategory cat) const {
  return const_cast<AccessCounts*>(this)->at(cat);
}

AccessCounts& AccessCounts::operator+=(const AccessCounts& other) {
  n_same_row += other.n_same_row;
  n_dif_bank += other.n_dif_bank;
  n_dif_subarray += other.n_dif_subarray;
  n_dif_row += other.n_dif_row;
  return *this;
}

AccessCounts& AccessCounts::add_scaled(const AccessCounts& other,
                                       std::uint64_t factor) {
  n_same_row += other.n_same_row * factor;
  n_dif_bank += other.n_dif_bank * factor;
  n_dif_subarray += other.n_dif_subarray * factor;
  n_dif_row += other.n_dif_row * factor;
  return *this;
}

DramCoord linear_to_coord(std::uint64_t index, const MappingPolicy& policy,
                          const DramGeometry& geom) {
  if (index >= geom.total_words())
    throw CapacityError("word address " + std::to_string(index) +
                        " exceeds device capacity of " +
                        std::to_string(geom.total_words()) + " words");
  DramCoord coord;
  std::uint64_t rem = index;
  for (Level level : policy.loop_order) {
    const std::uint64_t radix = geom.radix(level);
    coord.at(level) = rem % radix;
    rem /= radix;
  }
  coord.chip = rem % geom.chips_per_rank;
  rem /= geom.chips_per_rank;
  coord.rank = rem % geom.ranks_per_channel;
  rem /= geom.ranks_per_channel;
  coord.channel = rem;
  return coord;
}

std::uint64_t coord_to_linear(const DramCoord& coord,
                              const MappingPolicy& policy,
                              const DramGeometry& geom) {
  auto check = [](std::uint64_t v, std::uint64_t bound, const char* name) {
    if (v >= bound)
      throw BoundsError(std::string(name) + " index " + std::to_string(v) +
                        " out of bounds (" + std::to_string(bound) + ")");
  };
  check(coord.channel, geom.channels, "channel");
  check(coord.rank, geom.ranks_per_channel, "rank");
  check(coord.chip, geom.chips_per_rank, "chip");
  check(coord.bank, geom.banks_per_chip, "bank");
  check(coord.subarray, geom.subarrays_per_bank, "subarray");
  check(coord.row, geom.rows_per_subarray, "row");
  check(coord.column, geom.columns_per_row, "column");

  std::uint64_t index =
      (coord.channel * geom.ranks_per_channel + coord.rank) *
          geom.chips_per_rank +
      coord.chip;
  for (std::size_t i = policy.loop_order.size(); i-- > 0;) {
    const Level level = policy.loop_order[i];
    index = index * geom.radix(level) + coord.at(level);
  }
  return index;
}

AccessCounts classify_tile_stream(std::uint64_t tile_words,
                                  const MappingPolicy& policy,
                                  const DramGeometry& geom) {
  if (tile_words < 1)
    throw std::invalid_argument("tile_words must be >= 1");
  if (tile_words > geom.chip_words())
    throw CapacityError("tile of " + std::to_string(tile_words) +
                        " words exceeds chip capacity of " +
                        std::to_string(geom.chip_words()) + " words");

  // changes[k] = how many of the strided digits at loop position k increment
  // over the stream; the access at step i is charged to the outer-most
  // position whose digit increments, i.e. the loop boundary it crosses.
  const std::uint64_t f = tile_words - 1;
  std::array<std::uint64_t, 5> changes{};
  changes[0] = f;
  std::uint64_t stride = 1;
  for (std::size_t k = 1; k < 4; ++k) {
    stride *= geom.radix(policy.loop_order[k - 1]);
    changes[k] = f / stride;
  }
  changes[4] = 0;

  AccessCounts counts;
  for (std::size_t k = 0; k < 4; ++k)
    counts.at(category_of(policy.loop_order[k])) += changes[k] - changes[k + 1];
  counts.n_dif_row += 1;  // initial activation of the tile
  return counts;
}

}  // namespace drmap
