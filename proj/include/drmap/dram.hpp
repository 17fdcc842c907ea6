#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "drmap/errors.hpp"

namespace drmap {

// Address-decoding levels inside one chip. Chip, rank and channel sit above
// these as fixed outer radices.
enum class Level { Column = 0, Bank = 1, Subarray = 2, Row = 3 };

enum class DramArch { DDR3 = 0, SALP1 = 1, SALP2 = 2, SALP_MASA = 3 };

constexpr int kNumArchs = 4;

const char* to_string(DramArch arch);
DramArch arch_from_string(const std::string& name);

// Cost category of one word access. Every access falls in exactly one.
enum class AccessCategory {
  SameRow = 0,           // row buffer hit: only the column changed
  DifferentBank = 1,     // bank-level parallelism
  DifferentSubarray = 2, // subarray-level parallelism (conflict on DDR3)
  DifferentRow = 3,      // precharge + activate
};

constexpr int kNumCategories = 4;

const char* to_string(AccessCategory cat);
AccessCategory category_of(Level level);

// Physical hierarchy sizes of one DRAM device. The architecture variant never
// changes geometry, only per-access costs: subarrays exist physically in DDR3
// too.
struct DramGeometry {
  std::uint64_t channels = 1;
  std::uint64_t ranks_per_channel = 1;
  std::uint64_t chips_per_rank = 1;
  std::uint64_t banks_per_chip = 8;
  std::uint64_t subarrays_per_bank = 8;
  std::uint64_t rows_per_subarray = 32768;
  std::uint64_t columns_per_row = 128;  // in burst units
  std::uint64_t burst_bytes = 8;        // bytes moved per column access

  std::uint64_t radix(Level level) const;
  std::uint64_t chip_words() const;   // banks * subarrays * rows * columns
  std::uint64_t total_words() const;  // chip_words * chips * ranks * channels
  std::uint64_t capacity_bytes() const { return total_words() * burst_bytes; }

  void validate() const;  // every field >= 1
};

struct DramCoord {
  std::uint64_t channel = 0;
  std::uint64_t rank = 0;
  std::uint64_t chip = 0;
  std::uint64_t bank = 0;
  std::uint64_t subarray = 0;
  std::uint64_t row = 0;
  std::uint64_t column = 0;

  std::uint64_t& at(Level level);
  std::uint64_t at(Level level) const;

  bool operator==(const DramCoord&) const = default;
};

// One of the six Table-like mapping policies: a permutation of the four
// chip-internal levels, inner-most first. Row is always outer-most, so every
// policy floods columns/banks/subarrays before touching a new row.
struct MappingPolicy {
  int id = 0;
  std::array<Level, 4> loop_order{};  // [0] = inner-most

  static const MappingPolicy& table(int id);  // id in 1..6
  static const std::array<MappingPolicy, 6>& all();

  std::string name() const;  // e.g. "col.bank.sub.row"
};

// Per-tile access counts, one per cost category. Sums to the tile word count.
struct AccessCounts {
  std::uint64_t n_same_row = 0;
  std::uint64_t n_dif_bank = 0;
  std::uint64_t n_dif_subarray = 0;
  std::uint64_t n_dif_row = 0;

  std::uint64_t& at(AccessCategory cat);
  std::uint64_t at(AccessCategory cat) const;
  std::uint64_t total() const {
    return n_same_row + n_dif_bank + n_dif_subarray + n_dif_row;
  }

  AccessCounts& operator+=(const AccessCounts& other);
  AccessCounts& add_scaled(const AccessCounts& other, std::uint64_t factor);

  bool operator==(const AccessCounts&) const = default;
};

// Mixed-radix decode of a linear word address: digit order (least significant
// first) is the policy loop order, then chip, rank, channel outer-most.
DramCoord linear_to_coord(std::uint64_t index, const MappingPolicy& policy,
                          const DramGeometry& geom);

// Exact inverse of linear_to_coord.
std::uint64_t coord_to_linear(const DramCoord& coord,
                              const MappingPolicy& policy,
                              const DramGeometry& geom);

// Closed-form classification of the consecutive stream 0..tile_words-1.
// An access is classified by the outer-most loop level whose digit
// increments; the first access of a tile is one DifferentRow activation.
AccessCounts classify_tile_stream(std::uint64_t tile_words,
                                  const MappingPolicy& policy,
                                  const DramGeometry& geom);

}  // namespace drmap
