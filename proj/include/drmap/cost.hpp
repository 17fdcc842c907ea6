#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "drmap/dram.hpp"

namespace drmap {

struct CategoryCost {
  std::uint64_t cycles = 0;
  double energy_pj = 0.0;
};

// Per-architecture, per-category access costs: the numeric stand-in for the
// measured latency/energy-per-access charts. Ordering invariants are enforced
// on load; the architectures only ever differ in these prices, never in
// geometry.
struct CostTable {
  double clock_period_ns = 1.25;
  std::array<std::array<CategoryCost, kNumCategories>, kNumArchs> entries{};

  const CategoryCost& at(DramArch arch, AccessCategory cat) const {
    return entries[static_cast<std::size_t>(arch)][static_cast<std::size_t>(cat)];
  }
  CategoryCost& at(DramArch arch, AccessCategory cat) {
    return entries[static_cast<std::size_t>(arch)][static_cast<std::size_t>(cat)];
  }

  // Rejects non-positive entries, hit/bank/subarray/row ordering violations
  // and DDR3 tables that price a subarray switch below a row conflict.
  void validate() const;

  // DDR3-1600 11-11-11 derived default; identical to data/costs_default.json.
  static const CostTable& builtin_default();
};

// Eq.-style linear combination: sum over categories of count * cycles.
std::uint64_t tile_cycles(const AccessCounts& counts, DramArch arch,
                          const CostTable& table);

// Same linear form over the energy entries, in picojoules.
double tile_energy(const AccessCounts& counts, DramArch arch,
                   const CostTable& table);

}  // namespace drmap
