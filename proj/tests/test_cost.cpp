#include "doctest.h"
#include "drmap/cost.hpp"

using namespace drmap;

namespace {

// Synthetic power-of-two table: hit 1, bank 2, subarray 4, row 8 (ddr3 keeps
// subarray == row as required).
CostTable synthetic_table() {
  CostTable t;
  t.clock_period_ns = 1.0;
  for (int a = 0; a < kNumArchs; ++a) {
    const DramArch arch = static_cast<DramArch>(a);
    t.at(arch, AccessCategory::SameRow) = {1, 1.0};
    t.at(arch, AccessCategory::DifferentBank) = {2, 2.0};
    t.at(arch, AccessCategory::DifferentSubarray) =
        arch == DramArch::DDR3 ? CategoryCost{8, 8.0} : CategoryCost{4, 4.0};
    t.at(arch, AccessCategory::DifferentRow) = {8, 8.0};
  }
  t.validate();
  return t;
}

}  // namespace

TEST_CASE("the built-in table is valid and carries the derived timings") {
  const CostTable& t = CostTable::builtin_default();
  CHECK(t.clock_period_ns == 1.25);
  CHECK(t.at(DramArch::DDR3, AccessCategory::SameRow).cycles == 15);
  CHECK(t.at(DramArch::DDR3, AccessCategory::DifferentBank).cycles == 26);
  CHECK(t.at(DramArch::DDR3, AccessCategory::DifferentRow).cycles == 37);
  CHECK(t.at(DramArch::DDR3, AccessCategory::DifferentSubarray).cycles == 37);
  // SALP variants cut only the subarray-switch cost, progressively.
  const std::uint64_t s1 = t.at(DramArch::SALP1, AccessCategory::DifferentSubarray).cycles;
  const std::uint64_t s2 = t.at(DramArch::SALP2, AccessCategory::DifferentSubarray).cycles;
  const std::uint64_t s3 = t.at(DramArch::SALP_MASA, AccessCategory::DifferentSubarray).cycles;
  CHECK(s1 > s2);
  CHECK(s2 > s3);
  CHECK(s3 > t.at(DramArch::SALP_MASA, AccessCategory::DifferentBank).cycles);
}

TEST_CASE("table validation rejects malformed entries") {
  CostTable t = CostTable::builtin_default();
  t.at(DramArch::SALP1, AccessCategory::SameRow).cycles = 0;
  CHECK_THROWS_AS(t.validate(), ConfigError);

  t = CostTable::builtin_default();
  t.at(DramArch::SALP2, AccessCategory::DifferentSubarray).cycles = 20;  // < bank
  CHECK_THROWS_AS(t.validate(), ConfigError);

  t = CostTable::builtin_default();
  t.at(DramArch::DDR3, AccessCategory::DifferentSubarray).cycles = 30;  // != row
  CHECK_THROWS_AS(t.validate(), ConfigError);

  t = CostTable::builtin_default();
  t.at(DramArch::SALP1, AccessCategory::DifferentRow).energy_pj = 100.0;
  CHECK_THROWS_AS(t.validate(), ConfigError);

  t = CostTable::builtin_default();
  t.clock_period_ns = 0.0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
}

TEST_CASE("cycle cost is the exact linear combination") {
  const CostTable t = synthetic_table();
  const AccessCounts counts{2032, 14, 1, 1};
  CHECK(tile_cycles(counts, DramArch::SALP1, t) == 2032 + 28 + 4 + 8);
  CHECK(tile_energy(counts, DramArch::SALP1, t) == doctest::Approx(2072.0));
  CHECK(tile_cycles(AccessCounts{}, DramArch::DDR3, t) == 0);
  CHECK(tile_energy(AccessCounts{}, DramArch::DDR3, t) == 0.0);
}

TEST_CASE("a lone activation costs one row conflict") {
  const AccessCounts one_row{0, 0, 0, 1};
  CHECK(tile_cycles(one_row, DramArch::DDR3, CostTable::builtin_default()) == 37);
}

TEST_CASE("energy is linear in the table entries") {
  CostTable t = synthetic_table();
  const AccessCounts counts{5, 3, 2, 1};
  const double base = tile_energy(counts, DramArch::SALP2, t);
  for (int a = 0; a < kNumArchs; ++a)
    for (int c = 0; c < kNumCategories; ++c)
      t.entries[a][c].energy_pj *= 7.0;
  CHECK(tile_energy(counts, DramArch::SALP2, t) == doctest::Approx(7.0 * base));
}
