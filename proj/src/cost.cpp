#include "drmap/cost.hpp"

namespace drmap {

namespace {

const AccessCategory kCats[] = {
    AccessCategory::SameRow, AccessCategory::DifferentBank,
    AccessCategory::DifferentSubarray, AccessCategory::DifferentRow};

const DramArch kArchs[] = {DramArch::DDR3, DramArch::SALP1, DramArch::SALP2,
                           DramArch::SALP_MASA};

CostTable make_default() {
  // Cycles from JEDEC DDR3-1600 11-11-11: hit = CL + BL/2, bank switch adds
  // tRCD, row conflict adds tRP. A subarray switch costs a full conflict on
  // DDR3; the SALP variants hide progressively more of the precharge under
  // the next activation but stay above the bank-parallel cost.
  CostTable t;
  t.clock_period_ns = 1.25;
  auto set = [&t](DramArch a, std::uint64_t hit_cy, double hit_pj,
                  std::uint64_t bank_cy, double bank_pj, std::uint64_t sub_cy,
                  double sub_pj, std::uint64_t row_cy, double row_pj) {
    t.at(a, AccessCategory::SameRow) = {hit_cy, hit_pj};
    t.at(a, AccessCategory::DifferentBank) = {bank_cy, bank_pj};
    t.at(a, AccessCategory::DifferentSubarray) = {sub_cy, sub_pj};
    t.at(a, AccessCategory::DifferentRow) = {row_cy, row_pj};
  };
  set(DramArch::DDR3, 15, 500, 26, 1500, 37, 2000, 37, 2000);
  set(DramArch::SALP1, 15, 500, 26, 1500, 34, 1900, 37, 2000);
  set(DramArch::SALP2, 15, 500, 26, 1500, 32, 1825, 37, 2000);
  set(DramArch::SALP_MASA, 15, 500, 26, 1500, 30, 1750, 37, 2000);
  return t;
}

}  // namespace

void CostTable::validate() const {
  if (clock_period_ns <= 0.0)
    throw ConfigError("cost table: clock_period_ns must be > 0");
  for (DramArch arch : kArchs) {
    const std::string a = to_string(arch);
    for (AccessCategory cat : kCats) {
      const CategoryCost& c = at(arch, cat);
      if (c.cycles == 0 || c.energy_pj <= 0.0)
        throw ConfigError("cost table: " + a + "/" + to_string(cat) +
                          " entries must be > 0");
    }
    for (std::size_t i = 0; i + 1 < std::size(kCats); ++i) {
      const CategoryCost& lo = at(arch, kCats[i]);
      const CategoryCost& hi = at(arch, kCats[i + 1]);
      if (lo.cycles > hi.cycles || lo.energy_pj > hi.energy_pj)
        throw ConfigError("cost table: " + a + " violates ordering " +
                          to_string(kCats[i]) + " <= " + to_string(kCats[i + 1]));
    }
  }
  if (at(DramArch::DDR3, AccessCategory::DifferentSubarray).cycles !=
      at(DramArch::DDR3, AccessCategory::DifferentRow).cycles)
    throw ConfigError(
        "cost table: ddr3 must price a subarray switch as a row conflict");
}

const CostTable& CostTable::builtin_default() {
  static const CostTable t = [] {
    CostTable v = make_default();
    v.validate();
    return v;
  }();
  return t;
}

std::uint64_t tile_cycles(const AccessCounts& counts, DramArch arch,
                          const CostTable& table) {
  std::uint64_t total = 0;
  for (AccessCategory cat : kCats)
    total += counts.at(cat) * table.at(arch, cat).cycles;
  return total;
}

double tile_energy(const AccessCounts& counts, DramArch arch,
                   const CostTable& table) {
  double total = 0.0;
  for (AccessCategory cat : kCats)
    total += static_cast<double>(counts.at(cat)) * table.at(arch, cat).energy_pj;
  return total;
}

}  // namespace drmap
