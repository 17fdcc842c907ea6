#pragma once

#include <string>
#include <vector>

#include "drmap/cost.hpp"
#include "drmap/workload.hpp"

namespace drmap {

// JSON with keys channels, ranks_per_channel, chips_per_rank, banks_per_chip,
// subarrays_per_bank, rows_per_subarray, columns_per_row, burst_bytes.
DramGeometry load_geometry(const std::string& path);

// JSON array of layers: name, H, W, C, R, S, M, stride, pad, elem_bytes.
// P and Q are derived; if present they must match the derivation.
std::vector<ConvLayer> load_network(const std::string& path);

// JSON: clock_period_ns plus per-arch, per-category {cycles, energy_pj}.
// Ordering invariants are enforced; violations raise a named ConfigError.
CostTable load_cost_table(const std::string& path);

}  // namespace drmap
