#include "drmap/io.hpp"

#include <fstream>

#include "json.hpp"

namespace drmap {

namespace {

using nlohmann::json;

json parse_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(std::string(what) + " file not readable: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + " file " + path +
                      " is not valid JSON: " + e.what());
  }
}

std::uint64_t require_positive(const json& j, const char* key,
                               const std::string& where) {
  if (!j.contains(key))
    throw ConfigError(where + ": missing key '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
    throw ConfigError(where + ": key '" + key + "' must be a positive integer");
  return v.get<std::uint64_t>();
}

int require_int(const json& j, const char* key, int min,
                const std::string& where) {
  if (!j.contains(key))
    throw ConfigError(where + ": missing key '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < min)
    throw ConfigError(where + ": key '" + key + "' must be an integer >= " +
                      std::to_string(min));
  return v.get<int>();
}

}  // namespace

DramGeometry load_geometry(const std::string& path) {
  const json j = parse_file(path, "geometry");
  const std::string where = "geometry " + path;
  DramGeometry g;
  g.channels = require_positive(j, "channels", where);
  g.ranks_per_channel = require_positive(j, "ranks_per_channel", where);
  g.chips_per_rank = require_positive(j, "chips_per_rank", where);
  g.banks_per_chip = require_positive(j, "banks_per_chip", where);
  g.subarrays_per_bank = require_positive(j, "subarrays_per_bank", where);
  g.rows_per_subarray = require_positive(j, "rows_per_subarray", where);
  g.columns_per_row = require_positive(j, "columns_per_row", where);
  g.burst_bytes = require_positive(j, "burst_bytes", where);
  g.validate();
  return g;
}

std::vector<ConvLayer> load_network(const std::string& path) {
  const json j = parse_file(path, "network");
  if (!j.is_array() || j.empty())
    throw ConfigError("network " + path + ": expected a non-empty layer array");

  std::vector<ConvLayer> layers;
  for (const json& item : j) {
    if (!item.contains("name") || !item.at("name").is_string())
      throw ConfigError("network " + path + ": every layer needs a name");
    ConvLayer l;
    l.name = item.at("name").get<std::string>();
    const std::string where = "network layer '" + l.name + "'";
    l.H = require_int(item, "H", 1, where);
    l.W = require_int(item, "W", 1, where);
    l.C = require_int(item, "C", 1, where);
    l.R = require_int(item, "R", 1, where);
    l.S = require_int(item, "S", 1, where);
    l.M = require_int(item, "M", 1, where);
    l.stride = require_int(item, "stride", 1, where);
    l.pad = require_int(item, "pad", 0, where);
    l.elem_bytes = item.contains("elem_bytes")
                       ? require_int(item, "elem_bytes", 1, where)
                       : 1;
    l.validate();
    if (item.contains("P") && item.at("P").get<int>() != l.P())
      throw ConfigError(where + ": stated P " +
                        item.at("P").dump() + " but derived P = " +
                        std::to_string(l.P()));
    if (item.contains("Q") && item.at("Q").get<int>() != l.Q())
      throw ConfigError(where + ": stated Q " +
                        item.at("Q").dump() + " but derived Q = " +
                        std::to_string(l.Q()));
    layers.push_back(std::move(l));
  }
  return layers;
}

CostTable load_cost_table(const std::string& path) {
  const json j = parse_file(path, "cost table");
  const std::string where = "cost table " + path;
  if (!j.contains("clock_period_ns") || !j.at("clock_period_ns").is_number())
    throw ConfigError(where + ": missing numeric clock_period_ns");
  if (!j.contains("archs") || !j.at("archs").is_object())
    throw ConfigError(where + ": missing archs object");

  CostTable t;
  t.clock_period_ns = j.at("clock_period_ns").get<double>();
  const DramArch archs[] = {DramArch::DDR3, DramArch::SALP1, DramArch::SALP2,
                            DramArch::SALP_MASA};
  const AccessCategory cats[] = {
      AccessCategory::SameRow, AccessCategory::DifferentBank,
      AccessCategory::DifferentSubarray, AccessCategory::DifferentRow};
  for (DramArch arch : archs) {
    const char* aname = to_string(arch);
    if (!j.at("archs").contains(aname))
      throw ConfigError(where + ": missing architecture '" + aname + "'");
    const json& aj = j.at("archs").at(aname);
    for (AccessCategory cat : cats) {
      const char* cname = to_string(cat);
      if (!aj.contains(cname) || !aj.at(cname).is_object())
        throw ConfigError(where + ": missing entry " + std::string(aname) +
                          "/" + cname);
      const json& cj = aj.at(cname);
      if (!cj.contains("cycles") || !cj.at("cycles").is_number_integer() ||
          !cj.contains("energy_pj") || !cj.at("energy_pj").is_number())
        throw ConfigError(where + ": entry " + std::string(aname) + "/" +
                          cname + " needs integer cycles and numeric energy_pj");
      if (cj.at("cycles").get<std::int64_t>() < 1)
        throw ConfigError(where + ": entry " + std::string(aname) + "/" +
                          cname + " cycles must be >= 1");
      t.at(arch, cat) = {cj.at("cycles").get<std::uint64_t>(),
                         cj.at("energy_pj").get<double>()};
    }
  }
  t.validate();
  return t;
}

}  // namespace drmap
