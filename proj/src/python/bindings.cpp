#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "drmap/engine.hpp"
#include "drmap/io.hpp"
#include "drmap/oracle.hpp"
#include "drmap/report.hpp"

namespace py = pybind11;
using namespace drmap;

namespace {

std::string counts_repr(const AccessCounts& c) {
  std::ostringstream out;
  out << "AccessCounts(same_row=" << c.n_same_row
      << ", dif_bank=" << c.n_dif_bank << ", dif_subarray=" << c.n_dif_subarray
      << ", dif_row=" << c.n_dif_row << ")";
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_drmap, m) {
  m.doc() = "DRAM data-mapping design-space exploration for CNN layers";

  py::register_exception<CapacityError>(m, "CapacityError");
  py::register_exception<BoundsError>(m, "BoundsError");
  py::register_exception<ConfigError>(m, "ConfigurationError");
  py::register_exception<InfeasibleLayerError>(m, "InfeasibleLayerError");
  py::register_exception<OracleMismatchError>(m, "OracleMismatchError");

  py::enum_<DramArch>(m, "DramArch")
      .value("DDR3", DramArch::DDR3)
      .value("SALP1", DramArch::SALP1)
      .value("SALP2", DramArch::SALP2)
      .value("SALP_MASA", DramArch::SALP_MASA);

  py::enum_<ScheduleScheme>(m, "ScheduleScheme")
      .value("IFMS_REUSE", ScheduleScheme::IfmsReuse)
      .value("WGHS_REUSE", ScheduleScheme::WghsReuse)
      .value("OFMS_REUSE", ScheduleScheme::OfmsReuse)
      .value("ADAPTIVE_REUSE", ScheduleScheme::AdaptiveReuse);

  py::enum_<AccessCategory>(m, "AccessCategory")
      .value("SAME_ROW", AccessCategory::SameRow)
      .value("DIFFERENT_BANK", AccessCategory::DifferentBank)
      .value("DIFFERENT_SUBARRAY", AccessCategory::DifferentSubarray)
      .value("DIFFERENT_ROW", AccessCategory::DifferentRow);

  py::class_<DramGeometry>(m, "DramGeometry")
      .def(py::init([](std::uint64_t channels, std::uint64_t ranks_per_channel,
                       std::uint64_t chips_per_rank, std::uint64_t banks_per_chip,
                       std::uint64_t subarrays_per_bank,
                       std::uint64_t rows_per_subarray,
                       std::uint64_t columns_per_row, std::uint64_t burst_bytes) {
             DramGeometry g{channels, ranks_per_channel, chips_per_rank,
                            banks_per_chip, subarrays_per_bank,
                            rows_per_subarray, columns_per_row, burst_bytes};
             g.validate();
             return g;
           }),
           py::arg("channels") = 1, py::arg("ranks_per_channel") = 1,
           py::arg("chips_per_rank") = 1, py::arg("banks_per_chip") = 8,
           py::arg("subarrays_per_bank") = 8,
           py::arg("rows_per_subarray") = 32768,
           py::arg("columns_per_row") = 128, py::arg("burst_bytes") = 8)
      .def_readonly("channels", &DramGeometry::channels)
      .def_readonly("ranks_per_channel", &DramGeometry::ranks_per_channel)
      .def_readonly("chips_per_rank", &DramGeometry::chips_per_rank)
      .def_readonly("banks_per_chip", &DramGeometry::banks_per_chip)
      .def_readonly("subarrays_per_bank", &DramGeometry::subarrays_per_bank)
      .def_readonly("rows_per_subarray", &DramGeometry::rows_per_subarray)
      .def_readonly("columns_per_row", &DramGeometry::columns_per_row)
      .def_readonly("burst_bytes", &DramGeometry::burst_bytes)
      .def("chip_words", &DramGeometry::chip_words)
      .def("total_words", &DramGeometry::total_words)
      .def("capacity_bytes", &DramGeometry::capacity_bytes);

  py::class_<DramCoord>(m, "DramCoord")
      .def(py::init<>())
      .def_readwrite("channel", &DramCoord::channel)
      .def_readwrite("rank", &DramCoord::rank)
      .def_readwrite("chip", &DramCoord::chip)
      .def_readwrite("bank", &DramCoord::bank)
      .def_readwrite("subarray", &DramCoord::subarray)
      .def_readwrite("row", &DramCoord::row)
      .def_readwrite("column", &DramCoord::column)
      .def(py::self == py::self);

  py::class_<AccessCounts>(m, "AccessCounts")
      .def(py::init<>())
      .def_readonly("same_row", &AccessCounts::n_same_row)
      .def_readonly("dif_bank", &AccessCounts::n_dif_bank)
      .def_readonly("dif_subarray", &AccessCounts::n_dif_subarray)
      .def_readonly("dif_row", &AccessCounts::n_dif_row)
      .def("total", &AccessCounts::total)
      .def(py::self == py::self)
      .def("__repr__", &counts_repr);

  py::class_<MappingPolicy>(m, "MappingPolicy")
      .def_static("table", &MappingPolicy::table, py::arg("id"),
                  py::return_value_policy::reference)
      .def_readonly("id", &MappingPolicy::id)
      .def("name", &MappingPolicy::name);

  m.def(
      "linear_to_coord",
      [](std::uint64_t index, int policy_id, const DramGeometry& geom) {
        return linear_to_coord(index, MappingPolicy::table(policy_id), geom);
      },
      py::arg("index"), py::arg("policy_id"),
      py::arg("geometry") = DramGeometry{});
  m.def(
      "coord_to_linear",
      [](const DramCoord& coord, int policy_id, const DramGeometry& geom) {
        return coord_to_linear(coord, MappingPolicy::table(policy_id), geom);
      },
      py::arg("coord"), py::arg("policy_id"),
      py::arg("geometry") = DramGeometry{});
  m.def(
      "classify_tile_stream",
      [](std::uint64_t tile_words, int policy_id, const DramGeometry& geom) {
        return classify_tile_stream(tile_words, MappingPolicy::table(policy_id),
                                    geom);
      },
      py::arg("tile_words"), py::arg("policy_id"),
      py::arg("geometry") = DramGeometry{});
  m.def(
      "replay_tile",
      [](std::uint64_t tile_words, int policy_id, const DramGeometry& geom) {
        return replay_tile(tile_words, MappingPolicy::table(policy_id), geom)
            .counts;
      },
      py::arg("tile_words"), py::arg("policy_id"),
      py::arg("geometry") = DramGeometry{});

  py::class_<ConvLayer>(m, "ConvLayer")
      .def(py::init([](std::string name, int H, int W, int C, int R, int S,
                       int M, int stride, int pad, int elem_bytes) {
             ConvLayer l{std::move(name), H, W, C, R, S, M, stride, pad,
                         elem_bytes};
             l.validate();
             return l;
           }),
           py::arg("name"), py::arg("H"), py::arg("W"), py::arg("C"),
           py::arg("R"), py::arg("S"), py::arg("M"), py::arg("stride") = 1,
           py::arg("pad") = 0, py::arg("elem_bytes") = 1)
      .def_readonly("name", &ConvLayer::name)
      .def_readonly("H", &ConvLayer::H)
      .def_readonly("W", &ConvLayer::W)
      .def_readonly("C", &ConvLayer::C)
      .def_readonly("R", &ConvLayer::R)
      .def_readonly("S", &ConvLayer::S)
      .def_readonly("M", &ConvLayer::M)
      .def_readonly("stride", &ConvLayer::stride)
      .def_readonly("pad", &ConvLayer::pad)
      .def_readonly("elem_bytes", &ConvLayer::elem_bytes)
      .def_property_readonly("P", &ConvLayer::P)
      .def_property_readonly("Q", &ConvLayer::Q);

  py::class_<TileConfig>(m, "TileConfig")
      .def(py::init<int, int, int, int>(), py::arg("Tp"), py::arg("Tq"),
           py::arg("Tm"), py::arg("Tc"))
      .def_readonly("Tp", &TileConfig::Tp)
      .def_readonly("Tq", &TileConfig::Tq)
      .def_readonly("Tm", &TileConfig::Tm)
      .def_readonly("Tc", &TileConfig::Tc)
      .def(py::self == py::self);

  py::class_<BufferConfig>(m, "BufferConfig")
      .def(py::init<std::uint64_t, std::uint64_t, std::uint64_t>(),
           py::arg("ifm_bytes") = 65536, py::arg("wgh_bytes") = 65536,
           py::arg("ofm_bytes") = 65536)
      .def_readonly("ifm_bytes", &BufferConfig::ifm_bytes)
      .def_readonly("wgh_bytes", &BufferConfig::wgh_bytes)
      .def_readonly("ofm_bytes", &BufferConfig::ofm_bytes);

  m.def("tile_footprints",
        [](const ConvLayer& l, const TileConfig& t) {
          const Footprints fp = tile_footprints(l, t);
          return py::make_tuple(fp.ifm_bytes, fp.wgh_bytes, fp.ofm_bytes);
        },
        py::arg("layer"), py::arg("tile"));
  m.def("fits_buffers",
        [](const ConvLayer& l, const TileConfig& t, const BufferConfig& b) {
          return fits_buffers(tile_footprints(l, t), b);
        },
        py::arg("layer"), py::arg("tile"), py::arg("buffers"));
  m.def(
      "enumerate_tilings",
      [](const ConvLayer& l, const BufferConfig& b, const std::string& mode) {
        return enumerate_tilings(l, b, EnumerationMode::parse(mode));
      },
      py::arg("layer"), py::arg("buffers") = BufferConfig{},
      py::arg("mode") = "divisors");
  m.def(
      "fetch_totals",
      [](const ConvLayer& l, const TileConfig& t, ScheduleScheme scheme) {
        const FetchCounts fc = fetch_counts(l, t, scheme_to_loop_order(scheme));
        py::dict d;
        d["ifm_words"] = fc.ifm_words;
        d["wgh_words"] = fc.wgh_words;
        d["ofm_write_words"] = fc.ofm_write_words;
        d["ofm_read_words"] = fc.ofm_read_words;
        d["total_words"] = fc.total_words();
        d["events"] = fc.tile_fetch.size();
        return d;
      },
      py::arg("layer"), py::arg("tile"), py::arg("scheme"));
  m.def(
      "adaptive_select",
      [](const ConvLayer& l, const BufferConfig& b, const std::string& mode) {
        return adaptive_select(l, b, EnumerationMode::parse(mode));
      },
      py::arg("layer"), py::arg("buffers") = BufferConfig{},
      py::arg("mode") = "divisors");

  py::class_<CostTable>(m, "CostTable")
      .def_static("builtin_default",
                  [] { return CostTable::builtin_default(); })
      .def_static("load", &load_cost_table, py::arg("path"))
      .def_readonly("clock_period_ns", &CostTable::clock_period_ns)
      .def("cycles",
           [](const CostTable& t, DramArch a, AccessCategory c) {
             return t.at(a, c).cycles;
           })
      .def("energy_pj", [](const CostTable& t, DramArch a, AccessCategory c) {
        return t.at(a, c).energy_pj;
      });

  m.def("tile_cycles", &tile_cycles, py::arg("counts"), py::arg("arch"),
        py::arg("table"));
  m.def("tile_energy", &tile_energy, py::arg("counts"), py::arg("arch"),
        py::arg("table"));

  py::class_<CandidateResult>(m, "CandidateResult")
      .def_readonly("layer", &CandidateResult::layer)
      .def_readonly("arch", &CandidateResult::arch)
      .def_readonly("scheme", &CandidateResult::scheme)
      .def_readonly("resolved_scheme", &CandidateResult::resolved_scheme)
      .def_readonly("mapping_id", &CandidateResult::mapping_id)
      .def_readonly("tile", &CandidateResult::tile)
      .def_readonly("counts", &CandidateResult::counts)
      .def_readonly("total_words", &CandidateResult::total_words)
      .def_readonly("cycles", &CandidateResult::cycles)
      .def_readonly("energy_pj", &CandidateResult::energy_pj)
      .def_readonly("latency_ns", &CandidateResult::latency_ns)
      .def_readonly("edp", &CandidateResult::edp);

  m.def(
      "layer_cost",
      [](const ConvLayer& l, const TileConfig& t, ScheduleScheme scheme,
         int policy_id, DramArch arch, const DramGeometry& geom,
         const CostTable& table) {
        CandidateResult r =
            layer_cost(l, t, scheme_to_loop_order(scheme),
                       MappingPolicy::table(policy_id), arch, geom, table);
        r.scheme = scheme;
        r.resolved_scheme = scheme;
        return r;
      },
      py::arg("layer"), py::arg("tile"), py::arg("scheme"),
      py::arg("policy_id"), py::arg("arch"),
      py::arg("geometry") = DramGeometry{},
      py::arg("table") = CostTable::builtin_default());
  m.def(
      "replay_layer",
      [](const ConvLayer& l, const TileConfig& t, ScheduleScheme scheme,
         int policy_id, DramArch arch, const DramGeometry& geom,
         const CostTable& table) {
        return replay_layer(l, t, scheme_to_loop_order(scheme),
                            MappingPolicy::table(policy_id), geom, table, arch);
      },
      py::arg("layer"), py::arg("tile"), py::arg("scheme"),
      py::arg("policy_id"), py::arg("arch"),
      py::arg("geometry") = DramGeometry{},
      py::arg("table") = CostTable::builtin_default());

  py::class_<DseRow>(m, "DseRow")
      .def_readonly("cand", &DseRow::cand)
      .def_readonly("is_best", &DseRow::is_best);

  py::class_<LayerOutcome>(m, "LayerOutcome")
      .def_readonly("layer", &LayerOutcome::layer)
      .def_readonly("adaptive_resolution", &LayerOutcome::adaptive_resolution)
      .def_readonly("rows", &LayerOutcome::rows)
      .def_readonly("best_by_arch", &LayerOutcome::best_by_arch);

  py::class_<DseOutput>(m, "DseOutput")
      .def_readonly("archs", &DseOutput::archs)
      .def_readonly("layers", &DseOutput::layers)
      .def_readonly("network_edp", &DseOutput::network_edp);

  m.def(
      "run_dse",
      [](const std::vector<ConvLayer>& network, const BufferConfig& buffers,
         const DramGeometry& geom, const CostTable& table,
         const std::vector<DramArch>& archs,
         const std::vector<ScheduleScheme>& schemes,
         const std::vector<int>& mappings, const std::string& mode,
         int workers) {
        DseRequest req;
        req.network = network;
        req.buffers = buffers;
        req.geom = geom;
        req.table = table;
        req.archs = archs;
        req.schemes = schemes;
        req.mapping_ids = mappings;
        req.mode = EnumerationMode::parse(mode);
        req.workers = workers;
        return dse(req);
      },
      py::arg("network"), py::arg("buffers") = BufferConfig{},
      py::arg("geometry") = DramGeometry{},
      py::arg("table") = CostTable::builtin_default(),
      py::arg("archs") =
          std::vector<DramArch>{DramArch::DDR3, DramArch::SALP1,
                                DramArch::SALP2, DramArch::SALP_MASA},
      py::arg("schemes") =
          std::vector<ScheduleScheme>{
              ScheduleScheme::IfmsReuse, ScheduleScheme::WghsReuse,
              ScheduleScheme::OfmsReuse, ScheduleScheme::AdaptiveReuse},
      py::arg("mappings") = std::vector<int>{1, 2, 3, 4, 5, 6},
      py::arg("mode") = "divisors", py::arg("workers") = 0);

  m.def("load_network", &load_network, py::arg("path"));
  m.def("load_geometry", &load_geometry, py::arg("path"));

  m.attr("__version__") = "0.1.0";
}
