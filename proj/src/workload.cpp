#include "drmap/workload.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace drmap {

namespace {

std::uint64_t u64(int v) { return static_cast<std::uint64_t>(v); }

int ceil_div(int a, int b) { return (a + b - 1) / b; }

// Tile counts along each loop.
struct Trips {
  int n_p, n_q, n_m, n_c;
  int n_s() const { return n_p * n_q; }
  int of(TileLoop loop) const {
    switch (loop) {
      case TileLoop::Spatial: return n_s();
      case TileLoop::OutChannel: return n_m;
      case TileLoop::InChannel: return n_c;
    }
    return 1;
  }
};

Trips trips_of(const ConvLayer& l, const TileConfig& t) {
  return {ceil_div(l.P(), t.Tp), ceil_div(l.Q(), t.Tq), ceil_div(l.M, t.Tm),
          ceil_div(l.C, t.Tc)};
}

bool depends_on(TransferKind kind, TileLoop loop) {
  switch (kind) {
    case TransferKind::Ifm:
      return loop == TileLoop::InChannel || loop == TileLoop::Spatial;
    case TransferKind::Wgh:
      return loop == TileLoop::OutChannel || loop == TileLoop::InChannel;
    default:  // ofm read/write
      return loop == TileLoop::OutChannel || loop == TileLoop::Spatial;
  }
}

// Clamped tile extent at tile index i along a dimension of size `dim`.
int clamped(int dim, int tile, int i) { return std::min(tile, dim - i * tile); }

// Ifm rows (or columns) actually read for the spatial tile at index ip:
// receptive field of the clamped output tile, clipped to the image. Padding
// contributes no DRAM traffic.
int clipped_extent(int dim, int tile, int i, int stride, int kernel, int pad) {
  const int out_dim = (dim + 2 * pad - kernel) / stride + 1;
  const int out = clamped(out_dim, tile, i);
  const int start = i * tile * stride - pad;
  const int len = (out - 1) * stride + kernel;
  const int lo = std::max(start, 0);
  const int hi = std::min(start + len - 1, dim - 1);
  return std::max(hi - lo + 1, 0);
}

int clipped_h(const ConvLayer& l, const TileConfig& t, int ip) {
  return clipped_extent(l.H, t.Tp, ip, l.stride, l.R, l.pad);
}

int clipped_w(const ConvLayer& l, const TileConfig& t, int iq) {
  return clipped_extent(l.W, t.Tq, iq, l.stride, l.S, l.pad);
}

std::uint64_t ifm_tile_words(const ConvLayer& l, const TileConfig& t, int ip,
                             int iq, int ic) {
  return u64(clipped_h(l, t, ip)) * u64(clipped_w(l, t, iq)) *
         u64(clamped(l.C, t.Tc, ic));
}

std::uint64_t wgh_tile_words(const ConvLayer& l, const TileConfig& t, int im,
                             int ic) {
  return u64(l.R) * u64(l.S) * u64(clamped(l.M, t.Tm, im)) *
         u64(clamped(l.C, t.Tc, ic));
}

std::uint64_t ofm_tile_words(const ConvLayer& l, const TileConfig& t, int ip,
                             int iq, int im) {
  return u64(clamped(l.P(), t.Tp, ip)) * u64(clamped(l.Q(), t.Tq, iq)) *
         u64(clamped(l.M, t.Tm, im));
}

// Sum of clipped ifm tile volumes over one full pass of all (ip, iq, ic).
std::uint64_t ifm_pass_words(const ConvLayer& l, const TileConfig& t) {
  const Trips n = trips_of(l, t);
  std::uint64_t h_sum = 0, w_sum = 0;
  for (int ip = 0; ip < n.n_p; ++ip) h_sum += u64(clipped_h(l, t, ip));
  for (int iq = 0; iq < n.n_q; ++iq) w_sum += u64(clipped_w(l, t, iq));
  return h_sum * w_sum * u64(l.C);
}

// Candidate values for one tile dimension under the enumeration mode,
// ascending.
std::vector<int> dimension_candidates(int dim, const EnumerationMode& mode) {
  std::vector<int> vals;
  switch (mode.kind) {
    case EnumerationMode::Kind::Divisors:
      for (int v = 1; v <= dim; ++v)
        if (dim % v == 0) vals.push_back(v);
      break;
    case EnumerationMode::Kind::Exhaustive:
      vals.resize(static_cast<std::size_t>(dim));
      std::iota(vals.begin(), vals.end(), 1);
      break;
    case EnumerationMode::Kind::Step:
      for (int v = 1; v <= dim; v += mode.step) vals.push_back(v);
      if (vals.back() != dim) vals.push_back(dim);
      break;
  }
  return vals;
}

}  // namespace

void ConvLayer::validate() const {
  auto check = [this](int v, const char* what) {
    if (v < 1)
      throw ConfigError("layer '" + name + "': " + what + " must be >= 1");
  };
  check(H, "H");
  check(W, "W");
  check(C, "C");
  check(R, "R");
  check(S, "S");
  check(M, "M");
  check(stride, "stride");
  check(elem_bytes, "elem_bytes");
  if (pad < 0) throw ConfigError("layer '" + name + "': pad must be >= 0");
  if (R > H + 2 * pad || S > W + 2 * pad)
    throw ConfigError("layer '" + name + "': kernel exceeds padded input");
  check(P(), "derived P");
  check(Q(), "derived Q");
}

bool TileConfig::valid_for(const ConvLayer& l) const {
  return Tp >= 1 && Tp <= l.P() && Tq >= 1 && Tq <= l.Q() && Tm >= 1 &&
         Tm <= l.M && Tc >= 1 && Tc <= l.C;
}

const char* to_string(ScheduleScheme scheme) {
  switch (scheme) {
    case ScheduleScheme::IfmsReuse: return "ifms";
    case ScheduleScheme::WghsReuse: return "wghs";
    case ScheduleScheme::OfmsReuse: return "ofms";
    case ScheduleScheme::AdaptiveReuse: return "adaptive";
  }
  return "?";
}

ScheduleScheme scheme_from_string(const std::string& name) {
  if (name == "ifms") return ScheduleScheme::IfmsReuse;
  if (name == "wghs") return ScheduleScheme::WghsReuse;
  if (name == "ofms") return ScheduleScheme::OfmsReuse;
  if (name == "adaptive") return ScheduleScheme::AdaptiveReuse;
  throw ConfigError("unknown scheduling scheme '" + name +
                    "' (expected ifms, wghs, ofms or adaptive)");
}

const char* to_string(TransferKind kind) {
  switch (kind) {
    case TransferKind::Ifm: return "ifm";
    case TransferKind::Wgh: return "wgh";
    case TransferKind::OfmRead: return "ofm_read";
    case TransferKind::OfmWrite: return "ofm_write";
  }
  return "?";
}

EnumerationMode EnumerationMode::stepped(int n) {
  if (n < 1) throw ConfigError("tiling step must be >= 1");
  return {Kind::Step, n};
}

EnumerationMode EnumerationMode::parse(const std::string& text) {
  if (text == "divisors") return divisors();
  if (text == "exhaustive") return exhaustive();
  if (text.rfind("step:", 0) == 0) {
    try {
      return stepped(std::stoi(text.substr(5)));
    } catch (const std::logic_error&) {
      throw ConfigError("bad tiling step in '" + text + "'");
    }
  }
  throw ConfigError("unknown tiling mode '" + text +
                    "' (expected divisors, exhaustive or step:N)");
}

std::string EnumerationMode::to_string() const {
  switch (kind) {
    case Kind::Divisors: return "divisors";
    case Kind::Exhaustive: return "exhaustive";
    case Kind::Step: return "step:" + std::to_string(step);
  }
  return "?";
}

Footprints tile_footprints(const ConvLayer& l, const TileConfig& t) {
  const std::uint64_t e = u64(l.elem_bytes);
  return {u64(t.Th(l)) * u64(t.Tw(l)) * u64(t.Tc) * e,
          u64(l.R) * u64(l.S) * u64(t.Tc) * u64(t.Tm) * e,
          u64(t.Tp) * u64(t.Tq) * u64(t.Tm) * e};
}

bool fits_buffers(const Footprints& fp, const BufferConfig& buffers) {
  return fp.ifm_bytes <= buffers.ifm_bytes && fp.wgh_bytes <= buffers.wgh_bytes &&
         fp.ofm_bytes <= buffers.ofm_bytes;
}

std::vector<TileConfig> enumerate_tilings(const ConvLayer& layer,
                                          const BufferConfig& buffers,
                                          const EnumerationMode& mode) {
  const std::vector<int> tcs = dimension_candidates(layer.C, mode);
  const std::vector<int> tms = dimension_candidates(layer.M, mode);
  const std::vector<int> tqs = dimension_candidates(layer.Q(), mode);
  const std::vector<int> tps = dimension_candidates(layer.P(), mode);

  std::vector<TileConfig> out;
  for (int tc : tcs)
    for (int tm : tms)
      for (int tq : tqs)
        for (int tp : tps) {
          const TileConfig tile{tp, tq, tm, tc};
          if (fits_buffers(tile_footprints(layer, tile), buffers))
            out.push_back(tile);
        }
  return out;
}

LoopOrder scheme_to_loop_order(ScheduleScheme scheme) {
  switch (scheme) {
    case ScheduleScheme::IfmsReuse:
      return {TileLoop::InChannel, TileLoop::Spatial, TileLoop::OutChannel};
    case ScheduleScheme::WghsReuse:
      return {TileLoop::OutChannel, TileLoop::InChannel, TileLoop::Spatial};
    case ScheduleScheme::OfmsReuse:
      return {TileLoop::Spatial, TileLoop::OutChannel, TileLoop::InChannel};
    case ScheduleScheme::AdaptiveReuse:
      break;
  }
  throw std::invalid_argument(
      "adaptive-reuse must be resolved to a fixed scheme first");
}

Redundancies reuse_redundancies(const ConvLayer& layer, const TileConfig& tile,
                                const LoopOrder& order) {
  const Trips n = trips_of(layer, tile);
  auto redundancy = [&](TransferKind kind) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (depends_on(kind, order[i])) continue;
      bool inner_dep_iterates = false;
      for (std::size_t j = i + 1; j < order.size(); ++j)
        if (depends_on(kind, order[j]) && n.of(order[j]) > 1)
          inner_dep_iterates = true;
      if (inner_dep_iterates) r *= u64(n.of(order[i]));
    }
    return r;
  };
  return {redundancy(TransferKind::Ifm), redundancy(TransferKind::Wgh),
          redundancy(TransferKind::OfmWrite)};
}

void for_each_fetch_event(const ConvLayer& layer, const TileConfig& tile,
                          const LoopOrder& order,
                          const std::function<void(FetchEvent)>& emit) {
  const Trips n = trips_of(layer, tile);

  int idx[3] = {0, 0, 0};  // current index per loop position
  auto loop_index = [&](TileLoop loop) {
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i] == loop) return idx[i];
    return 0;
  };

  long ifm_resident = -1, wgh_resident = -1, ofm_resident = -1;
  std::vector<bool> ofm_visited(u64(n.n_s()) * u64(n.n_m), false);

  auto ofm_words_of = [&](long id) {
    const int im = static_cast<int>(id / n.n_s());
    const int s = static_cast<int>(id % n.n_s());
    return ofm_tile_words(layer, tile, s / n.n_q, s % n.n_q, im);
  };

  const std::uint64_t total = u64(n.of(order[0])) * u64(n.of(order[1])) *
                              u64(n.of(order[2]));
  for (std::uint64_t step = 0; step < total; ++step) {
    const int s = loop_index(TileLoop::Spatial);
    const int im = loop_index(TileLoop::OutChannel);
    const int ic = loop_index(TileLoop::InChannel);
    const int ip = s / n.n_q, iq = s % n.n_q;

    const long ofm_id = static_cast<long>(im) * n.n_s() + s;
    if (ofm_id != ofm_resident) {
      if (ofm_resident >= 0)
        emit({TransferKind::OfmWrite, ofm_words_of(ofm_resident)});
      if (ofm_visited[static_cast<std::size_t>(ofm_id)])
        emit({TransferKind::OfmRead, ofm_words_of(ofm_id)});
      ofm_visited[static_cast<std::size_t>(ofm_id)] = true;
      ofm_resident = ofm_id;
    }

    const long ifm_id = static_cast<long>(ic) * n.n_s() + s;
    if (ifm_id != ifm_resident) {
      const std::uint64_t words = ifm_tile_words(layer, tile, ip, iq, ic);
      if (words > 0) emit({TransferKind::Ifm, words});
      ifm_resident = ifm_id;
    }

    const long wgh_id = static_cast<long>(im) * n.n_c + ic;
    if (wgh_id != wgh_resident) {
      emit({TransferKind::Wgh, wgh_tile_words(layer, tile, im, ic)});
      wgh_resident = wgh_id;
    }

    for (int i = 2; i >= 0; --i) {
      if (++idx[i] < n.of(order[static_cast<std::size_t>(i)])) break;
      idx[i] = 0;
    }
  }
  if (ofm_resident >= 0)
    emit({TransferKind::OfmWrite, ofm_words_of(ofm_resident)});
}

std::vector<VolumeBucket> fetch_histogram(const ConvLayer& layer,
                                          const TileConfig& tile,
                                          const LoopOrder& order) {
  const Trips n = trips_of(layer, tile);
  const Redundancies red = reuse_redundancies(layer, tile, order);

  // Multiplicity of each distinct extent along one dimension.
  auto value_counts = [](int count, auto&& value_of) {
    std::map<std::uint64_t, std::uint64_t> m;
    for (int i = 0; i < count; ++i) m[u64(value_of(i))] += 1;
    return m;
  };

  const auto h_vals = value_counts(n.n_p, [&](int ip) { return clipped_h(layer, tile, ip); });
  const auto w_vals = value_counts(n.n_q, [&](int iq) { return clipped_w(layer, tile, iq); });
  const auto tp_vals = value_counts(n.n_p, [&](int ip) { return clamped(layer.P(), tile.Tp, ip); });
  const auto tq_vals = value_counts(n.n_q, [&](int iq) { return clamped(layer.Q(), tile.Tq, iq); });
  const auto tm_vals = value_counts(n.n_m, [&](int im) { return clamped(layer.M, tile.Tm, im); });
  const auto tc_vals = value_counts(n.n_c, [&](int ic) { return clamped(layer.C, tile.Tc, ic); });

  std::map<std::pair<int, std::uint64_t>, std::uint64_t> hist;
  auto add = [&hist](TransferKind kind, std::uint64_t words,
                     std::uint64_t count) {
    if (words > 0 && count > 0)
      hist[{static_cast<int>(kind), words}] += count;
  };

  for (const auto& [h, ch] : h_vals)
    for (const auto& [w, cw] : w_vals)
      for (const auto& [tc, cc] : tc_vals)
        add(TransferKind::Ifm, h * w * tc, ch * cw * cc * red.ifm);

  for (const auto& [tm, cm] : tm_vals)
    for (const auto& [tc, cc] : tc_vals)
      add(TransferKind::Wgh, u64(layer.R) * u64(layer.S) * tm * tc,
          cm * cc * red.wgh);

  for (const auto& [tp, cp] : tp_vals)
    for (const auto& [tq, cq] : tq_vals)
      for (const auto& [tm, cm] : tm_vals) {
        const std::uint64_t words = tp * tq * tm;
        const std::uint64_t tiles = cp * cq * cm;
        add(TransferKind::OfmWrite, words, tiles * red.ofm);
        add(TransferKind::OfmRead, words, tiles * (red.ofm - 1));
      }

  std::vector<VolumeBucket> out;
  out.reserve(hist.size());
  for (const auto& [key, count] : hist)
    out.push_back({static_cast<TransferKind>(key.first), key.second, count});
  return out;
}

FetchCounts fetch_counts(const ConvLayer& layer, const TileConfig& tile,
                         const LoopOrder& order) {
  const Redundancies red = reuse_redundancies(layer, tile, order);
  const std::uint64_t wgh_pass = u64(layer.R) * u64(layer.S) * u64(layer.C) * u64(layer.M);
  const std::uint64_t ofm_pass = u64(layer.P()) * u64(layer.Q()) * u64(layer.M);

  FetchCounts fc;
  fc.ifm_words = red.ifm * ifm_pass_words(layer, tile);
  fc.wgh_words = red.wgh * wgh_pass;
  fc.ofm_write_words = red.ofm * ofm_pass;
  fc.ofm_read_words = (red.ofm - 1) * ofm_pass;
  for_each_fetch_event(layer, tile, order,
                       [&fc](FetchEvent ev) { fc.tile_fetch.push_back(ev); });
  return fc;
}

std::uint64_t total_fetch_words(const ConvLayer& layer, const TileConfig& tile,
                                const LoopOrder& order) {
  const Redundancies red = reuse_redundancies(layer, tile, order);
  const std::uint64_t wgh_pass = u64(layer.R) * u64(layer.S) * u64(layer.C) * u64(layer.M);
  const std::uint64_t ofm_pass = u64(layer.P()) * u64(layer.Q()) * u64(layer.M);
  return red.ifm * ifm_pass_words(layer, tile) + red.wgh * wgh_pass +
         (2 * red.ofm - 1) * ofm_pass;
}

ScheduleScheme adaptive_select(const ConvLayer& layer,
                               const BufferConfig& buffers,
                               const EnumerationMode& mode) {
  const std::vector<TileConfig> tilings = enumerate_tilings(layer, buffers, mode);
  if (tilings.empty()) throw InfeasibleLayerError(layer.name);

  const ScheduleScheme fixed[] = {ScheduleScheme::IfmsReuse,
                                  ScheduleScheme::WghsReuse,
                                  ScheduleScheme::OfmsReuse};
  ScheduleScheme best = fixed[0];
  std::uint64_t best_words = ~0ULL;
  for (ScheduleScheme scheme : fixed) {
    const LoopOrder order = scheme_to_loop_order(scheme);
    std::uint64_t words = ~0ULL;
    for (const TileConfig& tile : tilings)
      words = std::min(words, total_fetch_words(layer, tile, order));
    if (words < best_words) {
      best_words = words;
      best = scheme;
    }
  }
  return best;
}

}  // namespace drmap
