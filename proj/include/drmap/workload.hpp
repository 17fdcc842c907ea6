#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "drmap/errors.hpp"

namespace drmap {

// One convolutional layer. Fully-connected layers are expressed with
// H = W = P = Q = R = S = 1 and C = input features.
struct ConvLayer {
  std::string name;
  int H = 1, W = 1;   // ifm spatial size
  int C = 1;          // input channels
  int R = 1, S = 1;   // kernel spatial size
  int M = 1;          // output channels
  int stride = 1;
  int pad = 0;
  int elem_bytes = 1;

  int P() const { return (H + 2 * pad - R) / stride + 1; }
  int Q() const { return (W + 2 * pad - S) / stride + 1; }

  void validate() const;
};

// One candidate partitioning: output tile (Tp, Tq, Tm) plus input-channel
// tile Tc. The ifm tile it pulls in is Th x Tw x Tc.
struct TileConfig {
  int Tp = 1, Tq = 1, Tm = 1, Tc = 1;

  int Th(const ConvLayer& l) const { return (Tp - 1) * l.stride + l.R; }
  int Tw(const ConvLayer& l) const { return (Tq - 1) * l.stride + l.S; }

  bool valid_for(const ConvLayer& l) const;
  bool operator==(const TileConfig&) const = default;
};

struct BufferConfig {
  std::uint64_t ifm_bytes = 65536;  // iB
  std::uint64_t wgh_bytes = 65536;  // wB
  std::uint64_t ofm_bytes = 65536;  // oB
};

struct Footprints {
  std::uint64_t ifm_bytes = 0;
  std::uint64_t wgh_bytes = 0;
  std::uint64_t ofm_bytes = 0;
};

enum class ScheduleScheme { IfmsReuse = 0, WghsReuse = 1, OfmsReuse = 2, AdaptiveReuse = 3 };

const char* to_string(ScheduleScheme scheme);
ScheduleScheme scheme_from_string(const std::string& name);

// The three tile loops of the outer nest.
enum class TileLoop { Spatial = 0, OutChannel = 1, InChannel = 2 };  // s, m, c

using LoopOrder = std::array<TileLoop, 3>;  // outer-most first

enum class TransferKind { Ifm = 0, Wgh = 1, OfmRead = 2, OfmWrite = 3 };

const char* to_string(TransferKind kind);

struct FetchEvent {
  TransferKind kind;
  std::uint64_t words;
  bool operator==(const FetchEvent&) const = default;
};

// Fetch events aggregated by word count; the unit the cost model consumes.
struct VolumeBucket {
  TransferKind kind;
  std::uint64_t words;
  std::uint64_t count;
  bool operator==(const VolumeBucket&) const = default;
};

struct FetchCounts {
  std::uint64_t ifm_words = 0;
  std::uint64_t wgh_words = 0;
  std::uint64_t ofm_write_words = 0;
  std::uint64_t ofm_read_words = 0;
  std::vector<FetchEvent> tile_fetch;

  std::uint64_t total_words() const {
    return ifm_words + wgh_words + ofm_write_words + ofm_read_words;
  }
};

struct Redundancies {
  std::uint64_t ifm = 1, wgh = 1, ofm = 1;
};

struct EnumerationMode {
  enum class Kind { Divisors, Exhaustive, Step };
  Kind kind = Kind::Divisors;
  int step = 1;  // for Kind::Step

  static EnumerationMode divisors() { return {}; }
  static EnumerationMode exhaustive() { return {Kind::Exhaustive, 1}; }
  static EnumerationMode stepped(int n);
  static EnumerationMode parse(const std::string& text);
  std::string to_string() const;
};

Footprints tile_footprints(const ConvLayer& layer, const TileConfig& tile);

bool fits_buffers(const Footprints& fp, const BufferConfig& buffers);

// Buffer-feasible tilings in ascending (Tc, Tm, Tq, Tp) lexicographic order.
// Empty result means the layer is infeasible; the DSE raises the error.
std::vector<TileConfig> enumerate_tilings(
    const ConvLayer& layer, const BufferConfig& buffers,
    const EnumerationMode& mode = EnumerationMode::divisors());

// Canonical outer->inner tile-loop order of a fixed scheme. The reused data
// type's loops end up outer-most so its redundancy is 1.
LoopOrder scheme_to_loop_order(ScheduleScheme scheme);

// Full-array re-fetch multiplicity per data type under the loop order: a loop
// outside dep(D) multiplies D's traffic iff some dep(D) loop with a real trip
// count (> 1) runs inside it.
Redundancies reuse_redundancies(const ConvLayer& layer, const TileConfig& tile,
                                const LoopOrder& order);

// Walks the tiled loop nest in order and emits every DRAM transfer event:
// a data type is (re)fetched whenever its tile id differs from the one
// resident in its buffer. Ofm tiles are written back when evicted and read
// back on revisit (partial-sum respill).
void for_each_fetch_event(const ConvLayer& layer, const TileConfig& tile,
                          const LoopOrder& order,
                          const std::function<void(FetchEvent)>& emit);

// Closed-form equivalent of the event walk, aggregated by (kind, words) and
// sorted. This is what the DSE hot path consumes.
std::vector<VolumeBucket> fetch_histogram(const ConvLayer& layer,
                                          const TileConfig& tile,
                                          const LoopOrder& order);

// Totals plus the explicit event list. Quadratic in tile counts; meant for
// oracles and small instances, not the DSE inner loop.
FetchCounts fetch_counts(const ConvLayer& layer, const TileConfig& tile,
                         const LoopOrder& order);

// Word total without materializing events.
std::uint64_t total_fetch_words(const ConvLayer& layer, const TileConfig& tile,
                                const LoopOrder& order);

// Resolves adaptive-reuse for one layer: the fixed scheme whose best feasible
// tiling moves the fewest DRAM words. Ties break Ifms < Wghs < Ofms.
ScheduleScheme adaptive_select(
    const ConvLayer& layer, const BufferConfig& buffers,
    const EnumerationMode& mode = EnumerationMode::divisors());

}  // namespace drmap
