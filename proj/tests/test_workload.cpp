#include <map>
#include <random>

#include "doctest.h"
#include "drmap/workload.hpp"

using namespace drmap;

namespace {

ConvLayer alexnet_conv1() {
  return {"conv1", 227, 227, 3, 11, 11, 96, 4, 0, 1};
}

ConvLayer small_layer(int h, int w, int c, int r, int s, int m, int stride,
                      int pad) {
  return {"small", h, w, c, r, s, m, stride, pad, 1};
}

std::uint64_t event_total(const ConvLayer& l, const TileConfig& t,
                          const LoopOrder& o, TransferKind kind) {
  std::uint64_t sum = 0;
  for_each_fetch_event(l, t, o, [&](FetchEvent ev) {
    if (ev.kind == kind) sum += ev.words;
  });
  return sum;
}

}  // namespace

TEST_CASE("alexnet conv1 derives the expected output size") {
  const ConvLayer l = alexnet_conv1();
  l.validate();
  CHECK(l.P() == 55);
  CHECK(l.Q() == 55);
}

TEST_CASE("tile footprints of the conv1 example tile") {
  const ConvLayer l = alexnet_conv1();
  const TileConfig t{8, 8, 32, 3};
  const Footprints fp = tile_footprints(l, t);
  CHECK(fp.ifm_bytes == 39 * 39 * 3);    // Th = Tw = (8-1)*4 + 11 = 39
  CHECK(fp.wgh_bytes == 11 * 11 * 3 * 32);
  CHECK(fp.ofm_bytes == 8 * 8 * 32);
}

TEST_CASE("tile footprints at the extremes") {
  const ConvLayer l = alexnet_conv1();
  const TileConfig full{l.P(), l.Q(), l.M, l.C};
  const Footprints whole = tile_footprints(l, full);
  CHECK(whole.ifm_bytes == std::uint64_t(l.H) * l.W * l.C);
  CHECK(whole.wgh_bytes == std::uint64_t(l.R) * l.S * l.C * l.M);
  CHECK(whole.ofm_bytes == std::uint64_t(l.P()) * l.Q() * l.M);

  const Footprints minimal = tile_footprints(l, {1, 1, 1, 1});
  CHECK(minimal.ifm_bytes == 121);
  CHECK(minimal.wgh_bytes == 121);
  CHECK(minimal.ofm_bytes == 1);
}

TEST_CASE("footprint monotonicity in every tile dimension") {
  std::mt19937_64 rng(11);
  const ConvLayer l = small_layer(16, 14, 9, 3, 2, 10, 2, 1);
  for (int i = 0; i < 200; ++i) {
    const TileConfig t{1 + int(rng() % l.P()), 1 + int(rng() % l.Q()),
                       1 + int(rng() % l.M), 1 + int(rng() % l.C)};
    const Footprints base = tile_footprints(l, t);
    const TileConfig grown[] = {{t.Tp + 1, t.Tq, t.Tm, t.Tc},
                                {t.Tp, t.Tq + 1, t.Tm, t.Tc},
                                {t.Tp, t.Tq, t.Tm + 1, t.Tc},
                                {t.Tp, t.Tq, t.Tm, t.Tc + 1}};
    for (const TileConfig& g : grown) {
      const Footprints fp = tile_footprints(l, g);
      CHECK(fp.ifm_bytes >= base.ifm_bytes);
      CHECK(fp.wgh_bytes >= base.wgh_bytes);
      CHECK(fp.ofm_bytes >= base.ofm_bytes);
    }
  }
}

TEST_CASE("buffer fit comparisons are inclusive") {
  const BufferConfig buffers{};  // 64KB each
  CHECK(fits_buffers({4563, 11616, 2048}, buffers));
  CHECK_FALSE(fits_buffers({70000, 1, 1}, buffers));
  CHECK(fits_buffers({65536, 65536, 65536}, buffers));
  CHECK_FALSE(fits_buffers({65537, 65536, 65536}, buffers));
}

TEST_CASE("tiling enumeration: singleton space") {
  const ConvLayer l = small_layer(1, 1, 1, 1, 1, 1, 1, 0);
  const auto tilings = enumerate_tilings(l, BufferConfig{});
  REQUIRE(tilings.size() == 1);
  CHECK(tilings[0] == TileConfig{1, 1, 1, 1});
}

TEST_CASE("tiling enumeration matches a brute-force divisor filter") {
  const ConvLayer l = alexnet_conv1();
  const BufferConfig buffers{};
  const auto tilings = enumerate_tilings(l, buffers);
  CHECK_FALSE(tilings.empty());

  std::size_t expected = 0;
  for (int tc = 1; tc <= l.C; ++tc) {
    if (l.C % tc) continue;
    for (int tm = 1; tm <= l.M; ++tm) {
      if (l.M % tm) continue;
      for (int tq = 1; tq <= l.Q(); ++tq) {
        if (l.Q() % tq) continue;
        for (int tp = 1; tp <= l.P(); ++tp) {
          if (l.P() % tp) continue;
          if (fits_buffers(tile_footprints(l, {tp, tq, tm, tc}), buffers))
            ++expected;
        }
      }
    }
  }
  CHECK(tilings.size() == expected);
  for (const TileConfig& t : tilings)
    CHECK(fits_buffers(tile_footprints(l, t), buffers));
  // ascending (Tc, Tm, Tq, Tp) lexicographic order
  for (std::size_t i = 1; i < tilings.size(); ++i) {
    const auto key = [](const TileConfig& t) {
      return std::make_tuple(t.Tc, t.Tm, t.Tq, t.Tp);
    };
    CHECK(key(tilings[i - 1]) < key(tilings[i]));
  }
}

TEST_CASE("tiling enumeration modes") {
  const ConvLayer l = small_layer(10, 10, 7, 1, 1, 6, 1, 0);
  const BufferConfig big{1 << 20, 1 << 20, 1 << 20};
  CHECK(enumerate_tilings(l, big, EnumerationMode::exhaustive()).size() ==
        std::size_t(10) * 10 * 7 * 6);
  // step:4 over 10 gives {1, 5, 9, 10}; over 7 {1, 5, 7}; over 6 {1, 5, 6}
  CHECK(enumerate_tilings(l, big, EnumerationMode::stepped(4)).size() ==
        std::size_t(4) * 4 * 3 * 3);

  CHECK(enumerate_tilings(l, {1, 1, 1}).empty());  // nothing fits one byte
  CHECK_THROWS_AS(EnumerationMode::parse("step:x"), ConfigError);
  CHECK(EnumerationMode::parse("step:3").step == 3);
}

TEST_CASE("canonical loop orders of the fixed schemes") {
  const LoopOrder ifms = scheme_to_loop_order(ScheduleScheme::IfmsReuse);
  CHECK(ifms == LoopOrder{TileLoop::InChannel, TileLoop::Spatial,
                          TileLoop::OutChannel});
  const LoopOrder wghs = scheme_to_loop_order(ScheduleScheme::WghsReuse);
  CHECK(wghs == LoopOrder{TileLoop::OutChannel, TileLoop::InChannel,
                          TileLoop::Spatial});
  const LoopOrder ofms = scheme_to_loop_order(ScheduleScheme::OfmsReuse);
  CHECK(ofms == LoopOrder{TileLoop::Spatial, TileLoop::OutChannel,
                          TileLoop::InChannel});
  CHECK_THROWS_AS(scheme_to_loop_order(ScheduleScheme::AdaptiveReuse),
                  std::invalid_argument);
}

TEST_CASE("redundancies under the (s, m, c) order") {
  // n_s = 4, n_m = 3, n_c = 2
  const ConvLayer l = small_layer(2, 2, 2, 1, 1, 3, 1, 0);
  REQUIRE(l.P() == 2);
  const TileConfig t{1, 1, 1, 1};
  const Redundancies red =
      reuse_redundancies(l, t, scheme_to_loop_order(ScheduleScheme::OfmsReuse));
  CHECK(red.ifm == 3);  // m loop re-runs the c loop inside
  CHECK(red.wgh == 4);  // s loop re-runs m and c inside
  CHECK(red.ofm == 1);  // c is inner-most
}

TEST_CASE("redundancies under the (c, s, m) order") {
  const ConvLayer l = small_layer(2, 2, 2, 1, 1, 2, 1, 0);
  const TileConfig t{1, 1, 1, 1};
  const Redundancies red =
      reuse_redundancies(l, t, scheme_to_loop_order(ScheduleScheme::IfmsReuse));
  CHECK(red.ifm == 1);
  CHECK(red.wgh == 4);  // n_s
  CHECK(red.ofm == 2);  // n_c
}

TEST_CASE("loops with a single trip never multiply traffic") {
  const ConvLayer l = small_layer(4, 4, 4, 1, 1, 1, 1, 0);  // M = 1
  const TileConfig t{l.P(), l.Q(), 1, 1};                   // only c iterates
  const Redundancies red =
      reuse_redundancies(l, t, scheme_to_loop_order(ScheduleScheme::IfmsReuse));
  CHECK(red.ifm == 1);
  CHECK(red.wgh == 1);  // the s loop inside c has trip 1
  CHECK(red.ofm == 1);  // m/s never change, the single ofm tile stays resident

  const FetchCounts fc =
      fetch_counts(l, t, scheme_to_loop_order(ScheduleScheme::IfmsReuse));
  CHECK(fc.ofm_write_words == std::uint64_t(l.P()) * l.Q() * l.M);
  CHECK(fc.ofm_read_words == 0);
}

TEST_CASE("the reused data type always has redundancy 1") {
  std::mt19937_64 rng(23);
  const ConvLayer l = small_layer(12, 9, 8, 3, 3, 6, 1, 1);
  for (int i = 0; i < 100; ++i) {
    const TileConfig t{1 + int(rng() % l.P()), 1 + int(rng() % l.Q()),
                       1 + int(rng() % l.M), 1 + int(rng() % l.C)};
    CHECK(reuse_redundancies(l, t, scheme_to_loop_order(ScheduleScheme::IfmsReuse)).ifm == 1);
    CHECK(reuse_redundancies(l, t, scheme_to_loop_order(ScheduleScheme::WghsReuse)).wgh == 1);
    const Redundancies ofm_red =
        reuse_redundancies(l, t, scheme_to_loop_order(ScheduleScheme::OfmsReuse));
    CHECK(ofm_red.ofm == 1);
    CHECK(reuse_redundancies(l, t, scheme_to_loop_order(ScheduleScheme::WghsReuse)).ifm >= 1);
  }
}

TEST_CASE("whole-layer tile: every array fetched exactly once") {
  // pad > 0: the receptive field sticks out of the image and must be clipped
  // back to H x W.
  const ConvLayer l = small_layer(27, 27, 6, 5, 5, 8, 1, 2);
  const TileConfig full{l.P(), l.Q(), l.M, l.C};
  for (ScheduleScheme scheme :
       {ScheduleScheme::IfmsReuse, ScheduleScheme::WghsReuse,
        ScheduleScheme::OfmsReuse}) {
    const FetchCounts fc = fetch_counts(l, full, scheme_to_loop_order(scheme));
    CHECK(fc.ifm_words == std::uint64_t(l.H) * l.W * l.C);
    CHECK(fc.wgh_words == std::uint64_t(l.R) * l.S * l.C * l.M);
    CHECK(fc.ofm_write_words == std::uint64_t(l.P()) * l.Q() * l.M);
    CHECK(fc.ofm_read_words == 0);
    CHECK(fc.tile_fetch.size() == 3);
  }
}

TEST_CASE("closed-form totals equal the event-walk sums") {
  std::mt19937_64 rng(37);
  const ConvLayer layers[] = {small_layer(8, 8, 8, 3, 3, 8, 1, 1),
                              small_layer(7, 5, 3, 2, 2, 4, 2, 0),
                              small_layer(6, 6, 5, 3, 1, 7, 1, 2)};
  const ScheduleScheme schemes[] = {ScheduleScheme::IfmsReuse,
                                    ScheduleScheme::WghsReuse,
                                    ScheduleScheme::OfmsReuse};
  int cases = 0;
  while (cases < 100) {
    const ConvLayer& l = layers[rng() % 3];  // keep walks small
    const TileConfig t{1 + int(rng() % l.P()), 1 + int(rng() % l.Q()),
                       1 + int(rng() % l.M), 1 + int(rng() % l.C)};
    const LoopOrder order = scheme_to_loop_order(schemes[rng() % 3]);
    const FetchCounts fc = fetch_counts(l, t, order);
    CHECK(fc.ifm_words == event_total(l, t, order, TransferKind::Ifm));
    CHECK(fc.wgh_words == event_total(l, t, order, TransferKind::Wgh));
    CHECK(fc.ofm_write_words == event_total(l, t, order, TransferKind::OfmWrite));
    CHECK(fc.ofm_read_words == event_total(l, t, order, TransferKind::OfmRead));
    CHECK(fc.total_words() == total_fetch_words(l, t, order));
    ++cases;
  }
}

TEST_CASE("histogram aggregates exactly the event walk") {
  std::mt19937_64 rng(41);
  const ConvLayer l = small_layer(9, 7, 5, 3, 2, 6, 2, 1);
  for (int i = 0; i < 50; ++i) {
    const TileConfig t{1 + int(rng() % l.P()), 1 + int(rng() % l.Q()),
                       1 + int(rng() % l.M), 1 + int(rng() % l.C)};
    for (ScheduleScheme scheme :
         {ScheduleScheme::IfmsReuse, ScheduleScheme::WghsReuse,
          ScheduleScheme::OfmsReuse}) {
      const LoopOrder order = scheme_to_loop_order(scheme);
      std::map<std::pair<int, std::uint64_t>, std::uint64_t> walked;
      for_each_fetch_event(l, t, order, [&](FetchEvent ev) {
        walked[{int(ev.kind), ev.words}] += 1;
      });
      std::map<std::pair<int, std::uint64_t>, std::uint64_t> closed;
      for (const VolumeBucket& b : fetch_histogram(l, t, order))
        closed[{int(b.kind), b.words}] += b.count;
      CHECK(walked == closed);
    }
  }
}

TEST_CASE("adaptive selection is the word-count argmin with fixed ties") {
  const BufferConfig buffers{};
  const ConvLayer layers[] = {alexnet_conv1(),
                              small_layer(13, 13, 256, 3, 3, 384, 1, 1),
                              small_layer(1, 1, 4096, 1, 1, 1000, 1, 0)};
  for (const ConvLayer& l : layers) {
    const ScheduleScheme fixed[] = {ScheduleScheme::IfmsReuse,
                                    ScheduleScheme::WghsReuse,
                                    ScheduleScheme::OfmsReuse};
    std::uint64_t best_words[3];
    for (int s = 0; s < 3; ++s) {
      best_words[s] = ~0ULL;
      for (const TileConfig& t : enumerate_tilings(l, buffers))
        best_words[s] = std::min(
            best_words[s],
            total_fetch_words(l, t, scheme_to_loop_order(fixed[s])));
    }
    const ScheduleScheme chosen = adaptive_select(l, buffers);
    int expected = 0;
    for (int s = 1; s < 3; ++s)
      if (best_words[s] < best_words[expected]) expected = s;
    CHECK(chosen == fixed[expected]);
  }
}

TEST_CASE("adaptive selection: a fully resident layer ties to ifms-reuse") {
  const ConvLayer l = small_layer(4, 4, 2, 2, 2, 2, 1, 0);
  CHECK(adaptive_select(l, BufferConfig{}) == ScheduleScheme::IfmsReuse);
}

TEST_CASE("adaptive selection surfaces infeasible layers") {
  CHECK_THROWS_AS(adaptive_select(alexnet_conv1(), {1, 1, 1}),
                  InfeasibleLayerError);
}
