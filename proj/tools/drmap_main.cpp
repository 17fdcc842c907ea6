#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "drmap/frontend.hpp"
#include "drmap/io.hpp"
#include "drmap/oracle.hpp"
#include "drmap/report.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void print_counts(std::ostream& out, const char* label,
                  const drmap::AccessCounts& c) {
  out << label << ": same_row=" << c.n_same_row << " dif_bank=" << c.n_dif_bank
      << " dif_subarray=" << c.n_dif_subarray << " dif_row=" << c.n_dif_row
      << " total=" << c.total() << "\n";
}

int run_verify(int policy_id, std::uint64_t words,
               const std::string& geometry_path, const std::string& trace_path,
               bool state_machine, const std::string& arch_name) {
  using namespace drmap;
  try {
    const DramGeometry geom =
        geometry_path.empty() ? DramGeometry{} : load_geometry(geometry_path);
    const MappingPolicy& policy = MappingPolicy::table(policy_id);

    const AccessCounts model = classify_tile_stream(words, policy, geom);
    const ReplayReport replay =
        replay_tile(words, policy, geom, !trace_path.empty());

    std::cout << "policy " << policy_id << " (" << policy.name() << "), "
              << words << " words\n";
    print_counts(std::cout, "closed-form", model);
    print_counts(std::cout, "trace-replay", replay.counts);

    if (!trace_path.empty()) {
      std::ofstream out(trace_path, std::ios::binary);
      if (!out) throw ConfigError("cannot write trace file: " + trace_path);
      write_trace_csv(out, replay.trace);
      std::cout << "trace written to " << trace_path << "\n";
    }
    if (state_machine) {
      const DramArch arch = arch_from_string(arch_name);
      const ReplayReport sm = replay_state_machine(words, policy, geom, arch);
      print_counts(std::cout, "state-machine", sm.counts);
      std::cout << "hit-on-bank-return: " << sm.hit_on_bank_return << "\n";
    }

    if (model != replay.counts) {
      std::cerr << "error: closed-form counts disagree with trace replay\n";
      return kOracleMismatch;
    }
    std::cout << "counts agree\n";
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DRAM data-mapping design-space exploration for CNN layers"};
  app.require_subcommand(1);

  // explore
  auto* explore = app.add_subcommand(
      "explore", "run the exhaustive mapping/tiling/scheduling exploration");
  std::string network, geometry, costs, out_dir = "drmap_out";
  std::string archs = "ddr3,salp1,salp2,salpmasa";
  std::string schemes = "ifms,wghs,ofms,adaptive";
  std::string mappings = "1,2,3,4,5,6";
  std::string buffers = "65536,65536,65536";
  std::string tiling = "divisors";
  int oracle_check = 32;
  bool log_candidates = false;
  explore->add_option("--network", network, "network JSON file")->required();
  explore->add_option("--arch", archs, "architectures (comma list)");
  explore->add_option("--schemes", schemes, "scheduling schemes (comma list)");
  explore->add_option("--mappings", mappings, "mapping policy ids (comma list)");
  explore->add_option("--buffers", buffers, "iB,wB,oB sizes in bytes");
  explore->add_option("--geometry", geometry, "geometry JSON file");
  explore->add_option("--costs", costs, "cost table JSON file");
  explore->add_option("--tiling", tiling, "divisors | exhaustive | step:N");
  explore->add_option("--out", out_dir, "output directory");
  explore->add_option("--oracle-check", oracle_check,
                      "number of sampled candidates to re-verify (0 = off)");
  explore->add_flag("--log-candidates", log_candidates,
                    "also write every evaluated candidate to candidates.csv");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "replay one tile stream and compare with the closed form");
  int policy_id = 3;
  std::uint64_t words = 0;
  std::string v_geometry, trace_path, v_arch = "ddr3";
  bool state_machine = false;
  verify->add_option("--policy", policy_id, "mapping policy id (1..6)")
      ->required();
  verify->add_option("--words", words, "tile size in words")->required();
  verify->add_option("--geometry", v_geometry, "geometry JSON file");
  verify->add_option("--trace", trace_path, "write the per-access trace CSV");
  verify->add_flag("--state-machine", state_machine,
                   "also run the open-row state-machine diagnostic");
  verify->add_option("--arch", v_arch, "architecture for --state-machine");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(verify))
    return run_verify(policy_id, words, v_geometry, trace_path, state_machine,
                      v_arch);

  try {
    drmap::RunConfig config;
    config.network_path = network;
    config.geometry_path = geometry;
    config.costs_path = costs;
    config.out_dir = out_dir;
    config.oracle_check = oracle_check;
    config.log_candidates = log_candidates;
    config.mode = drmap::EnumerationMode::parse(tiling);

    config.archs.clear();
    for (const std::string& a : split_list(archs))
      config.archs.push_back(drmap::arch_from_string(a));
    config.schemes.clear();
    for (const std::string& s : split_list(schemes))
      config.schemes.push_back(drmap::scheme_from_string(s));
    config.mappings.clear();
    for (const std::string& m : split_list(mappings))
      config.mappings.push_back(std::stoi(m));

    const std::vector<std::string> buf = split_list(buffers);
    if (buf.size() != 3)
      throw drmap::ConfigError("--buffers expects three sizes: iB,wB,oB");
    config.buffers = {std::stoull(buf[0]), std::stoull(buf[1]),
                      std::stoull(buf[2])};

    return drmap::run(config, std::cout, std::cerr);
  } catch (const drmap::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return drmap::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return drmap::kConfigError;
  }
}
