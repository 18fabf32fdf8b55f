#ifndef QLR_CONFIG_HPP
#define QLR_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qlr/cocycle.hpp"
#include "qlr/response.hpp"

namespace qlr {

/// Fully deterministic experiment description parsed from JSON. Identical
/// config + seed must yield byte-identical outputs.
struct ExperimentConfig {
  CocycleSpec spec;

  double tol = 1e-10;
  int n_max = 200;
  int n_trunc = -1;
  std::vector<double> eps_grid;
  int fiber_count = 1;
  std::int64_t fiber_index = 0;
  std::uint64_t seed = 1;
  int threads = 1;

  MixingOptions mixing;
  QrOptions qr;

  /// Parse from a JSON document; throws ConfigError on any problem.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
};

}  // namespace qlr

#endif  // QLR_CONFIG_HPP
