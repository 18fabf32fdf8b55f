#ifndef QLR_EXPERIMENT_HPP
#define QLR_EXPERIMENT_HPP

#include <string>

#include "qlr/config.hpp"

namespace qlr {

/// Batch front-end: orchestrates the other modules and writes reproducible
/// CSV/JSON outputs into a directory. All commands are deterministic for a
/// fixed config + seed, regardless of the thread count.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg) : cfg_(std::move(cfg)) {}

  const ExperimentConfig& config() const { return cfg_; }
  void set_seed(std::uint64_t seed);
  void set_threads(int threads);

  /// Equivariant densities on fibers 0..fibers-1 plus residual table.
  void run_density(const std::string& out_dir) const;
  /// Mixing-rate diagnostics (mixing.json, traces.csv).
  void run_mixing(const std::string& out_dir) const;
  /// (QR1)-(QR5) verification report (qr.json).
  void run_verify_qr(const std::string& out_dir) const;
  /// Response expansion + convergence report on the configured fiber.
  void run_response(const std::string& out_dir) const;
  /// Taylor-remainder sweep across fibers 0..fibers-1.
  void run_sweep(const std::string& out_dir) const;

 private:
  ExperimentConfig cfg_;
};

}  // namespace qlr

#endif  // QLR_EXPERIMENT_HPP
