#ifndef QLR_COCYCLE_HPP
#define QLR_COCYCLE_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlr/dynamics.hpp"
#include "qlr/transfer.hpp"

namespace qlr {

/// Everything needed to instantiate the operator cocycle A_eps over the
/// driver on the truncated basis.
struct CocycleSpec {
  MapFamily family;
  DrivingSystem driver;
  double eps = 0.0;
  int bandwidth = 16;
  SpaceLadder ladder;
  AssemblyOptions assembly;
};

/// Caches fiber matrices A_eps(sigma^i omega0) keyed by orbit index, shared
/// across pullback iterations and response sums.
class FiberMatrixCache {
 public:
  explicit FiberMatrixCache(const CocycleSpec& spec) : spec_(&spec) {}

  const TransferMatrix& operator()(DrivingSystem::State omega);

 private:
  const CocycleSpec* spec_;
  std::map<std::int64_t, TransferMatrix> cache_;
};

/// Single-fiber matrix A_eps(omega).
TransferMatrix fiber_matrix(const CocycleSpec& spec,
                            DrivingSystem::State omega);

/// Ordered product A^{(n)}(omega) = A(sigma^{n-1} omega) ... A(omega).
TransferMatrix cocycle_matrix(const CocycleSpec& spec,
                              DrivingSystem::State omega, int n);

struct DensityStats {
  int iterations = 0;
  double last_delta = 0.0;   // E_1 distance of the final two iterates
  double mass_drift = 0.0;   // max un-renormalized mass drift seen
};

/// Equivariant density at fiber omega as the pullback limit
/// lim_n A^{(n)}(sigma^{-n} omega) 1, renormalized to mass 1 at each step.
/// Stops on the Cauchy criterion in E_1; throws NonMixingError if no Cauchy
/// behaviour within n_max iterations.
SpectralField equivariant_density(const CocycleSpec& spec,
                                  DrivingSystem::State omega, double tol,
                                  int n_max, FiberMatrixCache* cache = nullptr,
                                  DensityStats* stats = nullptr);

/// One row of the serialized norm traces: (n, fiber, probe, norm).
using NormTraceRow = std::array<double, 4>;

struct DiagnosticsReport {
  double C = 0.0;      // fitted constant (QR2/QR3)
  double M = 0.0;      // fitted weak-norm growth rate
  double alpha = 0.0;  // fitted Lasota-Yorke strong rate
  double rho = 1.0;    // fitted mixing rate
  double rho_stderr = 0.0;
  std::string verdict;  // "mixing" or "non-mixing"
  bool is_mixing = false;
  bool alpha_less_than_M = false;
  std::vector<double> level_norms;  // sup ||A_eps(w)||_{L(E_i)} per ladder level
  double qr4_slope = 0.0;           // ||A_eps - A_0||_{L(E_N,E_{N-1})} exponent
  double qr5_slope = 0.0;           // ||A_eps - A_0 - eps Q_1|| exponent
  std::vector<NormTraceRow> traces;
};

/// Default probe suite: pure zero-mass modes plus `random_count` random
/// zero-mass fields normalized to 1 in H^{level}.
std::vector<SpectralField> default_probes(int dim, int K, int level,
                                          int random_count,
                                          std::uint64_t seed);

struct MixingOptions {
  int n_max = 25;
  int fiber_count = 64;
  double nonmixing_threshold = 0.99;
  std::uint64_t seed = 1;
  double floor = 1e-13;  // truncated operators can reach exactly zero
};

/// Fits the uniform mixing rate rho from the decay of
/// max over fibers/probes of ||A^{(n)}(omega) f||_{E_1} on ker xi.
DiagnosticsReport mixing_rate(const CocycleSpec& spec,
                              const std::vector<SpectralField>& probes,
                              const MixingOptions& opt);

struct QrOptions {
  std::vector<double> eps_grid;       // for the QR1 sup; defaults inserted
  std::vector<double> dyadic_eps;     // for QR4/QR5 exponent fits
  int n_max = 12;
  int fiber_count = 8;
  double C_cap = 10.0;
  std::uint64_t seed = 1;
};

/// Empirical verification of (QR1)-(QR5): per-level uniform norms, fitted M
/// and Lasota-Yorke alpha over the probe suite, and the perturbation
/// exponents of the derivative operators.
DiagnosticsReport verify_qr(const CocycleSpec& spec, const QrOptions& opt);

}  // namespace qlr

#endif  // QLR_COCYCLE_HPP
