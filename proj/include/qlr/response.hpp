#ifndef QLR_RESPONSE_HPP
#define QLR_RESPONSE_HPP

#include <optional>

#include "qlr/cocycle.hpp"

namespace qlr {

struct ResponseOptions {
  double tol = 1e-10;   // density solver tolerance (E_1 Cauchy criterion)
  int n_max = 200;      // pullback iteration cap
  int n_trunc = -1;     // Neumann truncation depth; -1 picks the smallest n
                        // with rho^n/(1-rho) < 1e-12, capped at 200
  double rho = -1.0;    // mixing rate; -1 fits it from the default probes
  double nonmixing_threshold = 0.99;
  std::uint64_t seed = 1;
};

/// v_0, v_0^(1) and optionally v_0^(2) on one fiber, with geometric tail
/// diagnostics for the truncated Neumann sums.
struct ResponseExpansion {
  std::int64_t fiber_index = 0;
  SpectralField v0;
  SpectralField v1;
  std::optional<SpectralField> v2;
  int n_trunc = 0;
  double rho = 0.0;
  double tail_v1 = 0.0;  // rho^{n_trunc+1}/(1-rho) * max ||Q_1 v_0||
  double tail_v2 = 0.0;
};

/// First-order quenched response at eps = 0 on fiber omega:
///   v_0^(1)(omega) = sum_{n>=0} A_0^{(n)}(s^{-n} w) Q_1(s^{-n-1} w) v_0(s^{-n-1} w),
/// evaluated as a forward recursion along the backward orbit. Throws
/// NonMixingError when the fitted rho exceeds the threshold.
ResponseExpansion linear_response(const CocycleSpec& spec,
                                  DrivingSystem::State omega,
                                  const ResponseOptions& opt = {});

/// Adds the second-order term
///   v_0^(2) = S_ker[Q_2 v_0] + S_ker[Q_1 S_ker[Q_1 v_0]]
/// (family order >= 2 required).
ResponseExpansion quadratic_response(const CocycleSpec& spec,
                                     DrivingSystem::State omega,
                                     const ResponseOptions& opt = {});

struct FdOracleResult {
  SpectralField field;
  double discretization_error;  // O(eps^2) component estimate
  double solver_error;          // O(tol / eps^j) component
};

/// Central-difference oracle for v_0^(j), j in {1,2}, built only from
/// equivariant densities at +-eps; independent of the Neumann path.
FdOracleResult fd_oracle(const CocycleSpec& spec, DrivingSystem::State omega,
                         double eps, int order,
                         const ResponseOptions& opt = {});

struct ConvergenceReport {
  std::vector<double> eps_grid;
  // remainders[j-1][i] = ||v_eps - sum_{k<j} eps^k v_k||_{E_0} at eps_grid[i]
  std::vector<std::vector<double>> remainders;
  std::vector<double> slopes;         // per order j = 1, 2, 3
  std::vector<double> slope_stderrs;
  std::vector<bool> saturated;        // remainder at solver tolerance
  double eta_lo = 0.0, eta_hi = 0.0;  // admissible eta interval from QR fits
};

/// Taylor-remainder sweep on one fiber over a positive eps grid, for
/// orders j in {1, 2, 3}.
ConvergenceReport epsilon_sweep(const CocycleSpec& spec,
                                DrivingSystem::State omega,
                                const std::vector<double>& eps_grid,
                                const ResponseOptions& opt = {},
                                const DiagnosticsReport* qr = nullptr);

}  // namespace qlr

#endif  // QLR_RESPONSE_HPP
