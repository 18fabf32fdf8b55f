#include "qlr/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlr/fit.hpp"

namespace qlr {

namespace {

int strong_level(const CocycleSpec& spec) {
  return spec.ladder.base_m + std::min(1, spec.ladder.depth);
}

}  // namespace

const TransferMatrix& FiberMatrixCache::operator()(DrivingSystem::State omega) {
  auto it = cache_.find(omega.index);
  if (it == cache_.end())
    it = cache_.emplace(omega.index, fiber_matrix(*spec_, omega)).first;
  return it->second;
}

TransferMatrix fiber_matrix(const CocycleSpec& spec,
                            DrivingSystem::State omega) {
  const CircleMap base = spec.family.base_map(spec.eps, omega, spec.driver);
  if (spec.family.dim() == 1)
    return assemble(base, spec.bandwidth, spec.assembly);
  const TrigPoly tau = spec.family.tau(spec.eps, omega, spec.driver);
  return assemble_u1(base, tau, spec.bandwidth, spec.assembly);
}

TransferMatrix cocycle_matrix(const CocycleSpec& spec,
                              DrivingSystem::State omega, int n) {
  if (n < 1) throw Error("cocycle_matrix: n must be >= 1");
  TransferMatrix prod = fiber_matrix(spec, omega);
  for (int i = 1; i < n; ++i) {
    const TransferMatrix next =
        fiber_matrix(spec, spec.driver.advance(omega, i));
    prod.M = next.M * prod.M;
  }
  return prod;
}

SpectralField equivariant_density(const CocycleSpec& spec,
                                  DrivingSystem::State omega, double tol,
                                  int n_max, FiberMatrixCache* cache,
                                  DensityStats* stats) {
  if (tol <= 0) throw Error("equivariant_density: tol must be positive");
  FiberMatrixCache local(spec);
  FiberMatrixCache& mats = cache ? *cache : local;
  const int level = strong_level(spec);

  SpectralField prev =
      SpectralField::constant(spec.family.dim(), spec.bandwidth, 1.0);
  double mass_drift = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    // v_n = A^{(n)}(sigma^{-n} omega) 1, renormalized to mass 1 at each step.
    SpectralField v =
        SpectralField::constant(spec.family.dim(), spec.bandwidth, 1.0);
    for (int i = n; i >= 1; --i) {
      v = mats(spec.driver.advance(omega, -i)).apply(v);
      const Complex m = v.mass();
      mass_drift = std::max(mass_drift, std::abs(m - Complex(1, 0)));
      if (std::abs(m) < 1e-300)
        throw NonMixingError("equivariant_density: pullback mass collapsed");
      v *= Complex(1, 0) / m;
    }
    const double delta = sobolev_norm(v - prev, level);
    if (delta < tol) {
      if (stats) {
        stats->iterations = n;
        stats->last_delta = delta;
        stats->mass_drift = mass_drift;
      }
      return v;
    }
    prev = v;
  }
  throw NonMixingError(
      "equivariant_density: no Cauchy behaviour within n_max = " +
      std::to_string(n_max) + " iterations");
}

std::vector<SpectralField> default_probes(int dim, int K, int level,
                                          int random_count,
                                          std::uint64_t seed) {
  // Pure modes at low and dyadic-high frequencies: the uniform rate on
  // ker xi is typically attained near the truncation edge, so the probe
  // suite has to reach it.
  std::vector<int> freqs;
  for (int k = 1; k <= 4 && k <= K; ++k) freqs.push_back(k);
  for (int k = 8; k <= K; k *= 2) freqs.push_back(k);
  if (K > 4 && freqs.back() != K) freqs.push_back(K);
  std::vector<SpectralField> probes;
  if (dim == 1) {
    for (int k : freqs) {
      probes.push_back(SpectralField::mode(K, k));
      probes.push_back(SpectralField::mode(K, -k));
    }
  } else {
    for (int k1 = -2; k1 <= 2; ++k1)
      for (int k2 = -2; k2 <= 2; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        if (std::abs(k1) > K || std::abs(k2) > K) continue;
        probes.push_back(SpectralField::mode2(K, k1, k2));
      }
    for (int k : freqs) {
      if (k <= 2) continue;
      probes.push_back(SpectralField::mode2(K, k, 0));
      probes.push_back(SpectralField::mode2(K, -k, 0));
      probes.push_back(SpectralField::mode2(K, 0, k));
      probes.push_back(SpectralField::mode2(K, 0, -k));
    }
  }
  // Random real-valued zero-mass fields, H^level-normalized.
  for (int r = 0; r < random_count; ++r) {
    SpectralField f(dim, K);
    std::uint64_t counter = 0;
    auto draw = [&]() {
      return counter_uniform(seed, 7700 + std::uint64_t(r), counter++) - 0.5;
    };
    if (dim == 1) {
      for (int k = 1; k <= K; ++k) {
        const Complex c(draw(), draw());
        f.set_coeff(k, c);
        f.set_coeff(-k, std::conj(c));
      }
    } else {
      for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2) {
          if (k1 < 0 || (k1 == 0 && k2 <= 0)) continue;
          const Complex c(draw(), draw());
          f.set_coeff2(k1, k2, c);
          f.set_coeff2(-k1, -k2, std::conj(c));
        }
    }
    const double nrm = sobolev_norm(f, level);
    if (nrm > 0) f *= Complex(1.0 / nrm, 0);
    probes.push_back(f);
  }
  // Normalize the pure modes too.
  for (auto& p : probes) {
    const double nrm = sobolev_norm(p, level);
    if (nrm > 0) p *= Complex(1.0 / nrm, 0);
  }
  return probes;
}

DiagnosticsReport mixing_rate(const CocycleSpec& spec,
                              const std::vector<SpectralField>& probes_in,
                              const MixingOptions& opt) {
  const int level = strong_level(spec);
  std::vector<SpectralField> probes = probes_in;
  if (probes.empty())
    probes = default_probes(spec.family.dim(), spec.bandwidth, level, 8,
                            opt.seed);
  for (const auto& p : probes)
    if (std::abs(p.mass()) > 1e-12)
      throw Error("mixing_rate: probes must have mass 0");

  DiagnosticsReport report;
  FiberMatrixCache mats(spec);
  std::vector<double> max_norm(opt.n_max + 1, 0.0);
  for (int fiber = 0; fiber < opt.fiber_count; ++fiber) {
    const DrivingSystem::State start = DrivingSystem::State{fiber};
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
      SpectralField f = probes[pi];
      for (int n = 1; n <= opt.n_max; ++n) {
        f = mats(spec.driver.advance(start, n - 1)).apply(f);
        const double nrm = sobolev_norm(f, level);
        max_norm[n] = std::max(max_norm[n], nrm);
        report.traces.push_back(
            {double(n), double(fiber), double(pi), nrm});
      }
    }
  }

  // Truncated selection matrices can annihilate every probe after finitely
  // many steps; the fit is restricted to the segment above the floor.
  std::vector<double> xs, ys;
  for (int n = 1; n <= opt.n_max; ++n) {
    if (max_norm[n] <= opt.floor) break;
    xs.push_back(double(n));
    ys.push_back(std::log(max_norm[n]));
  }
  if (xs.size() >= 2) {
    const LinearFit fit = fit_line(xs, ys);
    report.rho = std::exp(fit.slope);
    report.rho_stderr = report.rho * fit.slope_stderr;
  } else if (xs.size() == 1) {
    report.rho = max_norm[1];
  } else {
    report.rho = 0.0;  // everything annihilated immediately
  }
  report.is_mixing = report.rho <= opt.nonmixing_threshold;
  report.verdict = report.is_mixing ? "mixing" : "non-mixing";
  return report;
}

DiagnosticsReport verify_qr(const CocycleSpec& spec, const QrOptions& opt) {
  DiagnosticsReport report;
  const SpaceLadder& ladder = spec.ladder;
  const int N = ladder.depth;

  std::vector<double> eps_grid = opt.eps_grid;
  if (eps_grid.empty()) {
    const double r = spec.family.expanding_range();
    eps_grid = {0.0};
    if (r > 0) {
      eps_grid.push_back(r);
      eps_grid.push_back(-r);
      eps_grid.push_back(r / 2);
      eps_grid.push_back(-r / 2);
    }
  }
  std::vector<DrivingSystem::State> fibers;
  for (int i = 0; i < opt.fiber_count; ++i)
    fibers.push_back(DrivingSystem::State{i});

  // (QR1): per-level uniform norms over the eps grid and fiber sample.
  report.level_norms.assign(N + 1, 0.0);
  for (double eps : eps_grid) {
    CocycleSpec s = spec;
    s.eps = eps;
    for (const auto& w : fibers) {
      const TransferMatrix A = fiber_matrix(s, w);
      for (int j = 0; j <= N; ++j)
        report.level_norms[j] =
            std::max(report.level_norms[j],
                     operator_norm(A, ladder, j, j, false));
    }
  }

  // (QR2): fit M (and C) from the growth of ||A^{(n)}||_{L(E_0)} on the
  // fiber sample, taking the worst fit over the eps grid.
  double M_fit = 0.0, C_fit = 1.0;
  for (double eps : eps_grid) {
    CocycleSpec s = spec;
    s.eps = eps;
    FiberMatrixCache mats(s);
    for (const auto& w : fibers) {
      std::vector<double> xs, ys;
      MatrixXcd prod;
      for (int n = 1; n <= opt.n_max; ++n) {
        const TransferMatrix& A = mats(s.driver.advance(w, n - 1));
        prod = (n == 1) ? A.M : MatrixXcd(A.M * prod);
        const double nrm = weighted_operator_norm(
            prod, A.dim, A.bandwidth, ladder.level(0), ladder.level(0));
        xs.push_back(double(n));
        ys.push_back(std::log(std::max(nrm, 1e-300)));
      }
      const LinearFit fit = fit_line(xs, ys);
      M_fit = std::max(M_fit, std::exp(fit.slope));
      C_fit = std::max(C_fit, std::exp(fit.intercept));
    }
  }
  report.M = M_fit;
  report.C = std::min(C_fit, opt.C_cap);

  // (QR3): smallest alpha such that
  //   ||A^{(n)} f||_{E_1} <= C alpha^n ||f||_{E_1} + C M^n ||f||_{E_0}
  // holds over the probe suite with the fitted C.
  const std::vector<SpectralField> probes = default_probes(
      spec.family.dim(), spec.bandwidth, ladder.level(std::min(1, N)), 8,
      opt.seed);
  double alpha = 0.0;
  for (double eps : eps_grid) {
    CocycleSpec s = spec;
    s.eps = eps;
    FiberMatrixCache mats(s);
    for (const auto& w : fibers) {
      for (const auto& probe : probes) {
        const double strong0 = sobolev_norm(probe, ladder.level(std::min(1, N)));
        const double weak0 = sobolev_norm(probe, ladder.level(0));
        SpectralField f = probe;
        double Mn = 1.0;
        for (int n = 1; n <= opt.n_max; ++n) {
          f = mats(s.driver.advance(w, n - 1)).apply(f);
          Mn *= report.M;
          const double lhs = sobolev_norm(f, ladder.level(std::min(1, N)));
          const double need =
              (lhs - report.C * Mn * weak0) / (report.C * strong0);
          if (need > 0) alpha = std::max(alpha, std::pow(need, 1.0 / n));
        }
      }
    }
  }
  report.alpha = alpha;
  report.alpha_less_than_M = alpha <= 0.98 * report.M;
  report.verdict = report.alpha_less_than_M ? "alpha<M" : "alpha>=M";

  // (QR4)/(QR5): perturbation exponents of the fiber operators, fitted
  // log-log over a dyadic eps grid. Skipped for eps-independent families.
  if (spec.family.order() >= 1 && N >= 1) {
    std::vector<double> dyadic = opt.dyadic_eps;
    if (dyadic.empty())
      for (int p = 3; p <= 9; ++p) dyadic.push_back(std::pow(2.0, -p));
    std::vector<double> lx4, ly4, lx5, ly5;
    for (double eps : dyadic) {
      double d4 = 0.0, d5 = 0.0;
      for (const auto& w : fibers) {
        CocycleSpec s0 = spec;
        s0.eps = 0.0;
        CocycleSpec se = spec;
        se.eps = eps;
        const TransferMatrix A0 = fiber_matrix(s0, w);
        const TransferMatrix Ae = fiber_matrix(se, w);
        d4 = std::max(d4, weighted_operator_norm(
                              Ae.M - A0.M, A0.dim, A0.bandwidth,
                              ladder.level(N), ladder.level(N - 1)));
        if (N >= 2) {
          const TransferMatrix Q1 =
              q1_matrix(spec.family, spec.driver, w, spec.bandwidth,
                        spec.assembly);
          d5 = std::max(d5, weighted_operator_norm(
                                Ae.M - A0.M - eps * Q1.M, A0.dim, A0.bandwidth,
                                ladder.level(N), ladder.level(N - 2)));
        }
      }
      if (d4 > 1e-15) {
        lx4.push_back(std::log(eps));
        ly4.push_back(std::log(d4));
      }
      if (N >= 2 && d5 > 1e-15) {
        lx5.push_back(std::log(eps));
        ly5.push_back(std::log(d5));
      }
    }
    if (lx4.size() >= 2) report.qr4_slope = fit_line(lx4, ly4).slope;
    if (lx5.size() >= 2) report.qr5_slope = fit_line(lx5, ly5).slope;
  }
  return report;
}

}  // namespace qlr
