#include "qlr/response.hpp"

#include <algorithm>
#include <cmath>

#include "qlr/fit.hpp"

namespace qlr {

namespace {

double fit_rho_if_needed(const CocycleSpec& spec, const ResponseOptions& opt) {
  if (opt.rho >= 0.0) return opt.rho;
  CocycleSpec s0 = spec;
  s0.eps = 0.0;
  MixingOptions mopt;
  mopt.fiber_count = 16;
  mopt.seed = opt.seed;
  const DiagnosticsReport rep = mixing_rate(s0, {}, mopt);
  return rep.rho;
}

int pick_n_trunc(double rho, int requested) {
  if (requested >= 0) return requested;
  if (rho <= 0.0) return 1;
  int n = 1;
  while (std::pow(rho, n) / (1.0 - rho) >= 1e-12 && n < 200) ++n;
  return n;
}

ResponseExpansion response_impl(const CocycleSpec& spec,
                                DrivingSystem::State omega,
                                const ResponseOptions& opt, bool second_order) {
  if (spec.family.order() < 1)
    throw OrderError("response: family order must be >= 1");
  if (second_order && spec.family.order() < 2)
    throw OrderError("quadratic response: family order must be >= 2");

  const double rho = fit_rho_if_needed(spec, opt);
  if (rho >= opt.nonmixing_threshold)
    throw NonMixingError("response: fitted rho = " + std::to_string(rho) +
                         " is not below the mixing threshold");

  CocycleSpec s0 = spec;
  s0.eps = 0.0;
  const int n_trunc = pick_n_trunc(rho, opt.n_trunc);
  // Extra backward depth so that v_0 itself has converged before the
  // Neumann recursions start accumulating.
  int n_pull = 1;
  if (rho > 0)
    while (std::pow(rho, n_pull) / (1.0 - rho) >= opt.tol && n_pull < opt.n_max)
      ++n_pull;
  const int depth = n_trunc + n_pull + 1;

  const int dim = spec.family.dim();
  const int K = spec.bandwidth;
  FiberMatrixCache mats(s0);

  SpectralField v0 = SpectralField::constant(dim, K, 1.0);
  SpectralField v1(dim, K);
  SpectralField v2(dim, K);
  double max_q1v0 = 0.0, max_src2 = 0.0;

  // Forward march along the backward orbit; the recursions
  //   v1(sw) = A(w) v1(w) + Q1(w) v0(w)
  //   v2(sw) = A(w) v2(w) + Q1(w) v1(w) + Q2(w) v0(w)
  // are the Horner form of the truncated Neumann sums on ker xi.
  for (int i = depth; i >= 1; --i) {
    const DrivingSystem::State w = spec.driver.advance(omega, -i);
    const TransferMatrix& A = mats(w);
    const TransferMatrix Q1 =
        q1_matrix(spec.family, spec.driver, w, K, spec.assembly);
    const SpectralField q1v0 = Q1.apply(v0);
    SpectralField new_v1 = A.apply(v1) + q1v0;
    max_q1v0 = std::max(max_q1v0, sobolev_norm(q1v0, spec.ladder.base_m));
    if (second_order) {
      const TransferMatrix Q2 =
          q2_matrix(spec.family, spec.driver, w, K, spec.assembly);
      const SpectralField src = Q2.apply(v0) + Q1.apply(v1);
      max_src2 = std::max(max_src2, sobolev_norm(src, spec.ladder.base_m));
      v2 = A.apply(v2) + src;
    }
    v1 = std::move(new_v1);
    v0 = A.apply(v0);
    const Complex m = v0.mass();
    if (std::abs(m) < 1e-300)
      throw NonMixingError("response: pullback mass collapsed");
    v0 *= Complex(1, 0) / m;
  }

  ResponseExpansion out;
  out.fiber_index = omega.index;
  out.v0 = v0;
  out.v1 = v1;
  if (second_order) out.v2 = v2;
  out.n_trunc = n_trunc;
  out.rho = rho;
  const double geom =
      (rho > 0 && rho < 1) ? std::pow(rho, n_trunc + 1) / (1.0 - rho) : 0.0;
  out.tail_v1 = geom * max_q1v0;
  out.tail_v2 = geom * max_src2;
  return out;
}

}  // namespace

ResponseExpansion linear_response(const CocycleSpec& spec,
                                  DrivingSystem::State omega,
                                  const ResponseOptions& opt) {
  return response_impl(spec, omega, opt, false);
}

ResponseExpansion quadratic_response(const CocycleSpec& spec,
                                     DrivingSystem::State omega,
                                     const ResponseOptions& opt) {
  return response_impl(spec, omega, opt, true);
}

FdOracleResult fd_oracle(const CocycleSpec& spec, DrivingSystem::State omega,
                         double eps, int order, const ResponseOptions& opt) {
  if (order != 1 && order != 2) throw Error("fd_oracle: order must be 1 or 2");
  if (eps <= 0) throw Error("fd_oracle: eps must be positive");
  auto density_at = [&](double e) {
    CocycleSpec s = spec;
    s.eps = e;
    return equivariant_density(s, omega, opt.tol, opt.n_max);
  };
  const SpectralField vp = density_at(eps);
  const SpectralField vm = density_at(-eps);
  FdOracleResult out{SpectralField(spec.family.dim(), spec.bandwidth), 0, 0};
  if (order == 1) {
    out.field = Complex(1.0 / (2 * eps), 0) * (vp - vm);
    out.solver_error = opt.tol / eps;
  } else {
    const SpectralField v0 = density_at(0.0);
    out.field = Complex(1.0 / (2 * eps * eps), 0) *
                (vp - Complex(2, 0) * v0 + vm);
    out.solver_error = opt.tol / (eps * eps);
  }
  out.discretization_error = eps * eps;  // relative order of the FD scheme
  return out;
}

ConvergenceReport epsilon_sweep(const CocycleSpec& spec,
                                DrivingSystem::State omega,
                                const std::vector<double>& eps_grid,
                                const ResponseOptions& opt,
                                const DiagnosticsReport* qr) {
  if (eps_grid.empty()) throw Error("epsilon_sweep: empty eps grid");
  const bool second = spec.family.order() >= 2;
  const ResponseExpansion resp =
      second ? quadratic_response(spec, omega, opt)
             : linear_response(spec, omega, opt);
  const int m0 = spec.ladder.base_m;

  ConvergenceReport rep;
  rep.eps_grid = eps_grid;
  const int max_order = second ? 3 : 2;
  rep.remainders.assign(3, std::vector<double>(eps_grid.size(), 0.0));
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    const double eps = eps_grid[i];
    CocycleSpec s = spec;
    s.eps = eps;
    SpectralField v_eps(spec.family.dim(), spec.bandwidth);
    try {
      v_eps = equivariant_density(s, omega, opt.tol, opt.n_max);
    } catch (const NonMixingError& e) {
      throw NonMixingError("epsilon_sweep: non-mixing at eps = " +
                           std::to_string(eps) + ": " + e.what());
    }
    SpectralField partial = resp.v0;
    rep.remainders[0][i] = sobolev_norm(v_eps - partial, m0);
    partial += Complex(eps, 0) * resp.v1;
    rep.remainders[1][i] = sobolev_norm(v_eps - partial, m0);
    if (second) {
      partial += Complex(eps * eps, 0) * *resp.v2;
      rep.remainders[2][i] = sobolev_norm(v_eps - partial, m0);
    }
  }

  rep.slopes.assign(3, 0.0);
  rep.slope_stderrs.assign(3, 0.0);
  rep.saturated.assign(3, false);
  for (int j = 1; j <= max_order; ++j) {
    std::vector<double> xs, ys;
    bool sat = false;
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
      const double r = rep.remainders[j - 1][i];
      // Below ~10x solver tolerance the remainder is noise, not signal.
      if (r <= 10 * opt.tol) {
        sat = true;
        continue;
      }
      xs.push_back(std::log(eps_grid[i]));
      ys.push_back(std::log(r));
    }
    if (xs.size() >= 2) {
      const LinearFit fit = fit_line(xs, ys);
      rep.slopes[j - 1] = fit.slope;
      rep.slope_stderrs[j - 1] = fit.slope_stderr;
    } else {
      sat = true;
    }
    rep.saturated[j - 1] = sat;
  }
  if (qr && qr->alpha > 0 && qr->M > qr->alpha) {
    rep.eta_lo = 0.0;
    rep.eta_hi = std::log(1.0 / qr->alpha) / std::log(qr->M / qr->alpha);
  }
  return rep;
}

}  // namespace qlr
