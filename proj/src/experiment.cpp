#include "qlr/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <mutex>
#include <thread>

#include "qlr/io.hpp"
#include "qlr/response.hpp"

namespace qlr {

namespace {

using nlohmann::json;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory: " + dir);
}

std::string path_join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string fiber_tag(std::int64_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld", static_cast<long long>(i));
  return buf;
}

/// Field dump that omits numerically-zero rows.
std::string sparse_field_csv(const SpectralField& f, double drop = 1e-14) {
  const int K = f.bandwidth();
  std::string out;
  if (f.dim() == 1) {
    out = "k,re,im\n";
    for (int k = -K; k <= K; ++k) {
      const Complex c = f.coeff(k);
      if (std::abs(c) < drop) continue;
      out += std::to_string(k) + "," + format_double(c.real()) + "," +
             format_double(c.imag()) + "\n";
    }
  } else {
    out = "k1,k2,re,im\n";
    for (int k1 = -K; k1 <= K; ++k1)
      for (int k2 = -K; k2 <= K; ++k2) {
        const Complex c = f.coeff(k1, k2);
        if (std::abs(c) < drop) continue;
        out += std::to_string(k1) + "," + std::to_string(k2) + "," +
               format_double(c.real()) + "," + format_double(c.imag()) + "\n";
      }
  }
  return out;
}

ResponseOptions response_options(const ExperimentConfig& cfg) {
  ResponseOptions opt;
  opt.tol = cfg.tol;
  opt.n_max = cfg.n_max;
  opt.n_trunc = cfg.n_trunc;
  opt.seed = cfg.seed;
  return opt;
}

/// Runs fn(i) for i in [0, count) over the configured thread count;
/// results must be stored by index so the fan-out cannot reorder output.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (int i = t; i < count; i += threads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

void Experiment::set_seed(std::uint64_t seed) {
  cfg_.seed = seed;
  cfg_.mixing.seed = seed;
  cfg_.qr.seed = seed;
}

void Experiment::set_threads(int threads) {
  if (threads < 1) throw ConfigError("threads must be >= 1");
  cfg_.threads = threads;
}

void Experiment::run_density(const std::string& out_dir) const {
  ensure_dir(out_dir);
  const int F = cfg_.fiber_count;
  const int level = cfg_.spec.ladder.base_m + std::min(1, cfg_.spec.ladder.depth);

  // One extra fiber so every residual ||A(w)v(w) - v(sw)|| has its target.
  std::vector<SpectralField> densities(F + 1);
  std::vector<DensityStats> stats(F + 1);
  parallel_for(F + 1, cfg_.threads, [&](int i) {
    FiberMatrixCache cache(cfg_.spec);
    densities[i] = equivariant_density(cfg_.spec, DrivingSystem::State{i},
                                       cfg_.tol, cfg_.n_max, &cache,
                                       &stats[i]);
  });

  std::string residuals = "fiber,residual,iterations,mass_drift\n";
  json report;
  report["command"] = "density";
  report["fibers"] = F;
  report["tol"] = cfg_.tol;
  double worst_residual = 0.0;
  for (int i = 0; i < F; ++i) {
    const TransferMatrix A =
        fiber_matrix(cfg_.spec, DrivingSystem::State{i});
    const double res = sobolev_norm(A.apply(densities[i]) - densities[i + 1],
                                    level);
    worst_residual = std::max(worst_residual, res);
    residuals += std::to_string(i) + "," + format_double(res) + "," +
                 std::to_string(stats[i].iterations) + "," +
                 format_double(stats[i].mass_drift) + "\n";
    write_text_atomic(path_join(out_dir, "density_fiber_" + fiber_tag(i) + ".csv"),
                      sparse_field_csv(densities[i]));
  }
  report["worst_equivariance_residual"] = worst_residual;
  write_text_atomic(path_join(out_dir, "residuals.csv"), residuals);
  write_text_atomic(path_join(out_dir, "density.json"), report.dump(2) + "\n");
}

void Experiment::run_mixing(const std::string& out_dir) const {
  ensure_dir(out_dir);
  const DiagnosticsReport rep = mixing_rate(cfg_.spec, {}, cfg_.mixing);
  json j;
  j["command"] = "mixing";
  j["rho"] = rep.rho;
  j["rho_stderr"] = rep.rho_stderr;
  j["verdict"] = rep.verdict;
  j["n_max"] = cfg_.mixing.n_max;
  j["fibers"] = cfg_.mixing.fiber_count;
  write_text_atomic(path_join(out_dir, "mixing.json"), j.dump(2) + "\n");
  std::string traces = "n,fiber,probe,norm\n";
  for (const auto& row : rep.traces)
    traces += format_double(row[0]) + "," + format_double(row[1]) + "," +
              format_double(row[2]) + "," + format_double(row[3]) + "\n";
  write_text_atomic(path_join(out_dir, "traces.csv"), traces);
}

void Experiment::run_verify_qr(const std::string& out_dir) const {
  ensure_dir(out_dir);
  const DiagnosticsReport rep = verify_qr(cfg_.spec, cfg_.qr);
  json j;
  j["command"] = "verify-qr";
  j["C"] = rep.C;
  j["M"] = rep.M;
  j["alpha"] = rep.alpha;
  j["alpha_less_than_M"] = rep.alpha_less_than_M;
  j["verdict"] = rep.verdict;
  j["level_norms"] = rep.level_norms;
  j["qr4_slope"] = rep.qr4_slope;
  j["qr5_slope"] = rep.qr5_slope;
  write_text_atomic(path_join(out_dir, "qr.json"), j.dump(2) + "\n");
}

void Experiment::run_response(const std::string& out_dir) const {
  ensure_dir(out_dir);
  const DrivingSystem::State omega{cfg_.fiber_index};
  const ResponseOptions opt = response_options(cfg_);
  const bool second = cfg_.spec.family.order() >= 2;
  const ResponseExpansion resp = second
                                     ? quadratic_response(cfg_.spec, omega, opt)
                                     : linear_response(cfg_.spec, omega, opt);
  write_text_atomic(path_join(out_dir, "v0.csv"), sparse_field_csv(resp.v0));
  write_text_atomic(path_join(out_dir, "v1.csv"), sparse_field_csv(resp.v1));
  if (resp.v2)
    write_text_atomic(path_join(out_dir, "v2.csv"), sparse_field_csv(*resp.v2));

  json j;
  j["command"] = "response";
  j["fiber"] = resp.fiber_index;
  j["n_trunc"] = resp.n_trunc;
  j["rho"] = resp.rho;
  j["tail_v1"] = resp.tail_v1;
  j["tail_v2"] = resp.tail_v2;
  j["mass_v0"] = resp.v0.mass().real();
  j["mass_v1"] = std::abs(resp.v1.mass());
  if (resp.v2) j["mass_v2"] = std::abs(resp.v2->mass());
  write_text_atomic(path_join(out_dir, "response.json"), j.dump(2) + "\n");

  if (!cfg_.eps_grid.empty()) {
    const ConvergenceReport conv =
        epsilon_sweep(cfg_.spec, omega, cfg_.eps_grid, opt);
    std::string rem = "epsilon,order,remainder_norm\n";
    for (std::size_t i = 0; i < conv.eps_grid.size(); ++i)
      for (int order = 1; order <= 3; ++order)
        rem += format_double(conv.eps_grid[i]) + "," + std::to_string(order) +
               "," + format_double(conv.remainders[order - 1][i]) + "\n";
    write_text_atomic(path_join(out_dir, "remainders.csv"), rem);
    json c;
    c["eps_grid"] = conv.eps_grid;
    c["slopes"] = conv.slopes;
    c["slope_stderrs"] = conv.slope_stderrs;
    c["saturated"] = conv.saturated;
    c["eta_interval"] = {conv.eta_lo, conv.eta_hi};
    write_text_atomic(path_join(out_dir, "convergence.json"),
                      c.dump(2) + "\n");
  }
}

void Experiment::run_sweep(const std::string& out_dir) const {
  if (cfg_.eps_grid.empty())
    throw ConfigError("sweep: eps_grid must be non-empty");
  ensure_dir(out_dir);
  const int F = cfg_.fiber_count;
  const ResponseOptions opt = response_options(cfg_);
  std::vector<ConvergenceReport> reports(F);
  parallel_for(F, cfg_.threads, [&](int i) {
    reports[i] =
        epsilon_sweep(cfg_.spec, DrivingSystem::State{i}, cfg_.eps_grid, opt);
  });

  std::string rem = "fiber,epsilon,order,remainder_norm\n";
  std::string slopes = "fiber,order,slope,stderr,saturated\n";
  json j;
  j["command"] = "sweep";
  j["fibers"] = F;
  j["eps_grid"] = cfg_.eps_grid;
  std::vector<double> min_slope(3, 1e300), max_slope(3, -1e300);
  for (int i = 0; i < F; ++i) {
    const ConvergenceReport& r = reports[i];
    for (std::size_t g = 0; g < r.eps_grid.size(); ++g)
      for (int order = 1; order <= 3; ++order)
        rem += std::to_string(i) + "," + format_double(r.eps_grid[g]) + "," +
               std::to_string(order) + "," +
               format_double(r.remainders[order - 1][g]) + "\n";
    for (int order = 1; order <= 3; ++order) {
      slopes += std::to_string(i) + "," + std::to_string(order) + "," +
                format_double(r.slopes[order - 1]) + "," +
                format_double(r.slope_stderrs[order - 1]) + "," +
                (r.saturated[order - 1] ? "1" : "0") + "\n";
      if (!r.saturated[order - 1]) {
        min_slope[order - 1] = std::min(min_slope[order - 1],
                                        r.slopes[order - 1]);
        max_slope[order - 1] = std::max(max_slope[order - 1],
                                        r.slopes[order - 1]);
      }
    }
  }
  for (int order = 1; order <= 3; ++order) {
    if (min_slope[order - 1] <= max_slope[order - 1]) {
      j["min_slope_order_" + std::to_string(order)] = min_slope[order - 1];
      j["max_slope_order_" + std::to_string(order)] = max_slope[order - 1];
    }
  }
  write_text_atomic(path_join(out_dir, "remainders.csv"), rem);
  write_text_atomic(path_join(out_dir, "slopes.csv"), slopes);
  write_text_atomic(path_join(out_dir, "sweep.json"), j.dump(2) + "\n");
}

}  // namespace qlr
