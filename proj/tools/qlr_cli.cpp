// Batch CLI for the quenched-response experiments. Links only the C API.
#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <string>

#include "qlr.h"

namespace {

int run_command(const std::string& name, const std::string& config_path,
                const std::string& out_dir, std::uint64_t seed, bool has_seed,
                int threads) {
  char errbuf[1024] = {0};
  qlr_experiment* exp =
      qlr_experiment_open_file(config_path.c_str(), errbuf, sizeof(errbuf));
  if (!exp) {
    std::fprintf(stderr, "error: %s\n", errbuf);
    return QLR_ERR_CONFIG;
  }
  qlr_status st = QLR_OK;
  if (has_seed) st = qlr_experiment_set_seed(exp, seed);
  if (st == QLR_OK && threads > 0)
    st = qlr_experiment_set_threads(exp, threads);
  if (st == QLR_OK) {
    if (name == "density")
      st = qlr_run_density(exp, out_dir.c_str());
    else if (name == "mixing")
      st = qlr_run_mixing(exp, out_dir.c_str());
    else if (name == "verify-qr")
      st = qlr_run_verify_qr(exp, out_dir.c_str());
    else if (name == "response")
      st = qlr_run_response(exp, out_dir.c_str());
    else if (name == "sweep")
      st = qlr_run_sweep(exp, out_dir.c_str());
  }
  if (st != QLR_OK)
    std::fprintf(stderr, "error: %s\n", qlr_last_error(exp));
  else
    std::printf("%s: wrote %s\n", name.c_str(), out_dir.c_str());
  qlr_experiment_close(exp);
  return st;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quenched linear response experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool has_seed = false;
  int threads = 0;

  const char* names[] = {"density", "mixing", "verify-qr", "response",
                         "sweep"};
  const char* descs[] = {
      "equivariant densities and equivariance residuals",
      "fit the uniform mixing rate rho",
      "verify the (QR1)-(QR5) conditions empirically",
      "quenched linear/quadratic response on one fiber",
      "Taylor-remainder sweep across fibers"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the config RNG seed")
        ->each([&](const std::string&) { has_seed = true; });
    sub->add_option("--threads", threads, "worker thread count");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();
  return run_command(name, config_path, out_dir, seed, has_seed, threads);
}
