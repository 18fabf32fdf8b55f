#include "qlr.h"

#include <cstring>
#include <string>

#include "qlr/experiment.hpp"

struct qlr_experiment {
  qlr::Experiment impl;
  std::string last_error;
};

namespace {

void fill_errbuf(char* errbuf, size_t len, const std::string& msg) {
  if (!errbuf || len == 0) return;
  std::strncpy(errbuf, msg.c_str(), len - 1);
  errbuf[len - 1] = '\0';
}

qlr_status classify(const std::exception& e) {
  if (dynamic_cast<const qlr::ConfigError*>(&e)) return QLR_ERR_CONFIG;
  if (dynamic_cast<const qlr::NotExpandingError*>(&e)) return QLR_ERR_DYNAMICS;
  if (dynamic_cast<const qlr::NonMixingError*>(&e)) return QLR_ERR_DYNAMICS;
  if (dynamic_cast<const qlr::AliasingBudgetError*>(&e)) return QLR_ERR_BUDGET;
  return QLR_ERR_INTERNAL;
}

template <typename Fn>
qlr_status guarded(qlr_experiment* exp, Fn&& fn) {
  if (!exp) return QLR_ERR_CONFIG;
  try {
    fn();
    exp->last_error.clear();
    return QLR_OK;
  } catch (const std::exception& e) {
    exp->last_error = e.what();
    return classify(e);
  } catch (...) {
    exp->last_error = "unknown error";
    return QLR_ERR_INTERNAL;
  }
}

qlr_experiment* open_impl(const char* source, bool is_file, char* errbuf,
                          size_t errbuf_len) {
  if (!source) {
    fill_errbuf(errbuf, errbuf_len, "null config");
    return nullptr;
  }
  try {
    qlr::ExperimentConfig cfg =
        is_file ? qlr::ExperimentConfig::from_json_file(source)
                : qlr::ExperimentConfig::from_json_text(source);
    return new qlr_experiment{qlr::Experiment(std::move(cfg)), {}};
  } catch (const std::exception& e) {
    fill_errbuf(errbuf, errbuf_len, e.what());
    return nullptr;
  }
}

}  // namespace

extern "C" {

const char* qlr_version(void) { return "0.1.0"; }

qlr_experiment* qlr_experiment_open(const char* config_json, char* errbuf,
                                    size_t errbuf_len) {
  return open_impl(config_json, false, errbuf, errbuf_len);
}

qlr_experiment* qlr_experiment_open_file(const char* config_path, char* errbuf,
                                         size_t errbuf_len) {
  return open_impl(config_path, true, errbuf, errbuf_len);
}

void qlr_experiment_close(qlr_experiment* exp) { delete exp; }

const char* qlr_last_error(const qlr_experiment* exp) {
  return exp ? exp->last_error.c_str() : "";
}

qlr_status qlr_experiment_set_seed(qlr_experiment* exp, uint64_t seed) {
  return guarded(exp, [&] { exp->impl.set_seed(seed); });
}

qlr_status qlr_experiment_set_threads(qlr_experiment* exp, int threads) {
  return guarded(exp, [&] { exp->impl.set_threads(threads); });
}

qlr_status qlr_run_density(qlr_experiment* exp, const char* out_dir) {
  return guarded(exp, [&] { exp->impl.run_density(out_dir); });
}

qlr_status qlr_run_mixing(qlr_experiment* exp, const char* out_dir) {
  return guarded(exp, [&] { exp->impl.run_mixing(out_dir); });
}

qlr_status qlr_run_verify_qr(qlr_experiment* exp, const char* out_dir) {
  return guarded(exp, [&] { exp->impl.run_verify_qr(out_dir); });
}

qlr_status qlr_run_response(qlr_experiment* exp, const char* out_dir) {
  return guarded(exp, [&] { exp->impl.run_response(out_dir); });
}

qlr_status qlr_run_sweep(qlr_experiment* exp, const char* out_dir) {
  return guarded(exp, [&] { exp->impl.run_sweep(out_dir); });
}

}  // extern "C"
