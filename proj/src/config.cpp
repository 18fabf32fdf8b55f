#include "qlr/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace qlr {

namespace {

using nlohmann::json;

std::vector<TrigTerm> parse_terms(const json& arr, const char* where) {
  std::vector<TrigTerm> terms;
  if (!arr.is_array()) throw ConfigError(std::string(where) + ": expected array");
  for (const auto& t : arr) {
    TrigTerm term;
    term.freq = t.at("freq").get<int>();
    term.eps_power = t.value("eps_power", 0);
    term.amplitude = t.at("amplitude").get<double>();
    term.fiber_mult = t.value("fiber_mult", 0.0);
    term.phase = t.value("phase", 0.0);
    if (term.freq < 1)
      throw ConfigError(std::string(where) + ": freq must be >= 1");
    if (term.eps_power < 0)
      throw ConfigError(std::string(where) + ": eps_power must be >= 0");
    terms.push_back(term);
  }
  return terms;
}

MapFamily parse_family(const json& j) {
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "circle") {
    return MapFamily::circle_expanding(
        j.at("degree").get<int>(),
        j.contains("terms") ? parse_terms(j["terms"], "family.terms")
                            : std::vector<TrigTerm>{},
        j.value("order", 1));
  }
  if (variant == "u1") {
    const json& tau = j.at("tau");
    return MapFamily::u1_extension(
        j.at("degree").get<int>(),
        j.contains("terms") ? parse_terms(j["terms"], "family.terms")
                            : std::vector<TrigTerm>{},
        tau.value("constant", 0.0),
        tau.contains("terms") ? parse_terms(tau["terms"], "family.tau.terms")
                              : std::vector<TrigTerm>{},
        j.value("order", 1));
  }
  if (variant == "conjugated_doubling") {
    return MapFamily::conjugated_doubling(j.at("amplitude").get<double>());
  }
  throw ConfigError("unknown family variant: " + variant);
}

DrivingSystem parse_driver(const json& j) {
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "rotation")
    return DrivingSystem::rotation(j.at("alpha").get<double>(),
                                   j.value("start", 0.0));
  if (variant == "bernoulli")
    return DrivingSystem::bernoulli(j.at("seed").get<std::uint64_t>(),
                                    j.value("symbols", 2));
  if (variant == "periodic")
    return DrivingSystem::periodic(j.at("cycle").get<std::vector<double>>());
  throw ConfigError("unknown driver variant: " + variant);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.spec.family = parse_family(j.at("family"));
    cfg.spec.driver = parse_driver(j.at("driver"));
    cfg.spec.bandwidth = j.at("bandwidth").get<int>();
    if (cfg.spec.bandwidth < 1) throw ConfigError("bandwidth must be >= 1");
    cfg.spec.eps = j.value("epsilon", 0.0);
    if (std::abs(cfg.spec.eps) > 1.0)
      throw ConfigError("epsilon must satisfy |epsilon| <= 1");
    cfg.spec.ladder.base_m = j.value("sobolev_m", 0);
    cfg.spec.ladder.depth = j.value("ladder_depth", 2);
    if (cfg.spec.ladder.base_m < 0 || cfg.spec.ladder.depth < 1)
      throw ConfigError("ladder: need sobolev_m >= 0 and ladder_depth >= 1");
    cfg.tol = j.value("tol", 1e-10);
    cfg.n_max = j.value("n_max", 200);
    cfg.n_trunc = j.value("n_trunc", -1);
    if (j.contains("eps_grid"))
      cfg.eps_grid = j["eps_grid"].get<std::vector<double>>();
    cfg.fiber_count = j.value("fibers", 1);
    cfg.fiber_index = j.value("fiber_index", std::int64_t(0));
    cfg.seed = j.value("seed", std::uint64_t(1));
    cfg.threads = j.value("threads", 1);
    if (cfg.tol <= 0 || cfg.n_max < 1 || cfg.fiber_count < 1 ||
        cfg.threads < 1)
      throw ConfigError("tol, n_max, fibers and threads must be positive");

    if (j.contains("mixing")) {
      const json& m = j["mixing"];
      cfg.mixing.n_max = m.value("n_max", cfg.mixing.n_max);
      cfg.mixing.fiber_count = m.value("fibers", cfg.mixing.fiber_count);
      cfg.mixing.nonmixing_threshold =
          m.value("threshold", cfg.mixing.nonmixing_threshold);
    }
    cfg.mixing.seed = cfg.seed;
    if (j.contains("qr")) {
      const json& q = j["qr"];
      cfg.qr.n_max = q.value("n_max", cfg.qr.n_max);
      cfg.qr.fiber_count = q.value("fibers", cfg.qr.fiber_count);
      cfg.qr.C_cap = q.value("C_cap", cfg.qr.C_cap);
      if (q.contains("eps_grid"))
        cfg.qr.eps_grid = q["eps_grid"].get<std::vector<double>>();
      if (q.contains("dyadic_eps"))
        cfg.qr.dyadic_eps = q["dyadic_eps"].get<std::vector<double>>();
    }
    cfg.qr.seed = cfg.seed;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream ifs(path, std::ios::binary);
  if (!ifs) throw ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << ifs.rdbuf();
  return from_json_text(ss.str());
}

}  // namespace qlr
