#include "qpt/runconfig.hpp"

#include <cstdlib>
#include <fstream>
#include <thread>

namespace qpt {

using nlohmann::ordered_json;

namespace {

// Field table driving both JSON directions; keeps key names and membership
// in one place.
template <typename Cfg, typename FString, typename FInt, typename FDouble,
          typename FUint, typename FStrVec, typename FIntVec>
void for_each_field(Cfg& c, FString fs, FInt fi, FDouble fd, FUint fu,
                    FStrVec fsv, FIntVec fiv) {
  fs("subcommand", c.subcommand);
  fs("model", c.model);
  fs("engine", c.engine);
  fi("size", c.size);
  fs("sector", c.sector);
  fd("delta", c.delta);
  fd("eta", c.eta);
  fd("gamma1", c.gamma1);
  fd("gamma2", c.gamma2);
  fd("gamma", c.gamma);
  fd("lambda", c.lambda);
  fd("alpha", c.alpha);
  fd("beta", c.beta);
  fs("param", c.param);
  fs("range", c.range);
  fsv("measures", c.measures);
  fiv("pairs", c.pairs);
  fi("anchor", c.anchor);
  fi("k_levels", c.k_levels);
  fs("e2v_base", c.e2v_base);
  fi("r_max", c.r_max);
  fd("tail_tol", c.tail_tol);
  fi("qd_theta", c.qd_theta);
  fi("qd_phi", c.qd_phi);
  fi("qd_levels", c.qd_levels);
  fd("qd_shrink", c.qd_shrink);
  fd("qd_tol", c.qd_tol);
  fs("qd_measured", c.qd_measured);
  fd("tol", c.tol);
  fu("seed", c.seed);
  fi("workers", c.workers);
  fs("out", c.out);
  fs("json_out", c.json_out);
  fs("plot", c.plot);
  fsv("inputs", c.inputs);
  fs("fss_measure", c.fss_measure);
  fs("extremum", c.extremum);
  fs("x_param", c.x_param);
  fs("x_range", c.x_range);
  fiv("val_sizes", c.val_sizes);
  fi("draws", c.draws);
  fd("threshold", c.threshold);
  fs("force_grid", c.force_grid);
}

}  // namespace

ordered_json to_json(const RunConfig& cfg) {
  ordered_json j;
  auto put = [&](const char* k, const auto& v) { j[k] = v; };
  for_each_field(cfg, put, put, put, put, put, put);
  return j;
}

RunConfig config_from_json(const ordered_json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  RunConfig cfg;
  std::vector<std::string> known;
  auto get = [&](const char* k, auto& field) {
    known.emplace_back(k);
    auto it = j.find(k);
    if (it == j.end()) return;
    try {
      field = it->get<std::decay_t<decltype(field)>>();
    } catch (const nlohmann::json::exception&) {
      throw UsageError(std::string("config key '") + k +
                       "' has the wrong type");
    }
  };
  for_each_field(cfg, get, get, get, get, get, get);
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const auto& k : known)
      if (k == it.key()) {
        ok = true;
        break;
      }
    if (!ok) throw UsageError("unknown config key '" + it.key() + "'");
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " +
                     e.what());
  }
  return config_from_json(j);
}

std::string config_echo(const RunConfig& cfg) { return to_json(cfg).dump(); }

int effective_workers(const RunConfig& cfg) {
  if (cfg.workers < 0) throw UsageError("workers must be >= 0");
  if (cfg.workers > 0) return cfg.workers;
  if (const char* env = std::getenv("QPT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw UsageError("QPT_THREADS must be a positive integer");
    return static_cast<int>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

ModelSpec model_spec_from(const RunConfig& cfg) {
  ModelSpec spec;
  spec.family = model_from_string(cfg.model);
  spec.n_sites = cfg.size;
  spec.delta = cfg.delta;
  spec.eta = cfg.eta;
  spec.gamma1 = cfg.gamma1;
  spec.gamma2 = cfg.gamma2;
  spec.gamma = cfg.gamma;
  spec.lambda = cfg.lambda;
  spec.alpha = cfg.alpha;
  spec.beta = cfg.beta;
  spec.validate();
  return spec;
}

std::optional<int> sector_for(const RunConfig& cfg, const ModelSpec& spec) {
  if (cfg.sector == "full") return std::nullopt;
  if (cfg.sector == "auto") {
    if (!spec.conserves_sz()) return std::nullopt;
    return spec.n_sites / 2;
  }
  char* end = nullptr;
  const long v = std::strtol(cfg.sector.c_str(), &end, 10);
  if (end == cfg.sector.c_str() || *end != '\0')
    throw UsageError("sector must be 'auto', 'full', or an integer n_up");
  if (!spec.conserves_sz())
    throw UsageError("model '" + to_string(spec.family) +
                     "' does not conserve S_z; use sector=full");
  if (v < 0 || v > spec.n_sites)
    throw UsageError("sector n_up out of range 0..N");
  return static_cast<int>(v);
}

}  // namespace qpt
