#include "config.hpp"

#include <algorithm>
#include <fstream>

#include "gelfand/error.hpp"

namespace gelfand::cli {

namespace {

constexpr const char* kKeys[] = {"n",     "m",        "oracle_gelfand", "T", "t_max",
                                 "M",     "tol",      "rho_max",        "rho_step",
                                 "eps",   "out",      "lambda_star_file", "seed"};

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw UsageError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

}  // namespace

fixedpoint::EtaSpaceConfig RunConfig::eta_config() const {
  fixedpoint::EtaSpaceConfig c;
  c.T = T;
  c.t_max = t_max;
  c.M = M;
  c.tol = tol;
  return c;
}

io::KeyValue RunConfig::to_key_value() const {
  io::KeyValue kv;
  kv.set("n", n);
  kv.set("m", m);
  kv.set("oracle_gelfand", oracle);
  kv.set("T", T);
  kv.set("t_max", t_max);
  kv.set("M", M);
  kv.set("tol", tol);
  kv.set("rho_max", rho_max);
  kv.set("rho_step", rho_step);
  kv.set("eps", eps);
  kv.set("out", out.string());
  kv.set("lambda_star_file", lambda_star.string());
  kv.set("seed", static_cast<long long>(seed));
  return kv;
}

RunConfig resolve_config(const std::map<std::string, std::string>& flags,
                         const std::filesystem::path& config_file) {
  io::KeyValue merged;
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw UsageError("cannot open config file " + config_file.string());
    try {
      merged = io::KeyValue::parse(in);
    } catch (const DomainError& e) {
      throw UsageError(std::string("config file: ") + e.what());
    }
    for (const auto& [k, v] : merged.entries()) {
      if (std::find(std::begin(kKeys), std::end(kKeys), k) == std::end(kKeys)) {
        throw UsageError("config file: unknown key '" + k + "'");
      }
    }
  }
  for (const auto& [k, v] : flags) merged.set(k, v);

  RunConfig c;
  try {
    if (merged.contains("n")) c.n = static_cast<int>(merged.get_int("n"));
    if (merged.contains("m")) c.m = static_cast<int>(merged.get_int("m"));
    if (merged.contains("oracle_gelfand")) {
      c.oracle = parse_bool("oracle_gelfand", merged.get("oracle_gelfand"));
    }
    if (merged.contains("T")) c.T = merged.get_double("T");
    if (merged.contains("t_max")) c.t_max = merged.get_double("t_max");
    if (merged.contains("M")) c.M = merged.get_double("M");
    if (merged.contains("tol")) c.tol = merged.get_double("tol");
    if (merged.contains("rho_max")) c.rho_max = merged.get_double("rho_max");
    if (merged.contains("rho_step")) c.rho_step = merged.get_double("rho_step");
    if (merged.contains("eps")) c.eps = merged.get_double("eps");
    if (merged.contains("out")) c.out = merged.get("out");
    if (merged.contains("lambda_star_file")) c.lambda_star = merged.get("lambda_star_file");
    if (merged.contains("seed")) {
      const long long s = merged.get_int("seed");
      if (s < 0) throw UsageError("seed must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    }
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }

  if (c.n < 3) throw UsageError("n must be >= 3 (got " + std::to_string(c.n) + ")");
  if (c.m < 1) throw UsageError("m must be >= 1 (got " + std::to_string(c.m) + ")");
  if (!(c.T > 1.0)) throw UsageError("T must be > 1");
  if (c.t_max != 0.0 && !(c.t_max > c.T)) throw UsageError("t_max must exceed T");
  if (!(c.M >= 0.0)) throw UsageError("M must be non-negative");
  if (!(c.tol > 0.0)) throw UsageError("tol must be positive");
  if (!(c.rho_step > 0.0)) throw UsageError("rho_step must be positive");
  if (!(c.eps > 0.0)) throw UsageError("eps must be positive");
  if (c.out.empty()) throw UsageError("out must not be empty");
  return c;
}

}  // namespace gelfand::cli
