#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

#include "gelfand/fixedpoint.hpp"
#include "gelfand/io.hpp"
#include "gelfand/problem.hpp"

namespace gelfand::cli {

/// Bad flags, bad config file or inadmissible parameters (exit code 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int n = 3;
  int m = 1;
  bool oracle = false;
  double T = 30.0;
  double t_max = 0.0;  // 0: library default
  double M = 0.0;      // 0: automatic
  double tol = 1e-12;
  double rho_max = 6.0;
  double rho_step = 0.005;
  double eps = 0.5;
  std::filesystem::path out = "out";
  std::filesystem::path lambda_star;  // meta.txt of a singular run
  std::uint64_t seed = 1;

  ProblemSpec problem() const {
    return {n, m, oracle ? Nonlinearity::gelfand : Nonlinearity::tower};
  }
  fixedpoint::EtaSpaceConfig eta_config() const;

  /// Echo of every field, in a fixed order.
  io::KeyValue to_key_value() const;
};

/// Flags (raw strings keyed by config name) override the config file, which
/// overrides the defaults. Throws UsageError.
RunConfig resolve_config(const std::map<std::string, std::string>& flags,
                         const std::filesystem::path& config_file);

}  // namespace gelfand::cli
