#pragma once

#include <vector>

#include "config.hpp"

namespace gelfand::cli {

enum class Suite { asymptotics, miyamoto, iterexp, all };

struct IterexpQuery {
  int m = 1;
  std::vector<double> values;
};

int cmd_iterexp_eval(const IterexpQuery& q);
int cmd_singular(const RunConfig& cfg);
/// intersection_rho: radii at which intersections with u* are counted; empty
/// means 1, 2, ..., floor(rho_max).
int cmd_bifurcation(const RunConfig& cfg, std::vector<double> intersection_rho);
int cmd_verify(const RunConfig& cfg, Suite suite);

}  // namespace gelfand::cli
