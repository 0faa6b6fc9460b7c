#include "gelfand/problem.hpp"

#include <algorithm>
#include <cmath>

#include "gelfand/error.hpp"
#include "gelfand/iterexp.hpp"

namespace gelfand {

void ProblemSpec::validate() const {
  if (n < 3) throw DomainError("dimension n must be >= 3");
  if (m < 1) throw DomainError("tower height m must be >= 1");
}

std::string ProblemSpec::describe() const {
  std::string s = "n=" + std::to_string(n) + " m=" + std::to_string(m);
  if (oracle()) s += " (gelfand oracle)";
  return s;
}

double source_term(const ProblemSpec& p, double t, double w) {
  const auto g = iterexp::g_tower(p.effective_height(), w);
  if (!g) throw OverflowError("source term: G_m(w) out of range");
  const double expo = *g - 2.0 * t;
  if (expo > iterexp::kMaxExpArgument) throw OverflowError("source term out of range");
  return std::exp(expo);
}

double relative_residual(const ProblemSpec& p, double t, double w, double w_t, double w_tt) {
  const double damping = (p.n - 2) * w_t;
  const double src = source_term(p, t, w);
  const double scale = std::max({std::abs(w_tt), std::abs(damping), std::abs(src)});
  const double res = w_tt - damping + src;
  return scale > 0.0 ? std::abs(res) / scale : std::abs(res);
}

}  // namespace gelfand
