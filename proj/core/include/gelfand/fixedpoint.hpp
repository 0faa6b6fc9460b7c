#pragma once

// Corrector eta for the singular solution w = f + eta of
//   w_tt - (n-2) w_t + exp(G_m(w) - 2t) = 0,
// where f is the closed-form ansatz (ln(2t+phi) for m = 1, H_m(2t+phi) for
// m >= 2, 2t + ln(2(n-2)) in Gelfand oracle mode). eta solves
//   eta_tt - (n-2) eta_t + 2(n-2) eta = -F(t, eta)
// and is obtained by Picard iteration of eta = Psi[eta] with
//   Psi[eta](t) = -int_t^inf k(s-t) F(s, eta(s)) ds,
// k the decaying Green kernel of the constant-coefficient operator.

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gelfand/problem.hpp"

namespace gelfand::fixedpoint {

struct PhiValues {
  double phi;
  double phi_t;
  double phi_tt;
};

/// phi(t) = ln((n-2)/t) + ln(1 + ln t/(2t)) and its derivatives. t > 1.
PhiValues phi_m1(int n, double t);

/// phi(t) = ln(2(n-2)) - sum_{j<m} ln H_j(2t) = ln(2(n-2) H'_m(2t)), m >= 2.
PhiValues phi_m(int n, int m, double t);

/// Split of the forcing F = F0 + F1 eta + F2 + F3. exp_phi is e^phi, so that
/// exp(G_m(w) - 2t) = exp_phi + 2(n-2) eta + F1 eta + F2 + F3.
struct ForcingParts {
  double F0 = 0.0;
  double F1 = 0.0;
  double F2 = 0.0;
  double F3 = 0.0;
  double exp_phi = 0.0;

  double total(double eta) const { return F0 + F1 * eta + F2 + F3; }
};

ForcingParts forcing_parts_m1(int n, double t, double eta);
double forcing_m1(int n, double t, double eta);

ForcingParts forcing_parts_m(int n, int m, double t, double eta);
double forcing_m(int n, int m, double t, double eta);

/// rho(eta) = G_m(y + eta) - G_m(y) - G'_m(y) eta with y = H_m(psi), computed
/// level by level without cancellation.
double tower_remainder(int m, double psi, double eta);

/// f, f_t, f_tt of the ansatz.
struct AnsatzValues {
  double f;
  double f_t;
  double f_tt;
};

/// Dispatch over m = 1, m >= 2 and oracle mode.
class Ansatz {
 public:
  explicit Ansatz(ProblemSpec p);

  const ProblemSpec& problem() const { return p_; }
  AnsatzValues base(double t) const;
  ForcingParts forcing_parts(double t, double eta) const;
  double forcing(double t, double eta) const { return forcing_parts(t, eta).total(eta); }

  /// Smallest t at which the ansatz is defined.
  double t_lower() const;

 private:
  ProblemSpec p_;
};

/// One term Re[coeff * tau^power * exp(rate * tau)] of a kernel.
struct KernelTerm {
  std::complex<double> coeff;
  std::complex<double> rate;
  int power = 0;
};

/// Green kernel of eta'' - (n-2) eta' + 2(n-2) eta.
class PsiKernel {
 public:
  explicit PsiKernel(int n);

  int n() const { return n_; }
  /// sqrt((n-2)(10-n)) for 3 <= n <= 9; the kernel frequency is mu/2.
  std::optional<double> mu() const { return mu_; }
  /// Real roots of x^2 - (n-2)x + 2(n-2) = 0 for n >= 10, ascending.
  std::optional<std::pair<double, double>> root_pair() const { return roots_; }

  double operator()(double tau) const;
  const std::vector<KernelTerm>& terms() const { return terms_; }

  /// Slowest exponential decay rate of |k|.
  double decay_rate() const { return decay_; }
  /// int_0^inf k = 1/(2(n-2)).
  double integral() const { return 0.5 / (n_ - 2); }
  /// int_0^inf |k|, by quadrature.
  double abs_integral() const;
  /// Upper bound for int_d^inf |k|.
  double abs_tail_bound(double d) const;

  /// Panel length used for the Picard grid.
  double max_panel_length() const;

 private:
  int n_;
  std::optional<double> mu_;
  std::optional<std::pair<double, double>> roots_;
  std::vector<KernelTerm> terms_;
  double decay_;
};

struct PsiValue {
  double value;
  double tail_bound;
};

/// -int_t^{t_max} k(s-t) F(s) ds by panel Gauss-Legendre quadrature. The tail
/// beyond t_max is bounded assuming |F(s)| <= A/s^2 with A = t_max^2 |F(t_max)|.
/// Throws ConvergenceError when tail_bound > tail_tol.
PsiValue psi_apply(const PsiKernel& kernel, const std::function<double(double)>& forcing,
                   double t, double t_max,
                   double tail_tol = std::numeric_limits<double>::infinity());

/// Uniform panels on [start, end], each carrying order+1 Chebyshev-Lobatto
/// nodes; neighbouring panels share their endpoint.
class PanelGrid {
 public:
  PanelGrid() = default;
  PanelGrid(double start, double end, double max_panel, int order = 8);

  double start() const { return start_; }
  double end() const { return end_; }
  double panel_length() const { return h_; }
  int panels() const { return panels_; }
  int order() const { return order_; }
  const std::vector<double>& nodes() const { return nodes_; }
  /// Reference nodes on [-1, 1].
  const std::vector<double>& reference() const { return ref_; }

  /// Polynomial interpolation of node values at t in [start, end].
  double interpolate(std::span<const double> values, double t) const;

 private:
  double start_ = 0.0;
  double end_ = 0.0;
  double h_ = 0.0;
  int panels_ = 0;
  int order_ = 8;
  std::vector<double> ref_;
  std::vector<double> nodes_;
};

/// J(t_j) = int_{t_j}^inf k(s - t_j) f(s) ds at every node of a PanelGrid,
/// with f interpolated per panel and f(s) ~ f(end) (end/s)^2 beyond the grid.
class ExpConvolution {
 public:
  ExpConvolution(const PanelGrid& grid, std::vector<KernelTerm> terms);

  std::vector<double> apply(std::span<const double> f) const;

 private:
  struct Weights {
    KernelTerm term;
    std::vector<std::complex<double>> w0;  // (order+1)^2, row = target node
    std::vector<std::complex<double>> w1;  // only for power 1
    std::vector<std::complex<double>> decay;  // exp(rate * (B - y_j))
  };
  PanelGrid grid_;
  std::vector<Weights> weights_;
};

struct EtaSpaceConfig {
  double T = 30.0;
  double t_max = 0.0;   // 0: max(4T, 200)
  double M = 0.0;       // 0: 2 sup t^2 |F0|
  double tol = 1e-12;
  int max_iter = 200;
  int max_escalations = 4;
  double panel_scale = 1.0;  // < 1 refines the grid

  /// Fills defaults and throws DomainError when inadmissible.
  EtaSpaceConfig resolved() const;
};

struct EtaSolution {
  ProblemSpec problem;
  EtaSpaceConfig config;  // effective values (after escalation, M filled in)
  PanelGrid panels;       // extends past t_max to absorb truncation
  std::vector<double> grid;
  std::vector<double> eta;
  std::vector<double> eta_t;
  int iterations = 0;
  std::vector<double> defects;
  std::vector<double> ratios;
  double final_defect = 0.0;
  double forcing_bound = 0.0;  // sup t^2 |F0|
  double sup_weighted_eta = 0.0;
  double sup_weighted_eta_t = 0.0;
  double tail_bound = 0.0;
  int escalations = 0;

  /// Number of leading grid nodes with t <= t_max.
  std::size_t exposed_size() const;
  double eta_at(double t) const { return panels.interpolate(eta, t); }
  double eta_t_at(double t) const { return panels.interpolate(eta_t, t); }
  double max_ratio() const;
};

/// Picard iteration from eta_0 = 0. When a defect ratio reaches 1, the
/// iteration stalls, or the solution leaves the M-ball, T is doubled (up to
/// max_escalations times). Throws ConvergenceError if that does not help.
EtaSolution picard_solve(const ProblemSpec& p, const EtaSpaceConfig& cfg);

/// eta_t = -int_t^inf e^{-(n-2)(s-t)} g(s) ds with g = -2(n-2) eta - F(t, eta),
/// recomputed on the solution grid.
std::vector<double> eta_derivative(const EtaSolution& sol);

}  // namespace gelfand::fixedpoint
