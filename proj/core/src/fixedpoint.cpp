#include "gelfand/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gelfand/error.hpp"
#include "gelfand/iterexp.hpp"
#include "gelfand/numeric.hpp"

namespace gelfand::fixedpoint {

using numeric::expm1_minus_x;

PhiValues phi_m1(int n, double t) {
  if (!(t > 1.0)) throw DomainError("phi_m1: requires t > 1");
  const double lt = std::log(t);
  const double q = 2.0 * t + lt;
  const double phi = std::log((n - 2) / t) + std::log1p(lt / (2.0 * t));
  const double phi_t = -2.0 / t + (2.0 + 1.0 / t) / q;
  const double a = 2.0 + 1.0 / t;
  const double phi_tt = 2.0 / (t * t) + (-q / (t * t) - a * a) / (q * q);
  return {phi, phi_t, phi_tt};
}

PhiValues phi_m(int n, int m, double t) {
  if (m < 2) throw DomainError("phi_m: requires m >= 2");
  const double y = 2.0 * t;
  const auto d = iterexp::h_derivatives(m, y);
  double sum = 0.0;
  double h = y;
  for (int k = 1; k <= m; ++k) {
    h = std::log(h);
    sum += h;
  }
  const double r2 = d.d2 / d.d1;
  return {std::log(2.0 * (n - 2)) - sum, 2.0 * r2, 4.0 * (d.d3 / d.d1 - r2 * r2)};
}

ForcingParts forcing_parts_m1(int n, double t, double eta) {
  const PhiValues ph = phi_m1(n, t);
  const double psi = 2.0 * t + ph.phi;
  const double lt = std::log(t);
  const double exp_phi = (n - 2) / t * (1.0 + lt / (2.0 * t));
  const double f_t = (2.0 + ph.phi_t) / psi;
  const double f_tt = ph.phi_tt / psi - f_t * f_t;
  ForcingParts out;
  out.exp_phi = exp_phi;
  out.F0 = exp_phi + f_tt - (n - 2) * f_t;
  out.F1 = (n - 2) * lt / t + exp_phi * ph.phi;
  out.F2 = exp_phi * psi * expm1_minus_x(eta);
  out.F3 = exp_phi * expm1_minus_x(std::expm1(eta) * psi);
  return out;
}

double forcing_m1(int n, double t, double eta) {
  return forcing_parts_m1(n, t, eta).total(eta);
}

double tower_remainder(int m, double psi, double eta) {
  if (m < 1) throw DomainError("tower_remainder: requires m >= 1");
  // levels[k] = H_k(psi); G_j(H_m(psi)) = H_{m-j}(psi).
  std::vector<double> levels(m + 1);
  levels[0] = psi;
  for (int k = 1; k <= m; ++k) {
    if (!(levels[k - 1] > 0.0)) {
      throw DomainError("tower_remainder: H_" + std::to_string(k - 1) + "(psi) <= 0", k - 1);
    }
    levels[k] = std::log(levels[k - 1]);
  }
  double delta = eta;
  double rho = 0.0;
  for (int j = 1; j <= m; ++j) {
    const double gj = levels[m - j];
    rho = gj * (rho + expm1_minus_x(delta));
    delta = gj * std::expm1(delta);
  }
  return rho;
}

ForcingParts forcing_parts_m(int n, int m, double t, double eta) {
  const PhiValues ph = phi_m(n, m, t);
  const double psi = 2.0 * t + ph.phi;
  const auto at_psi = iterexp::h_derivatives(m, psi);
  const double h1_2t = iterexp::h_deriv(m, 1, 2.0 * t);
  const double exp_phi = 2.0 * (n - 2) * h1_2t;
  const double s = 2.0 + ph.phi_t;
  const double f_tt = at_psi.d2 * s * s + at_psi.d1 * ph.phi_tt;
  const double gap = h1_2t - at_psi.d1;

  ForcingParts out;
  out.exp_phi = exp_phi;
  out.F0 = 2.0 * (n - 2) * gap - (n - 2) * ph.phi_t * at_psi.d1 + f_tt;
  out.F1 = 2.0 * (n - 2) * gap / at_psi.d1;
  const double rho = tower_remainder(m, psi, eta);
  const double x = eta / at_psi.d1 + rho;
  out.F2 = exp_phi * (expm1_minus_x(x) + rho);
  return out;
}

double forcing_m(int n, int m, double t, double eta) {
  return forcing_parts_m(n, m, t, eta).total(eta);
}

Ansatz::Ansatz(ProblemSpec p) : p_(p) { p_.validate(); }

double Ansatz::t_lower() const {
  if (p_.oracle()) return -std::numeric_limits<double>::infinity();
  if (p_.m == 1) return 1.0;
  return std::max(1.0, iterexp::tower_lower(p_.m));
}

AnsatzValues Ansatz::base(double t) const {
  const int n = p_.n;
  if (p_.oracle()) return {2.0 * t + std::log(2.0 * (n - 2)), 2.0, 0.0};
  if (p_.m == 1) {
    const PhiValues ph = phi_m1(n, t);
    const double psi = 2.0 * t + ph.phi;
    const double f_t = (2.0 + ph.phi_t) / psi;
    return {std::log(psi), f_t, ph.phi_tt / psi - f_t * f_t};
  }
  const PhiValues ph = phi_m(n, p_.m, t);
  const double psi = 2.0 * t + ph.phi;
  const auto d = iterexp::h_derivatives(p_.m, psi);
  const double s = 2.0 + ph.phi_t;
  return {d.value, d.d1 * s, d.d2 * s * s + d.d1 * ph.phi_tt};
}

ForcingParts Ansatz::forcing_parts(double t, double eta) const {
  if (p_.oracle()) {
    ForcingParts out;
    out.exp_phi = 2.0 * (p_.n - 2);
    out.F2 = 2.0 * (p_.n - 2) * expm1_minus_x(eta);
    return out;
  }
  if (p_.m == 1) return forcing_parts_m1(p_.n, t, eta);
  return forcing_parts_m(p_.n, p_.m, t, eta);
}

// ---------------------------------------------------------------------------

PsiKernel::PsiKernel(int n) : n_(n) {
  if (n < 3) throw DomainError("PsiKernel: requires n >= 3");
  const double c = n - 2.0;
  if (n < 10) {
    mu_ = std::sqrt(c * (10.0 - n));
    const double a = 0.5 * c;
    const double b = 0.5 * *mu_;
    terms_.push_back({std::complex<double>(0.0, -1.0 / b), std::complex<double>(-a, b), 0});
    decay_ = a;
  } else if (n == 10) {
    roots_ = std::make_pair(4.0, 4.0);
    terms_.push_back({1.0, -4.0, 1});
    decay_ = 4.0;
  } else {
    const double disc = std::sqrt(c * (n - 10.0));
    const double lo = 0.5 * (c - disc);
    const double hi = 0.5 * (c + disc);
    roots_ = std::make_pair(lo, hi);
    terms_.push_back({1.0 / (hi - lo), -lo, 0});
    terms_.push_back({-1.0 / (hi - lo), -hi, 0});
    decay_ = lo;
  }
}

double PsiKernel::operator()(double tau) const {
  double s = 0.0;
  for (const auto& k : terms_) {
    s += std::real(k.coeff * std::pow(tau, k.power) * std::exp(k.rate * tau));
  }
  return s;
}

double PsiKernel::abs_integral() const {
  const double end = 60.0 / decay_;
  const int panels = 4000;
  const double h = end / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    sum += numeric::integrate_gl([this](double s) { return std::abs((*this)(s)); }, i * h,
                                 (i + 1) * h, 8);
  }
  return sum;
}

double PsiKernel::abs_tail_bound(double d) const {
  double s = 0.0;
  for (const auto& k : terms_) {
    const double alpha = -std::real(k.rate);
    const double e = std::exp(-alpha * d);
    const double c = std::abs(k.coeff);
    s += (k.power == 0) ? c * e / alpha : c * e * (d / alpha + 1.0 / (alpha * alpha));
  }
  return s;
}

double PsiKernel::max_panel_length() const {
  if (mu_) return std::numbers::pi / (2.0 * *mu_);
  return std::min(0.5, 2.0 / roots_->second);
}

PsiValue psi_apply(const PsiKernel& kernel, const std::function<double(double)>& forcing,
                   double t, double t_max, double tail_tol) {
  if (!(t_max > t)) return {0.0, 0.0};
  const double h_max = kernel.max_panel_length();
  const int panels = static_cast<int>(std::ceil((t_max - t) / h_max));
  const double h = (t_max - t) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    sum += numeric::integrate_gl([&](double s) { return kernel(s - t) * forcing(s); },
                                 t + i * h, t + (i + 1) * h, 20);
  }
  const double tail = std::abs(forcing(t_max)) * kernel.abs_tail_bound(t_max - t);
  if (tail > tail_tol) {
    throw ConvergenceError("psi_apply: truncation tail bound " + numeric::format_double(tail) +
                           " exceeds tolerance");
  }
  return {-sum, tail};
}

// ---------------------------------------------------------------------------

namespace {

// Barycentric weights of Chebyshev-Lobatto points (sign irrelevant after
// normalisation, ordering ascending).
std::vector<double> lobatto_bary_weights(int order) {
  std::vector<double> w(order + 1);
  for (int j = 0; j <= order; ++j) {
    w[j] = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == order) w[j] *= 0.5;
  }
  return w;
}

void lagrange_basis(const std::vector<double>& nodes, const std::vector<double>& bw, double x,
                    std::vector<double>& out) {
  out.assign(nodes.size(), 0.0);
  double den = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double d = x - nodes[j];
    if (d == 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      out[j] = 1.0;
      return;
    }
    out[j] = bw[j] / d;
    den += out[j];
  }
  for (auto& v : out) v /= den;
}

}  // namespace

PanelGrid::PanelGrid(double start, double end, double max_panel, int order)
    : start_(start), end_(end), order_(order) {
  if (!(end > start) || !(max_panel > 0.0) || order < 2) {
    throw DomainError("PanelGrid: invalid layout");
  }
  panels_ = std::max(1, static_cast<int>(std::ceil((end - start) / max_panel - 1e-9)));
  h_ = (end - start) / panels_;
  ref_ = numeric::chebyshev_lobatto(order);
  nodes_.reserve(static_cast<std::size_t>(panels_) * order + 1);
  for (int p = 0; p < panels_; ++p) {
    const double a = start + p * h_;
    for (int j = 0; j < order; ++j) nodes_.push_back(a + 0.5 * h_ * (1.0 + ref_[j]));
  }
  nodes_.push_back(end);
}

double PanelGrid::interpolate(std::span<const double> values, double t) const {
  if (values.size() != nodes_.size()) throw DomainError("PanelGrid: size mismatch");
  if (t < start_ || t > end_) {
    throw DomainError("PanelGrid: t = " + numeric::format_double(t) + " outside grid");
  }
  int p = static_cast<int>((t - start_) / h_);
  p = std::clamp(p, 0, panels_ - 1);
  const double a = start_ + p * h_;
  const double x = 2.0 * (t - a) / h_ - 1.0;
  static thread_local std::vector<double> basis;
  lagrange_basis(ref_, lobatto_bary_weights(order_), x, basis);
  double s = 0.0;
  const std::size_t off = static_cast<std::size_t>(p) * order_;
  for (int k = 0; k <= order_; ++k) s += basis[k] * values[off + k];
  return s;
}

ExpConvolution::ExpConvolution(const PanelGrid& grid, std::vector<KernelTerm> terms)
    : grid_(grid) {
  const int q = grid.order() + 1;
  const auto& ref = grid.reference();
  const auto bw = lobatto_bary_weights(grid.order());
  const double h = grid.panel_length();
  const auto& gl = numeric::gauss_legendre(24);
  std::vector<double> basis;
  for (const auto& term : terms) {
    if (term.power < 0 || term.power > 1) {
      throw DomainError("ExpConvolution: kernel powers 0 and 1 only");
    }
    Weights w;
    w.term = term;
    w.w0.assign(static_cast<std::size_t>(q) * q, 0.0);
    if (term.power == 1) w.w1.assign(static_cast<std::size_t>(q) * q, 0.0);
    w.decay.resize(q);
    for (int j = 0; j < q; ++j) {
      const double xj = ref[j];
      w.decay[j] = std::exp(term.rate * (0.5 * h * (1.0 - xj)));
      if (j == q - 1) continue;
      const double half = 0.5 * (1.0 - xj);
      const double mid = 0.5 * (1.0 + xj);
      for (std::size_t g = 0; g < gl.nodes.size(); ++g) {
        const double x = mid + half * gl.nodes[g];
        const double tau = 0.5 * h * (x - xj);
        const double jac = half * gl.weights[g] * 0.5 * h;
        const std::complex<double> e = std::exp(term.rate * tau) * jac;
        lagrange_basis(ref, bw, x, basis);
        for (int k = 0; k < q; ++k) {
          w.w0[j * q + k] += e * basis[k];
          if (term.power == 1) w.w1[j * q + k] += e * tau * basis[k];
        }
      }
    }
    weights_.push_back(std::move(w));
  }
}

std::vector<double> ExpConvolution::apply(std::span<const double> f) const {
  const auto& nodes = grid_.nodes();
  if (f.size() != nodes.size()) throw DomainError("ExpConvolution: size mismatch");
  const int order = grid_.order();
  const int q = order + 1;
  const double h = grid_.panel_length();
  const double end = grid_.end();
  const auto& ref = grid_.reference();
  std::vector<double> out(nodes.size(), 0.0);
  std::vector<std::complex<double>> j0(q), j1(q);

  for (const auto& w : weights_) {
    const std::complex<double> r = w.term.rate;
    const double fe = f.back();
    // Tail model f(s) ~ fe (end/s)^2 ~ fe (1 - 2 tau/end).
    std::complex<double> b0 = fe * (-1.0 / r - 2.0 / (r * r * end));
    std::complex<double> b1 = fe * (1.0 / (r * r) + 4.0 / (r * r * r * end));
    for (int p = grid_.panels() - 1; p >= 0; --p) {
      const std::size_t off = static_cast<std::size_t>(p) * order;
      for (int j = 0; j < q; ++j) {
        std::complex<double> s0 = 0.0, s1 = 0.0;
        for (int k = 0; k < q; ++k) {
          s0 += w.w0[j * q + k] * f[off + k];
          if (w.term.power == 1) s1 += w.w1[j * q + k] * f[off + k];
        }
        const double d = 0.5 * h * (1.0 - ref[j]);
        j0[j] = s0 + w.decay[j] * b0;
        if (w.term.power == 1) j1[j] = s1 + w.decay[j] * (b1 + d * b0);
      }
      for (int j = 0; j < q; ++j) {
        const auto& val = (w.term.power == 1) ? j1[j] : j0[j];
        // The shared right endpoint was already written by panel p+1.
        if (j == q - 1 && p != grid_.panels() - 1) continue;
        out[off + j] += std::real(w.term.coeff * val);
      }
      b0 = j0[0];
      b1 = j1[0];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

EtaSpaceConfig EtaSpaceConfig::resolved() const {
  EtaSpaceConfig c = *this;
  if (c.t_max == 0.0) c.t_max = std::max(4.0 * c.T, 200.0);
  if (!(c.T >= 1.0)) throw DomainError("EtaSpaceConfig: T must be >= 1");
  if (!(c.t_max >= 4.0 * c.T)) throw DomainError("EtaSpaceConfig: t_max must be >= 4T");
  if (c.M < 0.0) throw DomainError("EtaSpaceConfig: M must be positive");
  if (!(c.tol > 0.0)) throw DomainError("EtaSpaceConfig: tol must be positive");
  if (c.max_iter < 1) throw DomainError("EtaSpaceConfig: max_iter must be >= 1");
  if (!(c.panel_scale > 0.0)) throw DomainError("EtaSpaceConfig: panel_scale must be positive");
  return c;
}

std::size_t EtaSolution::exposed_size() const {
  return static_cast<std::size_t>(
      std::upper_bound(grid.begin(), grid.end(), config.t_max * (1.0 + 1e-14)) - grid.begin());
}

double EtaSolution::max_ratio() const {
  return ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
}

namespace {

std::vector<KernelTerm> derivative_kernel(int n) {
  return {{-1.0, -static_cast<double>(n - 2), 0}};
}

struct Attempt {
  std::optional<EtaSolution> sol;
  std::string reason;
};

Attempt picard_attempt(const ProblemSpec& p, const EtaSpaceConfig& cfg) {
  const Ansatz ansatz(p);
  const PsiKernel kernel(p.n);
  if (cfg.T <= ansatz.t_lower()) return {std::nullopt, "T below ansatz domain"};

  const double pad = 40.0 / kernel.decay_rate();
  EtaSolution sol;
  sol.problem = p;
  sol.config = cfg;
  sol.panels = PanelGrid(cfg.T, cfg.t_max + pad, kernel.max_panel_length() * cfg.panel_scale);
  sol.grid = sol.panels.nodes();
  const auto& t = sol.grid;
  const std::size_t N = t.size();

  double A = 0.0;
  for (double tj : t) A = std::max(A, tj * tj * std::abs(ansatz.forcing_parts(tj, 0.0).F0));
  sol.forcing_bound = A;
  if (sol.config.M == 0.0) sol.config.M = (A > 0.0) ? 2.0 * A : 1.0;

  const ExpConvolution conv(sol.panels, kernel.terms());
  std::vector<double> eta(N, 0.0), F(N);
  bool converged = false;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    try {
      for (std::size_t j = 0; j < N; ++j) F[j] = ansatz.forcing(t[j], eta[j]);
    } catch (const DomainError& e) {
      return {std::nullopt, std::string("forcing left its domain: ") + e.what()};
    }
    std::vector<double> next = conv.apply(F);
    double defect = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      next[j] = -next[j];
      if (!std::isfinite(next[j])) return {std::nullopt, "non-finite iterate"};
      defect = std::max(defect, t[j] * t[j] * std::abs(next[j] - eta[j]));
    }
    eta.swap(next);
    sol.iterations = it;
    if (!sol.defects.empty()) {
      const double ratio = defect / sol.defects.back();
      sol.ratios.push_back(ratio);
      sol.defects.push_back(defect);
      if (!(ratio < 1.0) && defect > cfg.tol) {
        return {std::nullopt, "defect ratio " + numeric::format_double(ratio) + " >= 1"};
      }
    } else {
      sol.defects.push_back(defect);
    }
    if (defect <= cfg.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) return {std::nullopt, "iteration cap reached"};
  sol.final_defect = sol.defects.back();
  sol.eta = std::move(eta);

  const std::size_t exposed = sol.exposed_size();
  for (std::size_t j = 0; j < exposed; ++j) {
    sol.sup_weighted_eta = std::max(sol.sup_weighted_eta, t[j] * t[j] * std::abs(sol.eta[j]));
  }
  if (sol.sup_weighted_eta > sol.config.M) return {std::nullopt, "iterate left the M-ball"};

  sol.eta_t = eta_derivative(sol);
  for (std::size_t j = 0; j < exposed; ++j) {
    sol.sup_weighted_eta_t =
        std::max(sol.sup_weighted_eta_t, t[j] * t[j] * std::abs(sol.eta_t[j]));
  }
  const double end = sol.panels.end();
  const double f_end = std::abs(ansatz.forcing(end, sol.eta.back()));
  sol.tail_bound = cfg.t_max * cfg.t_max * f_end * kernel.abs_tail_bound(end - cfg.t_max);
  return {std::move(sol), {}};
}

}  // namespace

EtaSolution picard_solve(const ProblemSpec& p, const EtaSpaceConfig& cfg_in) {
  p.validate();
  EtaSpaceConfig cfg = cfg_in.resolved();
  std::string last;
  for (int esc = 0; esc <= cfg.max_escalations; ++esc) {
    Attempt a = picard_attempt(p, cfg);
    if (a.sol) {
      a.sol->escalations = esc;
      return std::move(*a.sol);
    }
    last = a.reason;
    cfg.T *= 2.0;
    cfg.t_max = std::max(cfg.t_max, 4.0 * cfg.T);
  }
  throw ConvergenceError("picard_solve (" + p.describe() + "): " + last);
}

std::vector<double> eta_derivative(const EtaSolution& sol) {
  const Ansatz ansatz(sol.problem);
  const int n = sol.problem.n;
  std::vector<double> g(sol.grid.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    g[j] = -2.0 * (n - 2) * sol.eta[j] - ansatz.forcing(sol.grid[j], sol.eta[j]);
  }
  const ExpConvolution conv(sol.panels, derivative_kernel(n));
  return conv.apply(g);
}

}  // namespace gelfand::fixedpoint
