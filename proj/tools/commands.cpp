#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <json.hpp>

#include "gelfand/asymptotics.hpp"
#include "gelfand/bifurcation.hpp"
#include "gelfand/error.hpp"
#include "gelfand/iterexp.hpp"
#include "gelfand/numeric.hpp"
#include "gelfand/shooting.hpp"
#include "gelfand/verify.hpp"

namespace gelfand::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using numeric::format_double;

namespace {

constexpr int kGateFailed = 2;

void prepare_out(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_json(const fs::path& path, const json& j) {
  io::write_atomic(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

shooting::SingularSolution load_singular(const RunConfig& cfg) {
  const fs::path meta_path = cfg.lambda_star;
  io::KeyValue meta;
  try {
    meta = io::KeyValue::load(meta_path);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--lambda-star: ") + e.what());
  }
  for (const char* key : {"lambda_star", "t_star", "n", "m", "oracle_gelfand"}) {
    if (!meta.contains(key)) {
      throw UsageError("--lambda-star: " + meta_path.string() + " lacks '" + key + "'");
    }
  }
  if (meta.get_int("n") != cfg.n || meta.get_int("m") != cfg.m ||
      (meta.get("oracle_gelfand") == "true") != cfg.oracle) {
    throw UsageError("--lambda-star: singular run was made for a different problem");
  }
  shooting::SingularSolution s;
  s.problem = cfg.problem();
  s.lambda_star = meta.get_double("lambda_star");
  s.t_star = meta.get_double("t_star");
  const fs::path csv = meta_path.parent_path() / "profile_log.csv";
  std::ifstream in(csv);
  if (!in) throw UsageError("--lambda-star: cannot open " + csv.string());
  s.profile = transform::read_log_profile_csv(in);
  return s;
}

}  // namespace

int cmd_iterexp_eval(const IterexpQuery& q) {
  if (q.m < 0) throw UsageError("m must be >= 0");
  if (q.values.empty()) throw UsageError("iterexp eval: no values given");
  json rows = json::array();
  for (double y : q.values) {
    json row{{"y", y}, {"m", q.m}};
    const auto g = iterexp::g_derivatives(q.m, y);
    row["G"] = g.value ? number(*g.value) : json("overflow");
    row["G_1"] = g.d1 ? number(*g.d1) : json("overflow");
    row["G_2"] = g.d2 ? number(*g.d2) : json("overflow");
    row["G_3"] = g.d3 ? number(*g.d3) : json("overflow");
    try {
      const auto h = iterexp::h_derivatives(q.m, y);
      row["H"] = number(h.value);
      row["H_1"] = number(h.d1);
      row["H_2"] = number(h.d2);
      row["H_3"] = number(h.d3);
    } catch (const DomainError& e) {
      row["H"] = "undefined at level " + std::to_string(e.level());
    }
    row["f_tail"] = number(iterexp::f_tail(y));
    row["log_f_tail"] = number(iterexp::log_f_tail(y));
    rows.push_back(std::move(row));
  }
  std::cout << rows.dump(2) << '\n';
  return 0;
}

int cmd_singular(const RunConfig& cfg) {
  const ProblemSpec p = cfg.problem();
  prepare_out(cfg.out);
  const auto sol = shooting::build_singular(p, cfg.eta_config());

  io::write_atomic(cfg.out / "profile_log.csv",
                   [&](std::ostream& os) { transform::write_csv(os, sol.profile); });
  io::write_atomic(cfg.out / "profile_radial.csv",
                   [&](std::ostream& os) { transform::write_csv(os, sol.radial()); });
  io::write_atomic(cfg.out / "eta.csv", [&](std::ostream& os) {
    os << "t,eta,eta_t\n";
    for (std::size_t j = 0; j < sol.eta.exposed_size(); ++j) {
      os << format_double(sol.eta.grid[j]) << ',' << format_double(sol.eta.eta[j]) << ','
         << format_double(sol.eta.eta_t[j]) << '\n';
    }
  });

  io::KeyValue meta = cfg.to_key_value();
  meta.set("problem", p.describe());
  meta.set("lambda_star", sol.lambda_star);
  meta.set("t_star", sol.t_star);
  meta.set("t_hand", sol.t_hand);
  meta.set("residual", sol.residual);
  meta.set("monotone", sol.monotone);
  meta.set("ode_steps", static_cast<long long>(sol.ode_steps));
  meta.set("corrector", std::string("picard"));
  meta.set("corrector_T", sol.eta.config.T);
  meta.set("corrector_t_max", sol.eta.config.t_max);
  meta.set("corrector_M", sol.eta.config.M);
  meta.set("corrector_iterations", sol.eta.iterations);
  meta.set("corrector_escalations", sol.eta.escalations);
  meta.set("corrector_final_defect", sol.eta.final_defect);
  meta.set("corrector_max_ratio", sol.eta.max_ratio());
  meta.set("corrector_sup_weighted_eta", sol.eta.sup_weighted_eta);
  meta.set("corrector_sup_weighted_eta_t", sol.eta.sup_weighted_eta_t);
  meta.set("corrector_forcing_bound", sol.eta.forcing_bound);
  meta.set("corrector_tail_bound", sol.eta.tail_bound);
  io::write_atomic(cfg.out / "meta.txt", [&](std::ostream& os) { meta.write(os); });

  std::cout << "lambda_star = " << format_double(sol.lambda_star)
            << "\nt_star = " << format_double(sol.t_star)
            << "\nresidual = " << format_double(sol.residual) << '\n';
  return 0;
}

int cmd_bifurcation(const RunConfig& cfg, std::vector<double> intersection_rho) {
  const ProblemSpec p = cfg.problem();
  if (!(cfg.rho_max > 1e-3)) throw UsageError("empty rho grid (rho_max must exceed 1e-3)");
  const auto grid = bifurcation::default_rho_grid(cfg.rho_max, cfg.rho_step);
  if (grid.size() < 3) throw UsageError("empty rho grid");
  if (grid.back() > bifurcation::max_safe_rho(p)) {
    throw UsageError("rho_max beyond the representable range for this m (max " +
                     format_double(bifurcation::max_safe_rho(p)) + ")");
  }

  std::optional<shooting::SingularSolution> singular;
  std::optional<double> lambda_ref;
  if (!cfg.lambda_star.empty()) {
    singular = load_singular(cfg);
    lambda_ref = singular->lambda_star;
  } else if (p.oracle()) {
    lambda_ref = 2.0 * (p.n - 2);
  }
  prepare_out(cfg.out);

  const auto curve = bifurcation::trace_curve(p, grid, lambda_ref);
  std::vector<int> flag(curve.points.size(), 0);
  for (const auto& tp : curve.turning_points) {
    auto it = std::min_element(curve.points.begin(), curve.points.end(),
                               [&](const auto& a, const auto& b) {
                                 return std::abs(a.rho - tp.rho) < std::abs(b.rho - tp.rho);
                               });
    flag[static_cast<std::size_t>(it - curve.points.begin())] = 1;
  }
  io::write_atomic(cfg.out / "curve.csv", [&](std::ostream& os) {
    os << "rho,lambda,R,turning_flag\n";
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      const auto& pt = curve.points[i];
      os << format_double(pt.rho) << ',' << format_double(pt.lambda) << ','
         << format_double(pt.R) << ',' << flag[i] << '\n';
    }
  });
  io::write_atomic(cfg.out / "turning_points.csv", [&](std::ostream& os) {
    os << "rho,lambda,offset\n";
    for (const auto& tp : curve.turning_points) {
      os << format_double(tp.rho) << ',' << format_double(tp.lambda) << ','
         << (tp.offset ? format_double(*tp.offset) : std::string()) << '\n';
    }
  });

  if (singular) {
    if (intersection_rho.empty()) {
      for (int r = 1; r <= static_cast<int>(std::floor(cfg.rho_max)); ++r) {
        intersection_rho.push_back(r);
      }
    }
    std::vector<std::pair<double, int>> counts;
    for (double rho : intersection_rho) {
      if (!(rho > 0.0) || rho > bifurcation::max_safe_rho(p)) {
        throw UsageError("intersection rho out of range: " + format_double(rho));
      }
      const auto pt = bifurcation::shoot_regular(p, rho);
      counts.emplace_back(rho, bifurcation::intersection_count(p, pt, *singular));
    }
    io::write_atomic(cfg.out / "intersections.csv", [&](std::ostream& os) {
      os << "rho,count\n";
      for (const auto& [rho, c] : counts) os << format_double(rho) << ',' << c << '\n';
    });
  }

  std::cout << "points = " << curve.points.size()
            << "\nturning_points = " << curve.turning_points.size() << '\n';
  return 0;
}

namespace {

struct SuiteResult {
  json summary;
  bool pass = false;
};

void write_report(const fs::path& path, const std::vector<asymptotics::ExpansionReport>& rows) {
  io::write_atomic(path, [&](std::ostream& os) {
    os << "label,t_lo,t_hi,order,weighted_sup,empirical_slope\n";
    for (const auto& r : rows) {
      os << r.label << ',' << format_double(r.t_lo) << ',' << format_double(r.t_hi) << ','
         << format_double(r.order) << ',' << format_double(r.weighted_sup) << ','
         << format_double(r.empirical_slope) << '\n';
    }
  });
}

json report_json(const asymptotics::ExpansionReport& r) {
  return {{"label", r.label},       {"t_lo", r.t_lo},
          {"t_hi", r.t_hi},         {"order", r.order},
          {"weighted_sup", number(r.weighted_sup)},
          {"empirical_slope", number(r.empirical_slope)}};
}

SuiteResult run_asymptotics(const RunConfig& cfg) {
  using namespace asymptotics;
  const ProblemSpec p = cfg.problem();
  if (p.oracle()) throw UsageError("verify asymptotics: not defined in oracle mode");
  auto eta_cfg = cfg.eta_config();
  if (eta_cfg.t_max == 0.0) eta_cfg.t_max = 8.0 * eta_cfg.T;  // room for the doubled window
  const auto sol = shooting::build_singular(p, eta_cfg);
  const double T = sol.eta.config.T;
  const double lo = T + 5.0;
  const double hi = 4.0 * T;
  if (2.0 * hi > sol.profile.t_max()) {
    throw UsageError("verify asymptotics: t_max must be at least 8T");
  }
  const int n = p.n;
  const int m = p.m;

  std::vector<ExpansionReport> rows;
  json gates = json::object();
  bool pass = true;
  auto stable = [&](const std::string& name, const WindowStability& ws) {
    rows.push_back(ws.base);
    rows.push_back(ws.doubled);
    const bool ok = std::isfinite(ws.growth()) && ws.growth() <= kStabilityFactor;
    gates[name] = {{"growth", number(ws.growth())}, {"limit", kStabilityFactor}, {"pass", ok}};
    return ok;
  };

  if (m == 1) {
    pass &= stable("w_ansatz_stable",
                   window_stability("w_ansatz", sol.profile,
                                    [n](double t) { return expansion_w_m1(n, t, Depth::ansatz); },
                                    2.0, lo, hi));
    const auto four = window_stability(
        "w_four_term", sol.profile,
        [n](double t) { return expansion_w_m1(n, t, Depth::four_term); }, 2.0, lo, hi);
    rows.push_back(four.base);
    rows.push_back(four.doubled);
    const bool slope_ok = std::abs(four.base.empirical_slope + 2.0) <= 0.3;
    gates["w_four_term_slope"] = {{"slope", number(four.base.empirical_slope)},
                              {"target", -2.0},
                              {"tolerance", 0.3},
                              {"pass", slope_ok}};
    pass &= slope_ok;
    pass &= stable("grad_two_term_stable",
                   window_stability("grad_two_term", sol.profile, expansion_grad_m1_scaled, 2.0, lo, hi,
                                    Quantity::abs_w_t));
  } else {
    pass &= stable("grad_tower_stable",
                   window_stability(
                       "grad_tower", sol.profile,
                       [n, m](double t) {
                         const double phi = fixedpoint::phi_m(n, m, t).phi;
                         return 2.0 * iterexp::h_deriv(m, 1, 2.0 * t + phi);
                       },
                       2.0, lo, hi, Quantity::abs_w_t));
    const auto lead = window_stability(
        "grad_tower_leading", sol.profile,
        [m](double t) { return expansion_grad_m_scaled(m, t); }, 2.0, lo, hi,
        Quantity::abs_w_t);
    rows.push_back(lead.base);
    rows.push_back(lead.doubled);
    const auto am = window_stability(
        "w_tower", sol.profile, [n, m](double t) { return expansion_w_m(n, m, t); }, 0.0, lo,
        hi);
    rows.push_back(am.base);
    rows.push_back(am.doubled);
  }

  write_report(cfg.out / "asymptotics_report.csv", rows);
  json reports = json::array();
  for (const auto& r : rows) reports.push_back(report_json(r));
  json s{{"suite", "asymptotics"},
         {"problem", p.describe()},
         {"lambda_star", sol.lambda_star},
         {"window", {lo, hi}},
         {"reports", reports},
         {"gates", gates},
         {"pass", pass}};
  return {s, pass};
}

SuiteResult run_miyamoto(const RunConfig& cfg) {
  const ProblemSpec p = cfg.problem();
  if (p.oracle() || p.m != 1) throw UsageError("verify miyamoto: requires m = 1, tower mode");
  const auto sol = shooting::build_singular(p, cfg.eta_config());
  const auto trace = verify::equivalence_report(sol, cfg.eps);
  io::write_atomic(cfg.out / "miyamoto_trace.csv", [&](std::ostream& os) {
    os << "t,x_star,y_star\n";
    for (const auto& s : trace.samples) {
      os << format_double(s.t) << ',' << format_double(s.x_star) << ','
         << format_double(s.y_star) << '\n';
    }
  });

  // F-characterized profile against w* at a few points of the corrector window.
  json gap = json::array();
  const double T = sol.eta.config.T;
  const double t_end = sol.profile.t_max();
  for (double t = T; t <= t_end * (1 + 1e-12); t *= 2.0) {
    const auto s = sol.profile.at(std::min(t, t_end));
    gap.push_back({{"t", s.t},
                   {"U_minus_w", verify::miyamoto_profile_log(p.n, s.t) - s.w},
                   {"t_w_t", s.t * s.w_t},
                   {"t_scaled_source", number(verify::scaled_source(s.t, s.w))}});
  }

  json s{{"suite", "miyamoto"},
         {"problem", p.describe()},
         {"lambda_star", sol.lambda_star},
         {"eps", trace.eps_window},
         {"gate", trace.eps_window / 10.0},
         {"tail_start", trace.tail_start},
         {"tail_sup", number(trace.tail_sup)},
         {"x_decreasing", trace.x_decreasing},
         {"y_decreasing", trace.y_decreasing},
         {"profile_gap", gap},
         {"pass", trace.pass}};
  return {s, trace.pass};
}

SuiteResult run_iterexp(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  constexpr int kSamples = 200;
  bool pass = true;
  json checks = json::object();

  // H_m(G_m(y)) = y
  {
    double worst = 0.0;
    const std::pair<double, double> range[] = {{-20.0, 20.0}, {-5.0, 5.0}, {-3.0, 1.8}};
    for (int m = 1; m <= 3; ++m) {
      std::uniform_real_distribution<double> d(range[m - 1].first, range[m - 1].second);
      for (int i = 0; i < kSamples; ++i) {
        const double y = d(rng);
        worst = std::max(worst, std::abs(iterexp::h_tower(m, *iterexp::g_tower(m, y)) - y));
      }
    }
    const bool ok = worst <= 1e-12;
    checks["roundtrip"] = {{"max_error", worst}, {"limit", 1e-12}, {"pass", ok}};
    pass &= ok;
  }

  // Derivative identities against central differences.
  {
    double worst = 0.0;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    auto central = [](const std::function<double(double)>& f, double x) {
      const double h = 1e-4 * std::max(1.0, std::abs(x));
      return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
    };
    for (int m = 1; m <= 3; ++m) {
      std::uniform_real_distribution<double> dh(m == 1 ? 0.5 : 20.0, 400.0);
      std::uniform_real_distribution<double> dg(-3.0, m == 1 ? 5.0 : 1.5);
      for (int i = 0; i < kSamples / 4; ++i) {
        const double t = dh(rng);
        const auto h = iterexp::h_derivatives(m, t);
        worst = std::max(worst, rel(central([m](double x) { return iterexp::h_tower(m, x); }, t), h.d1));
        worst = std::max(worst, rel(central([m](double x) { return iterexp::h_deriv(m, 1, x); }, t), h.d2));
        worst = std::max(worst, rel(central([m](double x) { return iterexp::h_deriv(m, 2, x); }, t), h.d3));
        const double y = dg(rng);
        const auto g = iterexp::g_derivatives(m, y);
        worst = std::max(worst, rel(central([m](double x) { return *iterexp::g_tower(m, x); }, y), *g.d1));
        worst = std::max(worst, rel(central([m](double x) { return *iterexp::g_deriv(m, 1, x); }, y), *g.d2));
        worst = std::max(worst, rel(central([m](double x) { return *iterexp::g_deriv(m, 2, x); }, y), *g.d3));
      }
    }
    const bool ok = worst <= 1e-6;
    checks["derivatives"] = {{"max_relative_error", worst}, {"limit", 1e-6}, {"pass", ok}};
    pass &= ok;
  }

  // f_tail(0) against quadrature of exp(-e^s) on (0, inf).
  {
    boost::math::quadrature::exp_sinh<double> q;
    const double ref = q.integrate([](double s) { return std::exp(-std::exp(s)); });
    const double err = std::abs(iterexp::f_tail(0.0) - ref);
    const bool ok = err <= 1e-8;
    checks["f_tail_0"] = {{"value", iterexp::f_tail(0.0)}, {"quadrature", ref}, {"error", err},
                          {"limit", 1e-8}, {"pass", ok}};
    pass &= ok;
  }

  // f_tail(t) exp(t + e^t) -> 1 from below.
  {
    const double t = 5.0;
    const double v = std::exp(iterexp::log_f_tail(t) + t + std::exp(t));
    const bool ok = v >= 0.99 && v <= 1.0;
    checks["f_tail_limit"] = {{"t", t}, {"value", v}, {"interval", {0.99, 1.0}}, {"pass", ok}};
    pass &= ok;
  }

  json s{{"suite", "iterexp"}, {"seed", cfg.seed}, {"checks", checks}, {"pass", pass}};
  return {s, pass};
}

}  // namespace

int cmd_verify(const RunConfig& cfg, Suite suite) {
  prepare_out(cfg.out);
  std::vector<std::pair<std::string, SuiteResult (*)(const RunConfig&)>> todo;
  if (suite == Suite::asymptotics || suite == Suite::all) todo.emplace_back("asymptotics", run_asymptotics);
  if (suite == Suite::miyamoto || (suite == Suite::all && cfg.m == 1 && !cfg.oracle)) {
    todo.emplace_back("miyamoto", run_miyamoto);
  }
  if (suite == Suite::iterexp || suite == Suite::all) todo.emplace_back("iterexp", run_iterexp);

  bool pass = true;
  for (const auto& [name, run] : todo) {
    if (suite == Suite::all && name == "asymptotics" && cfg.oracle) continue;
    const SuiteResult r = run(cfg);
    write_json(cfg.out / (name + ".json"), r.summary);
    std::cout << r.summary.dump() << '\n';
    pass &= r.pass;
  }
  return pass ? 0 : kGateFailed;
}

}  // namespace gelfand::cli
