#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "gelfand/error.hpp"

namespace {

using gelfand::cli::UsageError;

constexpr int kUsage = 1;
constexpr int kNumeric = 2;

// Run flags shared by the computing subcommands. Values are kept as raw
// strings so that an omitted flag can fall back to the config file.
struct RunFlags {
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> opts;
  std::string config_file;
  bool oracle = false;
  CLI::Option* oracle_opt = nullptr;

  void attach(CLI::App* app) {
    auto add = [&](const std::string& flag, const std::string& key, const std::string& help) {
      opts[key] = app->add_option(flag, raw[key], help);
    };
    add("--n", "n", "dimension (>= 3)");
    add("--m", "m", "tower height (>= 1)");
    oracle_opt = app->add_flag("--oracle-gelfand", oracle, "plain e^u nonlinearity");
    add("--T", "T", "start of the corrector window");
    add("--t-max", "t_max", "end of the corrector window (0: default)");
    add("--M", "M", "radius of the corrector ball (0: automatic)");
    add("--tol", "tol", "Picard defect tolerance");
    add("--rho-max", "rho_max", "largest rho on the branch grid");
    add("--rho-step", "rho_step", "linear rho spacing beyond rho = 1");
    add("--eps", "eps", "equivalence ball radius");
    add("--out", "out", "output directory");
    add("--lambda-star", "lambda_star_file", "meta.txt of a singular run (reference lambda*, u*)");
    add("--seed", "seed", "seed for property sampling");
    app->add_option("--config", config_file, "key = value config file");
  }

  gelfand::cli::RunConfig resolve() const {
    std::map<std::string, std::string> given;
    for (const auto& [key, opt] : opts) {
      if (opt->count() > 0) given[key] = raw.at(key);
    }
    if (oracle_opt->count() > 0) given["oracle_gelfand"] = "true";
    return gelfand::cli::resolve_config(given, config_file);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singular solutions and solution branches of -Lu = lambda exp(G_m(u))"};
  app.require_subcommand(1);

  auto* iterexp = app.add_subcommand("iterexp", "iterated exponentials and logarithms");
  iterexp->require_subcommand(1);
  auto* eval = iterexp->add_subcommand("eval", "G_m, H_m, derivatives and f_tail at points");
  gelfand::cli::IterexpQuery query;
  eval->add_option("--m", query.m, "tower height")->capture_default_str();
  eval->add_option("values", query.values, "evaluation points")->required();

  auto* singular = app.add_subcommand("singular", "singular solution");
  singular->require_subcommand(1);
  auto* construct = singular->add_subcommand("construct", "build (lambda*, u*)");
  RunFlags construct_flags;
  construct_flags.attach(construct);

  auto* bif = app.add_subcommand("bifurcation", "regular branch");
  bif->require_subcommand(1);
  auto* trace = bif->add_subcommand("trace", "trace lambda(rho), turning points, intersections");
  RunFlags trace_flags;
  trace_flags.attach(trace);
  std::vector<double> intersection_rho;
  trace->add_option("--intersection-rho", intersection_rho,
                    "rho values for intersection counts (default 1..floor(rho_max))");

  auto* verify = app.add_subcommand("verify", "verification suites");
  verify->require_subcommand(1);
  struct SuiteCmd {
    CLI::App* app;
    gelfand::cli::Suite suite;
    RunFlags flags;
  };
  std::vector<SuiteCmd> suites;
  suites.reserve(4);
  for (const auto& [name, suite] :
       {std::pair{"asymptotics", gelfand::cli::Suite::asymptotics},
        std::pair{"miyamoto", gelfand::cli::Suite::miyamoto},
        std::pair{"iterexp", gelfand::cli::Suite::iterexp},
        std::pair{"all", gelfand::cli::Suite::all}}) {
    suites.push_back({verify->add_subcommand(name, std::string("run the ") + name + " suite"),
                      suite, {}});
    suites.back().flags.attach(suites.back().app);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (eval->parsed()) return gelfand::cli::cmd_iterexp_eval(query);
    if (construct->parsed()) return gelfand::cli::cmd_singular(construct_flags.resolve());
    if (trace->parsed()) {
      return gelfand::cli::cmd_bifurcation(trace_flags.resolve(), intersection_rho);
    }
    for (const auto& s : suites) {
      if (s.app->parsed()) return gelfand::cli::cmd_verify(s.flags.resolve(), s.suite);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}
