#include <cstdint>
#include <exception>
#include <iostream>
#include <new>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "erwlab/cli/commands.hpp"
#include "erwlab/cli/config.hpp"
#include "erwlab/errors.hpp"

namespace {

using erwlab::cli::RunConfig;

struct Flags {
  RunConfig cfg;
  double rho = 1.0;
  std::string config_path;
  bool dump_config = false;
};

void add_flags(CLI::App* s, Flags& f) {
  RunConfig& c = f.cfg;
  s->add_option("--p", c.p, "memory parameter in (0, 1]")->capture_default_str();
  s->add_option("--q", c.q, "first-step probability in (0, 1]")->capture_default_str();
  s->add_option("--steps", c.steps,
                "step law: constant | exponential[:rate] | lognormal:sd | twopoint:lo:hi:w | twopoint-sd:sd:w | pareto:shape")
      ->capture_default_str();
  s->add_option("--n", c.n, "number of steps (n_max for lil)")->capture_default_str();
  s->add_option("--grid", c.grid, "n grid: start:stop:x<factor> or a comma list")->capture_default_str();
  s->add_option("--m", c.m, "replica count")->capture_default_str();
  s->add_option("--seed", c.seed, "master seed")->capture_default_str();
  s->add_option("--out", c.out, "output path; stdout when empty or -")->capture_default_str();
  s->add_option("--format", c.format, "csv | json; empty picks csv for tables, json for reports")->capture_default_str();
  s->add_option("--metric", c.metric, "kolmogorov | wasserstein | zeta1 | zeta2")->capture_default_str();
  s->add_option("--r", c.r, "wasserstein order in (0, 2]")->capture_default_str();
  s->add_option("--rho", f.rho, "moment order of the step law (default: largest admissible)");
  s->add_option("--alpha", c.alpha, "confidence level of the DKW band")->capture_default_str();
  s->add_option("--mode", c.mode, "exact | mc")->capture_default_str();
  s->add_option("--threads", c.threads, "worker cap; 0 uses ERWLAB_THREADS or all cores")->capture_default_str();
  s->add_option("--simulator", c.simulator, "literal | collapsed")->capture_default_str();
  s->add_option("--checkpoints", c.checkpoints, "geometric | dense")->capture_default_str();
  s->add_option("--per-doubling", c.per_doubling, "geometric checkpoints per doubling; 0: 2 for simulate, 8 for lil")
      ->capture_default_str();
  s->add_option("--n-traj", c.n_traj, "trajectories for lil")->capture_default_str();
  s->add_option("--burn-in", c.burn_in, "first n scanned by lil")->capture_default_str();
  s->add_option("--slack", c.slack, "multiplier on the lil bound")->capture_default_str();
  s->add_option("--config", f.config_path, "JSON run config; flags given explicitly override it");
  s->add_flag("--dump-config", f.dump_config, "print the effective config as JSON and exit");
}

std::string key_of(const CLI::Option* o) {
  std::string k = o->get_name();
  while (!k.empty() && k.front() == '-') k.erase(k.begin());
  for (char& ch : k)
    if (ch == '-') ch = '_';
  return k;
}

// Config file first, then every flag that was given on the command line.
RunConfig effective_config(const CLI::App* sub, Flags& f) {
  RunConfig& c = f.cfg;
  c.subcommand = sub->get_name();
  for (const CLI::Option* o : sub->get_options())
    if (o->count() > 0 && key_of(o) == "rho") c.rho = f.rho;
  if (f.config_path.empty()) return c;
  nlohmann::json base = erwlab::cli::load_config(f.config_path);
  const nlohmann::json given = c;
  base["subcommand"] = c.subcommand;
  if (sub->get_name() == "exact") base["target"] = c.target;
  for (const CLI::Option* o : sub->get_options()) {
    const std::string k = key_of(o);
    if (o->count() > 0 && given.contains(k)) base[k] = given[k];
  }
  return base.get<RunConfig>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elephant random walk with random step sizes: simulation, exact laws and rate experiments"};
  app.require_subcommand(1);
  Flags f;
  std::vector<CLI::App*> subs;
  subs.push_back(app.add_subcommand("simulate", "one trajectory as checkpoint CSV n,T,S,H"));
  CLI::App* exact = app.add_subcommand("exact", "coefficients, exact law of T_n, or moment table");
  exact->add_option("target", f.cfg.target, "coeffs | dist | moments")->required();
  subs.push_back(exact);
  subs.push_back(app.add_subcommand("distance", "distance of the CLT statistic to N(0, 1)"));
  subs.push_back(app.add_subcommand("rates", "log-log rate fit over an n grid"));
  subs.push_back(app.add_subcommand("lil", "iterated-logarithm scan over many trajectories"));
  subs.push_back(app.add_subcommand("superdiffusive", "non-normality diagnostics for p > 3/4"));
  for (CLI::App* s : subs) add_flags(s, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(erwlab::ExitCode::config);
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    const RunConfig cfg = effective_config(sub, f);
    if (f.dump_config) {
      std::cout << erwlab::cli::config_to_text(cfg);
      return 0;
    }
    erwlab::cli::write_output(cfg, erwlab::cli::run_command(cfg));
  } catch (const erwlab::Error& e) {
    std::cerr << "erwlab: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    std::cerr << "erwlab: out of memory\n";
    return static_cast<int>(erwlab::ExitCode::budget);
  } catch (const std::exception& e) {
    std::cerr << "erwlab: " << e.what() << "\n";
    return static_cast<int>(erwlab::ExitCode::config);
  }
  return 0;
}
