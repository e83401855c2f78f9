// ibd: classify, simulate and verify interacting birth-and-death processes.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ibd/harness/commands.hpp"
#include "ibd/harness/experiment.hpp"

namespace {

using ibd::harness::ExperimentSpec;

struct Flags {
  std::string config;
  std::optional<std::string> graph;
  std::optional<double> alpha, beta;
  std::optional<std::uint64_t> steps, seed, thin, window;
  std::optional<double> time;
  std::optional<std::size_t> replicas;
  std::optional<std::int64_t> cap;
  std::optional<std::string> out, chain, initial;
  bool quick = false;
  bool proxy = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "flat key=value file; flags override it");
  cmd->add_option("--graph", f.graph, "single | path:n | cycle:n | star:n | complete:n | torus:L:d | edges:<file>");
  cmd->add_option("--alpha", f.alpha, "self-interaction parameter");
  cmd->add_option("--beta", f.beta, "neighbour-interaction parameter");
  cmd->add_option("--seed", f.seed, "random seed");
}

ExperimentSpec resolve(const Flags& f) {
  ExperimentSpec spec;
  if (!f.config.empty()) ibd::harness::apply_config(ibd::harness::load_config(f.config), spec);
  if (f.graph) spec.graph = *f.graph;
  if (f.alpha) spec.alpha = *f.alpha;
  if (f.beta) spec.beta = *f.beta;
  if (f.steps) spec.steps = *f.steps;
  if (f.time) spec.time = *f.time;
  if (f.seed) spec.seed = *f.seed;
  if (f.thin) spec.thin = *f.thin;
  if (f.window) spec.window = *f.window;
  if (f.replicas) spec.replicas = *f.replicas;
  if (f.cap) spec.cap = *f.cap;
  if (f.out) spec.out = *f.out;
  if (f.chain) spec.chain = ibd::harness::parse_chain(*f.chain);
  if (f.initial) spec.initial = *f.initial;
  if (f.quick) spec.quick = true;
  if (f.proxy) spec.explosion_proxy = true;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally interacting birth-and-death processes on finite graphs"};
  app.require_subcommand(1);
  Flags f;

  auto* classify = app.add_subcommand("classify", "print the regime report as JSON");
  add_common(classify, f);

  auto* simulate = app.add_subcommand("simulate", "run the chain; write trajectory CSV and summary JSON");
  add_common(simulate, f);
  simulate->add_option("--steps", f.steps, "number of jumps");
  simulate->add_option("--time", f.time, "continuous-time horizon (ctmc)");
  simulate->add_option("--replicas", f.replicas, "independent replicas");
  simulate->add_option("--chain", f.chain, "dtmc | ctmc")->check(CLI::IsMember({"dtmc", "ctmc", "DTMC", "CTMC"}));
  simulate->add_option("--initial", f.initial, "comma-separated initial spins (default all zero)");
  simulate->add_option("--thin", f.thin, "record every k-th event");
  simulate->add_option("--window", f.window, "detector window (default: second half of --steps)");
  simulate->add_flag("--explosion-proxy", f.proxy, "stop when the explosion proxy triggers");
  simulate->add_option("--out", f.out, "output directory");

  auto* stationary = app.add_subcommand("stationary-check", "compare CTMC occupancy with the truncated Gibbs law");
  add_common(stationary, f);
  stationary->add_option("--steps", f.steps, "number of CTMC events (default 1e6)");
  stationary->add_option("--cap", f.cap, "truncation cap N");
  stationary->add_option("--out", f.out, "directory for distribution.csv");
  double tolerance = 0.02;
  stationary->add_option("--tolerance", tolerance, "TV pass threshold");

  auto* drift = app.add_subcommand("drift-check", "exhaustive Lyapunov drift scan");
  add_common(drift, f);
  std::string kind;
  ibd::Spin smin = 0, smax = 0;
  drift->add_option("--kind", kind, "gq | s | two-step | star-f | quarter-plane")->required();
  drift->add_option("--smin", smin, "lower end of the shell");
  drift->add_option("--smax", smax, "upper end of the shell (box side for star-f)")->required();

  auto* suite = app.add_subcommand("suite", "run a verification suite");
  std::string suite_name;
  suite->add_option("name", suite_name, "identities | drift | limits | oracle")->required();
  suite->add_flag("--quick", f.quick, "reduced replicas and steps, wider tolerances");
  suite->add_option("--out", f.out, "directory for the deterministic report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ibd::harness::kUsage;
  }

  ExperimentSpec spec;
  try {
    spec = resolve(f);
  } catch (const ibd::harness::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ibd::harness::kIo;
  } catch (const ibd::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ibd::harness::kUsage;
  }

  if (*classify) return ibd::harness::cmd_classify(spec, std::cout, std::cerr);
  if (*simulate) return ibd::harness::cmd_simulate(spec, std::cout, std::cerr);
  if (*stationary) return ibd::harness::cmd_stationary_check(spec, std::cout, std::cerr, tolerance);
  if (*drift) return ibd::harness::cmd_drift_check(spec, kind, smin, smax, std::cout, std::cerr);
  return ibd::harness::cmd_suite(suite_name, spec.quick, spec.out, std::cout, std::cerr);
}
