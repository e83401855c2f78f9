#pragma once

// Subcommand bodies for the `ibd` tool. Each returns a process exit code and
// writes JSON to `out`, diagnostics to `err`.

#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <string>

#include <json.hpp>

#include "ibd/classify.hpp"
#include "ibd/exact.hpp"
#include "ibd/harness/experiment.hpp"
#include "ibd/harness/json.hpp"
#include "ibd/harness/suites.hpp"
#include "ibd/simulate.hpp"

namespace ibd::harness {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kIo = 3 };

namespace detail {

// Maps library exceptions onto exit codes.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ExcludedCaseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  return f;
}

inline void finish(std::ofstream& f, const std::filesystem::path& path) {
  f.flush();
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec || !std::filesystem::is_directory(p)) throw IoError("cannot create output directory '" + dir + "'");
  return p;
}

inline nlohmann::ordered_json spec_header(const ExperimentSpec& spec) {
  return {{"graph", spec.graph}, {"alpha", spec.alpha}, {"beta", spec.beta}};
}

}  // namespace detail

inline int cmd_classify(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (spec.graph.empty()) throw DomainError("--graph is required");
    const Graph g = parse_graph_spec(spec.graph);
    const RegimeReport rep = classify(g, spec.params());
    nlohmann::ordered_json j = rep;
    out << j.dump(2) << '\n';
    if (rep.regime == Regime::Unknown) err << "warning: regime not covered by any theorem\n";
    return kOk;
  });
}

// Writes trajectory.csv and summary.json (one replica), or
// trajectory_<i>.csv per replica plus one summary.json, into spec.out. With no
// --out the summary goes to `out`.
inline int cmd_simulate(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (spec.graph.empty()) throw DomainError("--graph is required");
    if (!spec.steps && !spec.time && !spec.max_total_spin) throw DomainError("give --steps or --time");
    if (spec.replicas == 0) throw DomainError("--replicas must be >= 1");
    const Graph g = parse_graph_spec(spec.graph);
    const ModelParams p = spec.params();
    const Configuration initial = parse_configuration(spec.initial, g.vertex_count());
    const StopRule stop = spec.stop_rule();
    RunOptions opts;
    opts.thin = spec.thin;
    opts.tail_window = spec.window;
    opts.record_trajectory = !spec.out.empty();
    if (stop.max_steps && opts.tail_window && *opts.tail_window > *stop.max_steps)
      throw DomainError("--window exceeds --steps");

    std::filesystem::path dir;
    if (!spec.out.empty()) dir = detail::prepare_out_dir(spec.out);

    nlohmann::ordered_json j = detail::spec_header(spec);
    j["chain"] = spec.chain == Chain::Dtmc ? "dtmc" : "ctmc";
    j["seed"] = spec.seed;
    try {
      j["classification"] = classify(g, p);
    } catch (const DomainError& e) {
      j["classification"] = nullptr;
      j["classification_error"] = e.what();
    }
    j["replicas"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < spec.replicas; ++i) {
      const std::uint64_t seed = replica_seed(spec.seed, i);
      const RunResult res = run(g, p, initial, spec.chain, stop, seed, opts);
      j["replicas"].push_back({{"replica", i}, {"seed", seed}, {"summary", res.summary}});
      if (!spec.out.empty()) {
        const auto path = dir / (spec.replicas == 1 ? std::string("trajectory.csv")
                                                    : "trajectory_" + std::to_string(i) + ".csv");
        auto f = detail::open_output(path);
        write_trajectory_csv(f, res.trajectory);
        detail::finish(f, path);
      }
    }
    if (spec.out.empty()) {
      out << j.dump(2) << '\n';
    } else {
      const auto path = dir / "summary.json";
      auto f = detail::open_output(path);
      f << j.dump(2) << '\n';
      detail::finish(f, path);
      out << path.string() << '\n';
    }
    return kOk;
  });
}

inline int cmd_stationary_check(const ExperimentSpec& spec, std::ostream& out, std::ostream& err,
                                double tolerance = 0.02) {
  return detail::guarded(err, [&] {
    if (spec.graph.empty()) throw DomainError("--graph is required");
    const Graph g = parse_graph_spec(spec.graph);
    const ModelParams p = spec.params();
    nlohmann::ordered_json j = detail::spec_header(spec);
    j["cap"] = spec.cap;
    const RegimeReport rep = classify(g, p);
    if (rep.regime != Regime::Ergodic) {
      j["skipped"] = true;
      j["warning"] = std::string("parameters are not in an ergodic regime (") + to_string(rep.regime) +
                     "); stationary check skipped";
      err << "warning: " << j["warning"].get<std::string>() << '\n';
      out << j.dump(2) << '\n';
      return kOk;
    }
    const std::uint64_t events = spec.steps.value_or(1'000'000);
    const StationaryResult s = stationary_check(g, p, spec.cap, events, spec.seed);
    j["skipped"] = false;
    j["theorem"] = rep.theorem;
    j["events"] = s.events;
    j["simulated_time"] = s.simulated_time;
    j["tv"] = s.tv;
    j["tolerance"] = tolerance;
    j["boundary_mass"] = s.boundary_mass;
    j["outside_mass"] = s.outside_mass;
    j["comparison"] = s.capped_simulation ? "capped-chain simulation" : "uncapped chain";
    j["pass"] = s.tv < tolerance;
    if (!spec.out.empty()) {
      const auto dir = detail::prepare_out_dir(spec.out);
      const auto path = dir / "distribution.csv";
      auto f = detail::open_output(path);
      write_distribution_csv(f, truncated_stationary(g, p, spec.cap));
      detail::finish(f, path);
    }
    out << j.dump(2) << '\n';
    return s.tv < tolerance ? kOk : kCheckFailed;
  });
}

// Exhaustive drift scan. kind: gq | s | two-step (shell smin <= S <= smax),
// star-f (box {0..smax}^V), quarter-plane (smin <= x + y <= smax).
inline int cmd_drift_check(const ExperimentSpec& spec, const std::string& kind, Spin smin, Spin smax,
                           std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (smin < 0 || smax < smin) throw DomainError("need 0 <= smin <= smax");
    const ModelParams p = spec.params();
    nlohmann::ordered_json j = detail::spec_header(spec);
    j["kind"] = kind;
    j["smin"] = smin;
    j["smax"] = smax;
    const double inf = std::numeric_limits<double>::infinity();
    std::size_t states = 0;
    bool pass = false;

    auto scan_shell = [&](const Graph& g, auto&& value, bool want_max) {
      double best = want_max ? -inf : inf;
      std::string where;
      for_each_in_shell(g.vertex_count(), smin, smax, [&](const Configuration& z) {
        const double v = value(z);
        ++states;
        if (want_max ? v > best : v < best) {
          best = v;
          where = z.to_string();
        }
      });
      return std::pair{best, where};
    };

    if (kind == "quarter-plane") {
      double worst = -inf;
      std::string where;
      for (Spin total = smin; total <= smax; ++total) {
        for (Spin x = 0; x <= total; ++x) {
          const double v = drift_log_quarterplane(p, x, total - x);
          ++states;
          if (v > worst) {
            worst = v;
            where = "(" + std::to_string(x) + "," + std::to_string(total - x) + ")";
          }
        }
      }
      j["max"] = worst;
      j["argmax"] = where;
      j["criterion"] = "max <= 0";
      pass = worst <= 0.0;
    } else {
      if (spec.graph.empty()) throw DomainError("--graph is required");
      const Graph g = parse_graph_spec(spec.graph);
      if (kind == "gq") {
        bool unbounded = false;
        auto [worst, where] = scan_shell(g, [&](const Configuration& z) {
          const GeneratorDrift d = drift_gq(g, p, z);
          unbounded |= d.unbounded;
          return d.value;
        }, true);
        j["max"] = worst;
        j["argmax"] = where;
        j["unbounded"] = unbounded;
        j["criterion"] = "max < 0";
        pass = worst < 0.0 && !unbounded;
      } else if (kind == "s") {
        auto [worst, where] = scan_shell(g, [&](const Configuration& z) { return drift_s(g, p, z); }, false);
        j["min"] = worst;
        j["argmin"] = where;
        j["criterion"] = "min > 0";
        pass = worst > 0.0;
      } else if (kind == "two-step") {
        auto [worst, where] =
            scan_shell(g, [&](const Configuration& z) { return drift_two_step_s(g, p, z).value; }, false);
        j["min"] = worst;
        j["argmin"] = where;
        j["criterion"] = "min > 0";
        pass = worst > 0.0;
      } else if (kind == "star-f") {
        double one = inf, two = inf;
        for_each_in_box(g.vertex_count(), smax, [&](const Configuration& z) {
          const StarDrift d = drift_star_f(g, p, z);
          one = std::min(one, d.one_step);
          two = std::min(two, d.two_step);
          ++states;
        });
        j["min_one_step"] = one;
        j["min_two_step"] = two;
        j["criterion"] = "min one-step >= 0 and min two-step > 0";
        pass = one >= 0.0 && two > 0.0;
      } else {
        throw DomainError("unknown drift kind '" + kind + "' (gq, s, two-step, star-f, quarter-plane)");
      }
    }
    j["states"] = states;
    j["pass"] = pass;
    out << j.dump(2) << '\n';
    return pass ? kOk : kCheckFailed;
  });
}

inline int cmd_suite(const std::string& name, bool quick, const std::string& out_dir, std::ostream& out,
                     std::ostream& err) {
  return detail::guarded(err, [&] {
    const SuiteReport rep = run_suite(name, quick);
    const auto j = to_json(rep);
    if (!out_dir.empty()) {
      const auto dir = detail::prepare_out_dir(out_dir);
      const auto path = dir / ("suite_" + name + ".json");
      auto f = detail::open_output(path);
      f << to_json(rep, false).dump(2) << '\n';
      detail::finish(f, path);
    }
    out << j.dump(2) << '\n';
    for (const auto& r : rep.records)
      if (!r.pass && r.gating) err << "FAIL: " << r.name << " (estimate " << r.estimate << ", " << r.tolerance << ")\n";
    return rep.passed() ? kOk : kCheckFailed;
  });
}

}  // namespace ibd::harness
