#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ibd/errors.hpp"
#include "ibd/graph.hpp"
#include "ibd/model.hpp"
#include "ibd/simulate.hpp"

namespace ibd::harness {

// Raised when an input file cannot be opened or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const std::string t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw DomainError("bad " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace detail

// Graph spec grammar:
//   single | path:n | cycle:n | star:n | complete:n | torus:L:d | lattice:L:d | edges:<file>
inline Graph parse_graph_spec(const std::string& spec) {
  if (spec.rfind("edges:", 0) == 0) {
    const std::string path = spec.substr(6);
    std::ifstream in(path);
    if (!in) throw IoError("cannot open edge list '" + path + "'");
    return parse_edge_list(in);
  }
  const auto parts = detail::split(spec, ':');
  const std::string& kind = parts[0];
  auto arg = [&](std::size_t i) {
    if (i >= parts.size()) throw DomainError("graph spec '" + spec + "' is missing a parameter");
    return detail::parse_number<std::size_t>(parts[i], "graph parameter");
  };
  auto expect_arity = [&](std::size_t n) {
    if (parts.size() != n + 1) throw DomainError("graph spec '" + spec + "' has the wrong number of parameters");
  };
  if (kind == "single") {
    expect_arity(0);
    return build_path(1);
  }
  if (kind == "path") { expect_arity(1); return build_path(arg(1)); }
  if (kind == "cycle") { expect_arity(1); return build_cycle(arg(1)); }
  if (kind == "star") { expect_arity(1); return build_star(arg(1)); }
  if (kind == "complete") { expect_arity(1); return build_complete(arg(1)); }
  if (kind == "torus" || kind == "lattice") {
    expect_arity(2);
    return build_lattice_torus(arg(1), arg(2));
  }
  throw DomainError("unknown graph kind '" + kind + "'");
}

// "3,0,1" -> configuration; empty string means the zero configuration.
inline Configuration parse_configuration(const std::string& text, std::size_t vertices) {
  if (detail::trim(text).empty()) return Configuration(vertices);
  std::vector<Spin> spins;
  for (const auto& part : detail::split(text, ',')) spins.push_back(detail::parse_number<Spin>(part, "spin"));
  if (spins.size() != vertices) {
    throw DomainError("initial configuration has " + std::to_string(spins.size()) + " entries, graph has " +
                      std::to_string(vertices) + " vertices");
  }
  for (Spin s : spins)
    if (s < 0) throw DomainError("spins must be non-negative");
  return Configuration(std::move(spins));
}

inline Chain parse_chain(const std::string& text) {
  if (text == "dtmc" || text == "DTMC") return Chain::Dtmc;
  if (text == "ctmc" || text == "CTMC") return Chain::Ctmc;
  throw DomainError("chain must be dtmc or ctmc, got '" + text + "'");
}

struct ExperimentSpec {
  std::string graph;
  double alpha = 0.0;
  double beta = 0.0;
  Chain chain = Chain::Dtmc;
  std::string initial;
  std::optional<std::uint64_t> steps;
  std::optional<double> time;
  std::optional<std::int64_t> max_total_spin;
  bool explosion_proxy = false;
  std::size_t replicas = 1;
  std::uint64_t seed = 1;
  std::uint64_t thin = 1;
  std::optional<std::uint64_t> window;
  std::int64_t cap = 25;
  std::string out;
  bool quick = false;
  std::string suite;

  ModelParams params() const {
    ModelParams p{alpha, beta};
    if (!p.finite()) throw DomainError("alpha and beta must be finite");
    return p;
  }

  StopRule stop_rule() const {
    StopRule r;
    r.max_steps = steps;
    r.max_time = time;
    if (max_total_spin) r.max_total_spin = *max_total_spin;
    if (explosion_proxy) r.explosion_proxy = ExplosionProxyParams{};
    return r;
  }
};

// Flat "key = value" lines; '#' starts a comment.
inline std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw DomainError("config line " + std::to_string(line_no) + ": empty key");
    out[key] = detail::trim(std::string_view(line).substr(eq + 1));
  }
  return out;
}

inline std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  return parse_config(in);
}

inline bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw DomainError("bad boolean '" + v + "'");
}

inline void apply_config(const std::map<std::string, std::string>& kv, ExperimentSpec& spec) {
  using detail::parse_number;
  for (const auto& [key, value] : kv) {
    if (key == "graph") spec.graph = value;
    else if (key == "alpha") spec.alpha = parse_number<double>(value, "alpha");
    else if (key == "beta") spec.beta = parse_number<double>(value, "beta");
    else if (key == "chain") spec.chain = parse_chain(value);
    else if (key == "initial") spec.initial = value;
    else if (key == "steps") spec.steps = parse_number<std::uint64_t>(value, "steps");
    else if (key == "time") spec.time = parse_number<double>(value, "time");
    else if (key == "max_total_spin") spec.max_total_spin = parse_number<std::int64_t>(value, "max_total_spin");
    else if (key == "explosion_proxy") spec.explosion_proxy = parse_bool(value);
    else if (key == "replicas") spec.replicas = parse_number<std::size_t>(value, "replicas");
    else if (key == "seed") spec.seed = parse_number<std::uint64_t>(value, "seed");
    else if (key == "thin") spec.thin = parse_number<std::uint64_t>(value, "thin");
    else if (key == "window") spec.window = parse_number<std::uint64_t>(value, "window");
    else if (key == "cap") spec.cap = parse_number<std::int64_t>(value, "cap");
    else if (key == "out") spec.out = value;
    else if (key == "quick") spec.quick = parse_bool(value);
    else if (key == "suite") spec.suite = value;
    else throw DomainError("unknown config key '" + key + "'");
  }
}

}  // namespace ibd::harness
