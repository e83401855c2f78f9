#pragma once

// Finite simple undirected graphs the birth-and-death system lives on,
// the builders for the families with sharp regime results, and a
// structural analysis used by the classifier.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ibd/errors.hpp"

namespace ibd {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;

// Upper bound on vertex count accepted by the builders.
inline constexpr std::size_t kMaxVertices = 10'000'000;

// Immutable adjacency structure stored in compressed sparse rows. Neighbour
// lists are sorted; the relation is symmetric with no loops or multi-edges.
class Graph {
 public:
  Graph() = default;

  // Builds from an arbitrary edge list. Duplicate edges (in either
  // orientation) are merged; self-loops and out-of-range indices throw.
  static Graph from_edges(std::size_t vertex_count, std::span<const Edge> edges) {
    if (vertex_count == 0) throw DomainError("graph needs at least one vertex");
    if (vertex_count > kMaxVertices) {
      throw BudgetError("graph too large", vertex_count);
    }
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    for (auto [u, v] : edges) {
      if (u >= vertex_count || v >= vertex_count) {
        throw DomainError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                          ") out of range for " + std::to_string(vertex_count) + " vertices");
      }
      if (u == v) throw DomainError("self-loop at vertex " + std::to_string(u));
      canon.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

    Graph g;
    g.offsets_.assign(vertex_count + 1, 0);
    for (auto [u, v] : canon) {
      ++g.offsets_[u + 1];
      ++g.offsets_[v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.neighbours_.resize(2 * canon.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : canon) {
      g.neighbours_[cursor[u]++] = v;
      g.neighbours_[cursor[v]++] = u;
    }
    for (Vertex x = 0; x < vertex_count; ++x) {
      std::sort(g.neighbours_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[x]),
                g.neighbours_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[x + 1]));
    }
    return g;
  }

  std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return neighbours_.size() / 2; }

  std::span<const Vertex> neighbours(Vertex x) const {
    return {neighbours_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
  }

  std::size_t degree(Vertex x) const { return offsets_[x + 1] - offsets_[x]; }

  bool adjacent(Vertex x, Vertex y) const {
    auto nb = neighbours(x);
    return std::binary_search(nb.begin(), nb.end(), y);
  }

  // Each undirected edge once, as (smaller, larger).
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (Vertex x = 0; x < vertex_count(); ++x) {
      for (Vertex y : neighbours(x)) {
        if (x < y) out.emplace_back(x, y);
      }
    }
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> neighbours_;
};

struct StructureReport {
  std::size_t vertex_count = 0;
  std::size_t max_degree = 0;
  std::optional<std::size_t> constant_degree;
  bool is_connected = false;
  bool is_triangle_free = true;
  std::optional<std::size_t> star_leaf_count;
  bool is_complete = false;

  friend bool operator==(const StructureReport&, const StructureReport&) = default;
};

// Periodic lattice cube {-L..L}^d; vertex index is the mixed-radix encoding
// of the shifted coordinates.
inline Graph build_lattice_torus(std::size_t half_width, std::size_t dimension) {
  if (half_width < 1) throw DomainError("lattice half-width must be >= 1");
  if (dimension < 1) throw DomainError("lattice dimension must be >= 1");
  const std::size_t side = 2 * half_width + 1;
  std::size_t n = 1;
  for (std::size_t k = 0; k < dimension; ++k) {
    if (n > kMaxVertices / side) {
      throw BudgetError("lattice torus too large", std::numeric_limits<std::size_t>::max());
    }
    n *= side;
  }
  std::vector<Edge> edges;
  edges.reserve(n * dimension);
  std::size_t stride = 1;
  for (std::size_t k = 0; k < dimension; ++k) {
    for (Vertex x = 0; x < n; ++x) {
      const std::size_t coord = (x / stride) % side;
      const std::size_t up = (coord + 1) % side;
      edges.emplace_back(x, x - coord * stride + up * stride);
    }
    stride *= side;
  }
  return Graph::from_edges(n, edges);
}

inline Graph build_complete(std::size_t n) {
  if (n < 2) throw DomainError("complete graph needs n >= 2");
  std::vector<Edge> edges;
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = x + 1; y < n; ++y) edges.emplace_back(x, y);
  return Graph::from_edges(n, edges);
}

// Centre is vertex 0, leaves are 1..n.
inline Graph build_star(std::size_t leaves) {
  if (leaves < 1) throw DomainError("star needs at least one leaf");
  std::vector<Edge> edges;
  for (Vertex y = 1; y <= leaves; ++y) edges.emplace_back(0, y);
  return Graph::from_edges(leaves + 1, edges);
}

inline Graph build_cycle(std::size_t n) {
  if (n < 3) throw DomainError("cycle needs n >= 3");
  std::vector<Edge> edges;
  for (Vertex x = 0; x < n; ++x) edges.emplace_back(x, (x + 1) % n);
  return Graph::from_edges(n, edges);
}

// Path on n vertices; n = 1 is the single isolated vertex.
inline Graph build_path(std::size_t n) {
  if (n < 1) throw DomainError("path needs n >= 1");
  std::vector<Edge> edges;
  for (Vertex x = 0; x + 1 < n; ++x) edges.emplace_back(x, x + 1);
  return Graph::from_edges(n, edges);
}

inline bool is_connected(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    for (Vertex y : g.neighbours(x)) {
      if (!seen[y]) {
        seen[y] = 1;
        ++visited;
        stack.push_back(y);
      }
    }
  }
  return visited == n;
}

inline StructureReport analyze(const Graph& g) {
  StructureReport r;
  const std::size_t n = g.vertex_count();
  r.vertex_count = n;
  if (n == 0) return r;

  std::size_t min_degree = g.degree(0);
  for (Vertex x = 0; x < n; ++x) {
    r.max_degree = std::max(r.max_degree, g.degree(x));
    min_degree = std::min(min_degree, g.degree(x));
  }
  if (min_degree == r.max_degree) r.constant_degree = r.max_degree;
  r.is_connected = is_connected(g);

  // A triangle exists iff two neighbours of some vertex are adjacent.
  for (Vertex x = 0; x < n && r.is_triangle_free; ++x) {
    auto nb = g.neighbours(x);
    for (std::size_t i = 0; i < nb.size() && r.is_triangle_free; ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (g.adjacent(nb[i], nb[j])) {
          r.is_triangle_free = false;
          break;
        }
      }
    }
  }

  if (n == 2 && g.edge_count() == 1) {
    r.star_leaf_count = 1;
  } else if (n >= 3) {
    const std::size_t leaves = n - 1;
    std::size_t centres = 0, ones = 0;
    for (Vertex x = 0; x < n; ++x) {
      if (g.degree(x) == leaves) ++centres;
      else if (g.degree(x) == 1) ++ones;
    }
    if (centres == 1 && ones == leaves) r.star_leaf_count = leaves;
  }

  r.is_complete = n >= 2 && r.constant_degree == n - 1;
  return r;
}

// Index of the star centre (highest-degree vertex; vertex of lowest index on
// ties, so the two-vertex star is centred at 0).
inline Vertex star_centre(const Graph& g) {
  Vertex best = 0;
  for (Vertex x = 1; x < g.vertex_count(); ++x) {
    if (g.degree(x) > g.degree(best)) best = x;
  }
  return best;
}

// Relabel vertices: vertex x of g becomes perm[x].
inline Graph relabel(const Graph& g, std::span<const Vertex> perm) {
  if (perm.size() != g.vertex_count()) throw DomainError("permutation size mismatch");
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  return Graph::from_edges(g.vertex_count(), edges);
}

// Edge-list text: one "u v" pair per line, 0-based, '#' starts a comment.
// The vertex count is one more than the largest index seen.
inline Graph parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long u = 0, v = 0;
    if (!(fields >> u)) {
      // blank or comment-only line
      std::string rest;
      fields.clear();
      if (fields >> rest) throw DomainError("edge list line " + std::to_string(line_no) + ": expected 'u v'");
      continue;
    }
    std::string extra;
    if (!(fields >> v) || (fields >> extra) || u < 0 || v < 0) {
      throw DomainError("edge list line " + std::to_string(line_no) + ": expected two non-negative indices");
    }
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    max_index = std::max({max_index, static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
  }
  if (edges.empty()) throw DomainError("edge list contains no edges");
  return Graph::from_edges(max_index + 1, edges);
}

inline Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open edge list '" + path + "'");
  return parse_edge_list(in);
}

}  // namespace ibd
