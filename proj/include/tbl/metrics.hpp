#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbl/digraph.hpp"
#include "tbl/error.hpp"

namespace tbl {

// ---------------------------------------------------------------- value types

/// Shortest-path length or +infinity.
class Distance {
 public:
  constexpr Distance() = default;  // infinite
  constexpr explicit Distance(int v) : v_(v) {}
  static constexpr Distance infinite() { return Distance(); }

  constexpr bool finite() const { return v_ != kInf; }
  int value() const {
    if (!finite()) throw std::logic_error("value() of infinite distance");
    return v_;
  }
  std::string to_string() const { return finite() ? std::to_string(v_) : "inf"; }

  friend constexpr auto operator<=>(const Distance&, const Distance&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Distance& d) {
    return os << d.to_string();
  }

 private:
  static constexpr int kInf = INT_MAX;
  int v_ = kInf;
};

struct Path {
  std::vector<Vertex> vertices;

  int length() const { return static_cast<int>(vertices.size()) - 1; }
  Vertex init() const { return vertices.front(); }
  Vertex term() const { return vertices.back(); }
  friend bool operator==(const Path&, const Path&) = default;
};

struct Cycle {
  std::vector<Vertex> vertices;

  int length() const { return static_cast<int>(vertices.size()); }
  friend bool operator==(const Cycle&, const Cycle&) = default;
};

/// Vertices distinct, consecutive pairs are arcs of `d`.
inline bool is_path_in(const Digraph& d, const Path& p) {
  if (p.vertices.empty()) return false;
  std::vector<std::uint8_t> seen(d.order(), 0);
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    Vertex v = p.vertices[i];
    if (!d.contains(v) || seen[v]) return false;
    seen[v] = 1;
    if (i > 0 && !d.has_arc(p.vertices[i - 1], v)) return false;
  }
  return true;
}

inline bool is_cycle_in(const Digraph& d, const Cycle& c) {
  if (c.vertices.size() < 2) return false;
  if (!is_path_in(d, Path{c.vertices})) return false;
  return d.has_arc(c.vertices.back(), c.vertices.front());
}

/// Rotation starting at the smallest vertex.
inline Cycle canonical(Cycle c) {
  auto it = std::min_element(c.vertices.begin(), c.vertices.end());
  std::rotate(c.vertices.begin(), it, c.vertices.end());
  return c;
}

inline std::vector<Arc> cycle_arcs(const Cycle& c) {
  std::vector<Arc> r;
  const int L = c.length();
  for (int i = 0; i < L; ++i) r.push_back({c.vertices[i], c.vertices[(i + 1) % L]});
  return r;
}

// ---------------------------------------------------------------- BFS kernels

/// Vertex mask: nonzero entries are treated as deleted. Empty span = none.
using Mask = std::span<const std::uint8_t>;

namespace detail {

inline bool blocked(Mask m, Vertex v) { return !m.empty() && m[v]; }

template <bool Forward>
std::vector<int> bfs(const Digraph& d, Vertex src, Mask mask, std::vector<Vertex>* parent) {
  std::vector<int> dist(d.order(), -1);
  if (parent) parent->assign(d.order(), kNoVertex);
  if (blocked(mask, src)) return dist;
  std::vector<Vertex> queue{src};
  dist[src] = 0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    Vertex v = queue[qi];
    const auto& nbrs = Forward ? d.out(v) : d.in(v);
    for (Vertex w : nbrs) {
      if (dist[w] != -1 || blocked(mask, w)) continue;
      dist[w] = dist[v] + 1;
      if (parent) (*parent)[w] = v;
      queue.push_back(w);
    }
  }
  return dist;
}

}  // namespace detail

/// Distances from `src` (-1 = unreachable). Masked vertices are absent.
inline std::vector<int> distances_from(const Digraph& d, Vertex src, Mask mask = {},
                                       std::vector<Vertex>* parent = nullptr) {
  return detail::bfs<true>(d, src, mask, parent);
}

/// Distances to `dst` along reversed arcs (-1 = cannot reach dst).
inline std::vector<int> distances_to(const Digraph& d, Vertex dst, Mask mask = {}) {
  return detail::bfs<false>(d, dst, mask, nullptr);
}

/// dist[u][v], -1 for unreachable.
inline std::vector<std::vector<int>> all_pairs_distances(const Digraph& d) {
  std::vector<std::vector<int>> r(d.order());
  for (Vertex v = 0; v < d.order(); ++v) r[v] = distances_from(d, v);
  return r;
}

inline std::vector<Vertex> reachable_set(const Digraph& d, Vertex src, Mask mask = {}) {
  auto dist = distances_from(d, src, mask);
  std::vector<Vertex> r;
  for (Vertex v = 0; v < d.order(); ++v) {
    if (dist[v] >= 0) r.push_back(v);
  }
  return r;
}

// ---------------------------------------------------------------- distance

inline Distance distance(const Digraph& d, Vertex u, Vertex v, Mask mask = {}) {
  auto dist = distances_from(d, u, mask);
  return dist[v] < 0 ? Distance::infinite() : Distance(dist[v]);
}

/// A shortest u->v path, or nullopt when v is unreachable.
inline std::optional<Path> shortest_path(const Digraph& d, Vertex u, Vertex v, Mask mask = {}) {
  std::vector<Vertex> parent;
  auto dist = distances_from(d, u, mask, &parent);
  if (dist[v] < 0) return std::nullopt;
  Path p;
  for (Vertex x = v; x != kNoVertex; x = parent[x]) p.vertices.push_back(x);
  std::reverse(p.vertices.begin(), p.vertices.end());
  return p;
}

// ---------------------------------------------------------------- girth

/// A shortest directed cycle (canonical rotation), nullopt when acyclic.
/// One BFS per vertex: the shortest cycle through s closes with an arc u->s.
inline std::optional<Cycle> shortest_cycle(const Digraph& d) {
  int best = INT_MAX;
  std::optional<Cycle> best_cycle;
  std::vector<Vertex> parent;
  for (Vertex s = 0; s < d.order(); ++s) {
    auto dist = distances_from(d, s, {}, &parent);
    for (Vertex u : d.in(s)) {
      if (dist[u] < 0 || dist[u] + 1 >= best) continue;
      best = dist[u] + 1;
      Cycle c;
      for (Vertex x = u; x != kNoVertex; x = parent[x]) c.vertices.push_back(x);
      std::reverse(c.vertices.begin(), c.vertices.end());
      best_cycle = canonical(std::move(c));
    }
  }
  return best_cycle;
}

inline Distance girth(const Digraph& d) {
  auto c = shortest_cycle(d);
  return c ? Distance(c->length()) : Distance::infinite();
}

// ---------------------------------------------------------------- segments

enum class SegmentMode { Closed, LeftOpen, RightOpen, Open };

namespace detail {

inline int position_on(const Cycle& c, Vertex v) {
  auto it = std::find(c.vertices.begin(), c.vertices.end(), v);
  if (it == c.vertices.end()) throw Error(Errc::NotOnCycle, "vertex " + std::to_string(v));
  return static_cast<int>(it - c.vertices.begin());
}

}  // namespace detail

/// C[a,b]: the path from a to b along C; a single vertex when a == b.
inline Path segment(const Cycle& c, Vertex a, Vertex b) {
  const int L = c.length();
  int i = detail::position_on(c, a);
  int j = detail::position_on(c, b);
  Path p;
  for (int x = i;; x = (x + 1) % L) {
    p.vertices.push_back(c.vertices[x]);
    if (x == j) break;
  }
  return p;
}

/// Vertex sequence of C[a,b], C(a,b], C[a,b) or C(a,b), in cycle order.
inline std::vector<Vertex> segment_vertices(const Cycle& c, Vertex a, Vertex b,
                                            SegmentMode mode) {
  std::vector<Vertex> v = segment(c, a, b).vertices;
  bool drop_front = mode == SegmentMode::LeftOpen || mode == SegmentMode::Open;
  bool drop_back = mode == SegmentMode::RightOpen || mode == SegmentMode::Open;
  // For a == b the single vertex is both ends; dropping either empties it.
  if (drop_front && !v.empty()) v.erase(v.begin());
  if (drop_back && !v.empty() && !(drop_front && a == b)) v.pop_back();
  return v;
}

/// ||C[a,b]||.
inline int segment_length(const Cycle& c, Vertex a, Vertex b) {
  const int L = c.length();
  return ((detail::position_on(c, b) - detail::position_on(c, a)) % L + L) % L;
}

// ---------------------------------------------------------------- isometry

inline bool is_isometric(const Digraph& d, const Cycle& c) {
  const int L = c.length();
  for (int i = 0; i < L; ++i) {
    auto dist = distances_from(d, c.vertices[i]);
    for (int j = 0; j < L; ++j) {
      if (dist[c.vertices[j]] != ((j - i) % L + L) % L) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- rho

/// Order of a largest weakly connected component of D - V(C).
inline int rho(const Digraph& d, std::span<const Vertex> removed) {
  std::vector<std::uint8_t> seen(d.order(), 0);
  for (Vertex v : removed) seen[v] = 1;
  int best = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < d.order(); ++s) {
    if (seen[s]) continue;
    int size = 0;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      ++size;
      for (const auto* nbrs : {&d.out(v), &d.in(v)}) {
        for (Vertex w : *nbrs) {
          if (seen[w]) continue;
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    best = std::max(best, size);
  }
  return best;
}

inline int rho(const Digraph& d, const Cycle& c) { return rho(d, std::span<const Vertex>(c.vertices)); }

// ---------------------------------------------------------------- rho-maximal isometric cycle

struct IsometricCycleSearch {
  Cycle cycle;
  int rho = 0;
  std::uint64_t cycles_examined = 0;
  std::uint64_t nodes = 0;
};

/**
 * Enumerates every isometric cycle of length <= cycle_length_cap and returns
 * one maximizing rho; ties go to the lexicographically least canonical vertex
 * sequence.
 *
 * Each cycle is grown from its smallest vertex s. A partial cycle
 * s = p_0, ..., p_j is kept only while it could still be isometric:
 * dist(p_i, p_j) == j - i for every i (prefixes are shortest paths), and
 * dist(p_j, p_i) == dist(p_j, s) + i (the way back around is shortest too).
 *
 * Throws NoCycle when D is acyclic and CapExceeded once `node_budget` partial
 * cycles have been expanded.
 */
inline IsometricCycleSearch max_rho_isometric_cycle(const Digraph& d, int cycle_length_cap,
                                                    std::uint64_t node_budget = 10'000'000) {
  if (!shortest_cycle(d)) throw Error(Errc::NoCycle, "digraph is acyclic");
  const int n = d.order();
  const auto dist = all_pairs_distances(d);

  IsometricCycleSearch best;
  bool have = false;
  std::vector<Vertex> path;
  std::vector<std::uint8_t> on_path(n, 0);

  auto consider = [&](const std::vector<Vertex>& verts) {
    Cycle c{verts};
    if (!is_isometric(d, c)) return;
    ++best.cycles_examined;
    int r = rho(d, c);
    if (!have || r > best.rho || (r == best.rho && c.vertices < best.cycle.vertices)) {
      best.cycle = c;
      best.rho = r;
      have = true;
    }
  };

  // Explicit stack of (vertex, next-successor-index).
  std::vector<std::size_t> next_idx;
  for (Vertex s = 0; s < n; ++s) {
    path.assign(1, s);
    next_idx.assign(1, 0);
    on_path[s] = 1;
    while (!path.empty()) {
      Vertex x = path.back();
      std::size_t& idx = next_idx.back();
      const auto& succ = d.out(x);
      if (idx == succ.size()) {
        on_path[x] = 0;
        path.pop_back();
        next_idx.pop_back();
        continue;
      }
      Vertex y = succ[idx++];
      const int j = static_cast<int>(path.size());  // position y would take
      if (y == s) {
        if (j >= 2 && j <= cycle_length_cap) consider(path);
        continue;
      }
      if (y < s || on_path[y] || j + 1 > cycle_length_cap) continue;
      if (++best.nodes > node_budget) {
        throw Error(Errc::CapExceeded, "isometric cycle enumeration budget exhausted");
      }
      const int back = dist[y][s];
      if (back < 0 || j + back > cycle_length_cap) continue;
      bool ok = true;
      for (int i = 0; i < j && ok; ++i) {
        Vertex p = path[i];
        ok = dist[p][y] == j - i && dist[y][p] == back + i;
      }
      if (!ok) continue;
      path.push_back(y);
      next_idx.push_back(0);
      on_path[y] = 1;
    }
  }
  if (!have) throw Error(Errc::NoCycle, "no isometric cycle within the length cap");
  return best;
}

}  // namespace tbl
