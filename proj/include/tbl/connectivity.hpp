#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbl/claim_report.hpp"
#include "tbl/digraph.hpp"
#include "tbl/error.hpp"
#include "tbl/metrics.hpp"
#include "tbl/rng.hpp"

namespace tbl {

// ---------------------------------------------------------------- Menger

struct DisjointPaths {
  int count = 0;
  std::vector<Path> paths;  // pairwise internally disjoint s->t paths
};

namespace detail {

// Unit-capacity flow network on the vertex-split digraph: v_in = 2v,
// v_out = 2v + 1, with a capacity-1 arc v_in -> v_out for every vertex.
class SplitFlow {
 public:
  SplitFlow(const Digraph& d, Vertex s, Vertex t, Mask mask) : n_(d.order()), head_(2 * n_, -1) {
    for (Vertex v = 0; v < n_; ++v) {
      if (v == s || v == t || blocked(mask, v)) continue;
      add_edge(2 * v, 2 * v + 1);
    }
    for (const Arc& a : d.arcs()) {
      if (a.head == s || a.tail == t) continue;
      if (blocked(mask, a.tail) || blocked(mask, a.head)) continue;
      add_edge(2 * a.tail + 1, 2 * a.head);
    }
  }

  // One BFS augmentation from s_out to t_in; false when none exists.
  bool augment(Vertex s, Vertex t) {
    const int src = 2 * s + 1, dst = 2 * t;
    std::vector<int> via(2 * n_, -1);
    std::vector<int> queue{src};
    std::vector<std::uint8_t> seen(2 * n_, 0);
    seen[src] = 1;
    for (std::size_t qi = 0; qi < queue.size() && !seen[dst]; ++qi) {
      int x = queue[qi];
      for (int e = head_[x]; e != -1; e = next_[e]) {
        if (cap_[e] == 0 || seen[to_[e]]) continue;
        seen[to_[e]] = 1;
        via[to_[e]] = e;
        queue.push_back(to_[e]);
      }
    }
    if (!seen[dst]) return false;
    for (int x = dst; x != src; x = to_[via[x] ^ 1]) {
      --cap_[via[x]];
      ++cap_[via[x] ^ 1];
    }
    return true;
  }

  // Decomposes the current flow into vertex sequences s..t.
  std::vector<Path> paths(Vertex s, Vertex t) {
    std::vector<Path> out;
    std::vector<int> used(cap_.size(), 0);
    for (;;) {
      Path p{{s}};
      int x = 2 * s + 1;
      bool progressed = true;
      while (progressed) {
        progressed = false;
        for (int e = head_[x]; e != -1; e = next_[e]) {
          if ((e & 1) || used[e] || flow(e) == 0) continue;
          used[e] = 1;
          Vertex w = to_[e] / 2;
          p.vertices.push_back(w);
          if (w == t) break;
          // in(w) carries its unit on to out(w).
          x = 2 * w + 1;
          progressed = true;
          break;
        }
        if (p.vertices.back() == t) break;
      }
      if (p.vertices.size() == 1) break;
      if (p.vertices.back() != t) throw std::logic_error("flow decomposition did not reach t");
      out.push_back(std::move(p));
    }
    return out;
  }

 private:
  void add_edge(int u, int v) {
    for (auto [a, b, c] : {std::tuple{u, v, 1}, std::tuple{v, u, 0}}) {
      to_.push_back(b);
      cap_.push_back(c);
      next_.push_back(head_[a]);
      head_[a] = static_cast<int>(to_.size()) - 1;
    }
  }
  int flow(int e) const { return 1 - cap_[e]; }

  int n_;
  std::vector<int> head_;
  std::vector<int> to_, cap_, next_;
};

}  // namespace detail

/**
 * Maximum number of pairwise internally disjoint s->t paths, with a family
 * achieving it. A direct arc s->t counts as one such path. Vertices in `mask`
 * are treated as deleted. `limit` stops the augmentation early (the count is
 * then min(limit, true maximum)).
 */
inline DisjointPaths internally_disjoint_paths(const Digraph& d, Vertex s, Vertex t,
                                               Mask mask = {}, int limit = INT_MAX) {
  if (s == t) throw Error(Errc::PreconditionFailed, "s == t");
  DisjointPaths r;
  if (detail::blocked(mask, s) || detail::blocked(mask, t)) return r;
  detail::SplitFlow net(d, s, t, mask);
  while (r.count < limit && net.augment(s, t)) ++r.count;
  r.paths = net.paths(s, t);
  std::sort(r.paths.begin(), r.paths.end(),
            [](const Path& a, const Path& b) { return a.vertices < b.vertices; });

  std::vector<std::uint8_t> used(d.order(), 0);
  for (const Path& p : r.paths) {
    if (!is_path_in(d, p)) throw std::logic_error("flow produced an invalid path");
    for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i) {
      if (used[p.vertices[i]]++) throw std::logic_error("flow paths share an internal vertex");
    }
  }
  if (static_cast<int>(r.paths.size()) != r.count) throw std::logic_error("flow/path count mismatch");
  return r;
}

// ---------------------------------------------------------------- cut vertices

/**
 * All (s,t)-cut-vertices w (w not in {s,t}, dist_{D-w}(s,t) infinite), sorted
 * by dist(s,w). Every cut vertex lies on every s->t path, in particular on a
 * shortest one, so only its interior is tested; along a shortest path the
 * order by distance is the path order.
 */
inline std::vector<Vertex> cut_vertices_ordered(const Digraph& d, Vertex s, Vertex t,
                                                Mask mask = {}) {
  if (s == t) throw Error(Errc::PreconditionFailed, "s == t");
  auto p = shortest_path(d, s, t, mask);
  if (!p) throw Error(Errc::Unreachable, std::to_string(t) + " from " + std::to_string(s));
  std::vector<std::uint8_t> m(d.order(), 0);
  if (!mask.empty()) std::copy(mask.begin(), mask.end(), m.begin());
  std::vector<Vertex> cuts;
  for (std::size_t i = 1; i + 1 < p->vertices.size(); ++i) {
    Vertex w = p->vertices[i];
    m[w] = 1;
    if (distances_from(d, s, m)[t] < 0) cuts.push_back(w);
    m[w] = 0;
  }
  return cuts;
}

// ---------------------------------------------------------------- cut window

/**
 * Cut-vertex chain for an arc ab of a cycle: c_1..c_l are the (b,a)-cut-
 * vertices ordered by distance from b, with c_0 = b and c_{l+1} = a.
 * i0 is the least chain index with dist(b, c_i0) >= k, i1 the largest with
 * dist(c_i1, a) >= k, h = i1 - i0 and tilde[i] = c_{i0+i}. Indices are
 * 1-based as chain positions; chain[j-1] is c_j.
 */
struct CutWindow {
  Arc arc;
  int k = 0;
  std::vector<Vertex> chain;
  int i0 = 0;
  int i1 = 0;
  int h = 0;
  std::vector<Vertex> tilde;
  // False when some cut vertex is off C. Only possible when C is not a
  // cycle of D, since C minus ab is itself a b->a path.
  bool chain_on_cycle = true;

  int length() const { return static_cast<int>(chain.size()); }
  Vertex c(int j) const {
    if (j == 0) return arc.head;
    if (j == length() + 1) return arc.tail;
    return chain.at(j - 1);
  }
};

namespace detail {

inline void require_cycle_arc(const Cycle& c, const Arc& ab) {
  const int L = c.length();
  for (int i = 0; i < L; ++i) {
    if (c.vertices[i] == ab.tail && c.vertices[(i + 1) % L] == ab.head) return;
  }
  throw Error(Errc::NotOnCycle, "arc (" + std::to_string(ab.tail) + "," +
                                    std::to_string(ab.head) + ") is not an arc of the cycle");
}

}  // namespace detail

inline CutWindow cut_window(const Digraph& d, const Cycle& c, const Arc& ab, int k) {
  detail::require_cycle_arc(c, ab);
  const Vertex a = ab.tail, b = ab.head;
  CutWindow w;
  w.arc = ab;
  w.k = k;
  w.chain = cut_vertices_ordered(d, b, a);
  if (w.chain.empty()) throw Error(Errc::NoCutVertex, "no (b,a)-cut-vertex");
  for (Vertex v : w.chain) {
    if (std::find(c.vertices.begin(), c.vertices.end(), v) == c.vertices.end()) {
      w.chain_on_cycle = false;
    }
  }
  const auto from_b = distances_from(d, b);
  const auto to_a = distances_to(d, a);
  const int l = w.length();
  w.i0 = 0;
  for (int j = 1; j <= l && w.i0 == 0; ++j) {
    if (from_b[w.c(j)] >= k) w.i0 = j;
  }
  w.i1 = 0;
  for (int j = l; j >= 1 && w.i1 == 0; --j) {
    if (to_a[w.c(j)] >= k) w.i1 = j;
  }
  if (w.i0 == 0 || w.i1 == 0 || w.i1 < w.i0) {
    throw Error(Errc::NoWindow, "no chain index satisfies the i0/i1 distance conditions");
  }
  w.h = w.i1 - w.i0;
  for (int i = 0; i <= w.h; ++i) w.tilde.push_back(w.c(w.i0 + i));
  return w;
}

// ---------------------------------------------------------------- cut order

struct CutOrderResult {
  bool holds = true;
  std::optional<Path> counterexample;
  std::vector<Vertex> chain;
  std::uint64_t paths_checked = 0;
  bool exhaustive = true;
};

/// True iff `p` contains every chain vertex, in chain order.
inline bool visits_in_order(const Path& p, const std::vector<Vertex>& chain) {
  std::size_t next = 0;
  for (Vertex v : p.vertices) {
    auto it = std::find(chain.begin(), chain.end(), v);
    if (it == chain.end()) continue;
    if (static_cast<std::size_t>(it - chain.begin()) != next) return false;
    ++next;
  }
  return next == chain.size();
}

namespace detail {

// Calls visit(path) for every simple s->t path; stops and returns false once
// `limit` paths were produced or visit returns false.
template <typename Visit>
bool for_each_path(const Digraph& d, Vertex s, Vertex t, std::uint64_t limit, Visit&& visit) {
  std::vector<std::uint8_t> on(d.order(), 0);
  std::vector<Vertex> path{s};
  std::vector<std::size_t> idx{0};
  std::uint64_t produced = 0;
  on[s] = 1;
  if (s == t) return visit(Path{path});
  while (!path.empty()) {
    Vertex x = path.back();
    const auto& succ = d.out(x);
    if (idx.back() == succ.size()) {
      on[x] = 0;
      path.pop_back();
      idx.pop_back();
      continue;
    }
    Vertex y = succ[idx.back()++];
    if (on[y]) continue;
    if (y == t) {
      path.push_back(t);
      bool go_on = visit(Path{path});
      path.pop_back();
      if (!go_on || ++produced >= limit) return false;
      continue;
    }
    // Skip dead ends: t must stay reachable without reusing the path.
    if (distances_from(d, y, on)[t] < 0) continue;
    on[y] = 1;
    path.push_back(y);
    idx.push_back(0);
  }
  return true;
}

// A uniformly-ordered random-DFS s->t path: at every step a random successor
// from which t is still reachable avoiding the current path.
inline Path random_path(const Digraph& d, Vertex s, Vertex t, Rng& rng) {
  std::vector<std::uint8_t> on(d.order(), 0);
  Path p{{s}};
  on[s] = 1;
  Vertex x = s;
  while (x != t) {
    std::vector<Vertex> succ = d.out(x);
    std::shuffle(succ.begin(), succ.end(), rng);
    Vertex chosen = kNoVertex;
    for (Vertex y : succ) {
      if (on[y]) continue;
      if (y == t || distances_from(d, y, on)[t] >= 0) {
        chosen = y;
        break;
      }
    }
    if (chosen == kNoVertex) throw std::logic_error("random_path lost reachability");
    on[chosen] = 1;
    p.vertices.push_back(chosen);
    x = chosen;
  }
  return p;
}

}  // namespace detail

/**
 * Confirms every s->t path visits the (s,t)-cut-vertex chain in ascending
 * order. Paths are enumerated exhaustively up to `path_budget`; past that,
 * `sample_paths` random paths are checked instead.
 */
inline CutOrderResult check_cut_order(const Digraph& d, Vertex s, Vertex t, int sample_paths,
                                      std::uint64_t seed, std::uint64_t path_budget = 1'000'000) {
  CutOrderResult r;
  r.chain = cut_vertices_ordered(d, s, t);
  auto check = [&](const Path& p) {
    ++r.paths_checked;
    if (visits_in_order(p, r.chain)) return true;
    r.holds = false;
    r.counterexample = p;
    return false;
  };
  bool complete = detail::for_each_path(d, s, t, path_budget, check);
  if (!r.holds || complete) return r;
  r.exhaustive = false;
  Rng rng = make_rng(seed);
  for (int i = 0; i < sample_paths && r.holds; ++i) check(detail::random_path(d, s, t, rng));
  return r;
}

// ---------------------------------------------------------------- special arc

/// First arc ab of C (in sorted arc order) whose window has dist(b, tilde_0) == k.
/// Arcs whose window does not exist simply do not match.
inline std::optional<Arc> special_arc(const Digraph& d, const Cycle& c, int k) {
  auto arcs = cycle_arcs(c);
  std::sort(arcs.begin(), arcs.end());
  for (const Arc& ab : arcs) {
    try {
      CutWindow w = cut_window(d, c, ab, k);
      if (distances_from(d, ab.head)[w.tilde.front()] == k) return ab;
    } catch (const Error& e) {
      if (e.code() != Errc::NoCutVertex && e.code() != Errc::NoWindow) throw;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- cut-vertex claims

/// For an arc-like pair with dist(u,v) <= 3k+2, some (v,u)-cut-vertex exists.
inline ClaimReport check_cut_exists(const Digraph& d, Vertex u, Vertex v, int k) {
  const std::string id = "cut";
  auto duv = distance(d, u, v);
  if (u == v || !duv.finite() || duv.value() > 3 * k + 2) {
    return ClaimReport::not_applicable(id, "dist(u,v) > 3k+2");
  }
  auto dvu = distance(d, v, u);
  if (!dvu.finite()) return ClaimReport::not_applicable(id, "u unreachable from v");
  if (!cut_vertices_ordered(d, v, u).empty()) return ClaimReport::holds(id);
  Evidence e;
  e.kind = "disjoint_paths";
  e.vertices = {v, u};
  for (const Path& p : internally_disjoint_paths(d, v, u).paths) e.paths.push_back(p.vertices);
  return ClaimReport::violated_by(id, std::move(e));
}

/// Between consecutive chain entries c_i, c_{i+1} (c_0 = s, c_{l+1} = t) there
/// is no further cut vertex.
inline ClaimReport check_no_intermediate_cut(const Digraph& d, Vertex s, Vertex t) {
  const std::string id = "no_cut";
  if (s == t || !distance(d, s, t).finite()) return ClaimReport::not_applicable(id, "t unreachable");
  auto chain = cut_vertices_ordered(d, s, t);
  chain.insert(chain.begin(), s);
  chain.push_back(t);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    auto inner = cut_vertices_ordered(d, chain[i], chain[i + 1]);
    if (!inner.empty()) {
      Evidence e;
      e.kind = "cut_vertex";
      e.vertices = {inner.front(), chain[i], chain[i + 1]};
      e.indices = {static_cast<int>(i)};
      return ClaimReport::violated_by(id, std::move(e));
    }
  }
  return ClaimReport::holds(id);
}

/// dist(c_i, c_{i+1}) <= k - 1 along the extended chain.
inline ClaimReport check_consecutive_distances(const Digraph& d, Vertex s, Vertex t, int k) {
  const std::string id = "dis";
  if (s == t || !distance(d, s, t).finite()) return ClaimReport::not_applicable(id, "t unreachable");
  auto chain = cut_vertices_ordered(d, s, t);
  chain.insert(chain.begin(), s);
  chain.push_back(t);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    int dd = distances_from(d, chain[i])[chain[i + 1]];
    if (dd > k - 1) {
      Evidence e;
      e.kind = "distance";
      e.vertices = {chain[i], chain[i + 1]};
      e.indices = {static_cast<int>(i)};
      e.value = dd;
      return ClaimReport::violated_by(id, std::move(e));
    }
  }
  return ClaimReport::holds(id);
}

/// Some arc ab of C has dist(b, tilde_0(ab)) == k. On failure the evidence
/// lists every arc with its measured dist(b, tilde_0) (-1: no window).
inline ClaimReport check_special_arc(const Digraph& d, const Cycle& c, int k) {
  const std::string id = "wlog";
  if (auto ab = special_arc(d, c, k)) {
    auto r = ClaimReport::holds(id);
    r.note = "arc (" + std::to_string(ab->tail) + "," + std::to_string(ab->head) + ")";
    return r;
  }
  Evidence e;
  e.kind = "arc_scan";
  auto arcs = cycle_arcs(c);
  std::sort(arcs.begin(), arcs.end());
  for (const Arc& ab : arcs) {
    e.vertices.push_back(ab.tail);
    e.vertices.push_back(ab.head);
    int measured = -1;
    try {
      CutWindow w = cut_window(d, c, ab, k);
      measured = distances_from(d, ab.head)[w.tilde.front()];
    } catch (const Error& err) {
      if (err.code() != Errc::NoCutVertex && err.code() != Errc::NoWindow) throw;
    }
    e.indices.push_back(measured);
  }
  return ClaimReport::violated_by(id, std::move(e));
}

}  // namespace tbl
