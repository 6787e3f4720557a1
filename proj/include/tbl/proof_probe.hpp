#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "tbl/claim_report.hpp"
#include "tbl/connectivity.hpp"
#include "tbl/digraph.hpp"
#include "tbl/error.hpp"
#include "tbl/metrics.hpp"

namespace tbl {

/**
 * Reachability strata of a cut window: X_i is everything reachable from
 * tilde_i in D - tilde_{i+1}, for i in [0,h], indices mod h+1.
 */
struct XSets {
  CutWindow window;
  std::vector<std::vector<Vertex>> sets;         // sorted
  std::vector<std::vector<std::uint8_t>> member;  // member[i][v]

  int count() const { return static_cast<int>(sets.size()); }
  int wrap(int i) const { return ((i % count()) + count()) % count(); }
  Vertex tilde(int i) const { return window.tilde[wrap(i)]; }
  bool contains(int i, Vertex v) const { return member[wrap(i)][v] != 0; }
};

/// Raises the cut_window errors, and PreconditionFailed when h == 0 (X_0
/// would be defined in D minus its own source).
inline XSets x_sets(const Digraph& d, const Cycle& c, const Arc& ab, int k) {
  XSets xs;
  xs.window = cut_window(d, c, ab, k);
  if (xs.window.h == 0) throw Error(Errc::PreconditionFailed, "window has h = 0");
  const int m = xs.window.h + 1;
  std::vector<std::uint8_t> mask(d.order(), 0);
  for (int i = 0; i < m; ++i) {
    Vertex src = xs.window.tilde[i];
    Vertex cut = xs.window.tilde[(i + 1) % m];
    mask[cut] = 1;
    auto dist = distances_from(d, src, mask);
    mask[cut] = 0;
    std::vector<Vertex> set;
    std::vector<std::uint8_t> mem(d.order(), 0);
    for (Vertex v = 0; v < d.order(); ++v) {
      if (dist[v] >= 0) {
        set.push_back(v);
        mem[v] = 1;
      }
    }
    xs.sets.push_back(std::move(set));
    xs.member.push_back(std::move(mem));
  }
  return xs;
}

namespace detail {

inline std::vector<Vertex> intersection(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
  std::vector<Vertex> r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

}  // namespace detail

/// X_i meets V(C) exactly in C[tilde_i, tilde_{i+1}).
inline ClaimReport check_intersect1(const Digraph& d, const Cycle& c, const XSets& xs) {
  const std::string id = "intersect_1";
  (void)d;
  for (int i = 0; i < xs.count(); ++i) {
    auto expected = segment_vertices(c, xs.tilde(i), xs.tilde(i + 1), SegmentMode::RightOpen);
    std::vector<std::uint8_t> want(xs.member[i].size(), 0);
    for (Vertex v : expected) want[v] = 1;
    for (Vertex v : c.vertices) {
      if (want[v] != xs.member[i][v]) {
        Evidence e;
        e.kind = want[v] ? "missing_vertex" : "extra_vertex";
        e.vertices = {v};
        e.indices = {i};
        return ClaimReport::violated_by(id, std::move(e));
      }
    }
  }
  return ClaimReport::holds(id);
}

inline ClaimReport check_intersect1(const Digraph& d, const Cycle& c, const Arc& ab, int k) {
  return check_intersect1(d, c, x_sets(d, c, ab, k));
}

/**
 * (i) X_i and X_j meet only for consecutive indices; (ii) a meeting
 * X_i, X_{i+1} forces the arc tilde_{i+1} tilde_{i+2}, or c_{i1} c_{i1+1} when
 * i = h-1; (iii) with a root v0, a meeting X_i, X_{i+1} has v0 in their union.
 */
inline ClaimReport check_intersect2(const Digraph& d, const XSets& xs,
                                    std::optional<Vertex> root = std::nullopt) {
  const int m = xs.count();
  const int h = m - 1;
  std::vector<ClaimReport> parts;

  {
    ClaimReport part = ClaimReport::holds("intersect_2.i");
    for (int i = 0; i < m && !part.violated(); ++i) {
      for (int j = 0; j < m; ++j) {
        if (i == j || j == xs.wrap(i - 1) || j == xs.wrap(i + 1)) continue;
        auto common = detail::intersection(xs.sets[i], xs.sets[j]);
        if (common.empty()) continue;
        Evidence e;
        e.kind = "set_pair";
        e.indices = {i, j};
        e.vertices = {common.front()};
        part = ClaimReport::violated_by("intersect_2.i", std::move(e));
        break;
      }
    }
    parts.push_back(std::move(part));
  }

  {
    ClaimReport part = ClaimReport::not_applicable("intersect_2.ii", "no consecutive sets meet");
    for (int i = 0; i < m; ++i) {
      auto common = detail::intersection(xs.sets[i], xs.sets[xs.wrap(i + 1)]);
      if (common.empty()) continue;
      Arc forced = i == h - 1 ? Arc{xs.window.c(xs.window.i1), xs.window.c(xs.window.i1 + 1)}
                              : Arc{xs.tilde(i + 1), xs.tilde(i + 2)};
      if (d.has_arc(forced)) {
        part = ClaimReport::holds("intersect_2.ii");
        continue;
      }
      Evidence e;
      e.kind = "missing_arc";
      e.vertices = {forced.tail, forced.head};
      e.indices = {i, xs.wrap(i + 1)};
      part = ClaimReport::violated_by("intersect_2.ii", std::move(e));
      break;
    }
    parts.push_back(std::move(part));
  }

  if (!root) {
    parts.push_back(ClaimReport::not_applicable("intersect_2.iii", "no root supplied"));
  } else {
    ClaimReport part = ClaimReport::not_applicable("intersect_2.iii", "no consecutive sets meet");
    for (int i = 0; i < m; ++i) {
      int j = xs.wrap(i + 1);
      if (detail::intersection(xs.sets[i], xs.sets[j]).empty()) continue;
      if (xs.contains(i, *root) || xs.contains(j, *root)) {
        part = ClaimReport::holds("intersect_2.iii");
        continue;
      }
      Evidence e;
      e.kind = "root_outside";
      e.vertices = {*root};
      e.indices = {i, j};
      part = ClaimReport::violated_by("intersect_2.iii", std::move(e));
      break;
    }
    parts.push_back(std::move(part));
  }
  return combine("intersect_2", std::move(parts));
}

/// With X_i, X_j disjoint: no arc between X_i \ V(C) and X_j \ V(C), either way.
inline ClaimReport no_cross_arc_check(const Digraph& d, const Cycle& c, const XSets& xs, int i,
                                      int j) {
  const std::string id = "no_cross_arc";
  if (!detail::intersection(xs.sets[xs.wrap(i)], xs.sets[xs.wrap(j)]).empty()) {
    throw Error(Errc::PreconditionFailed, "X_i and X_j intersect");
  }
  std::vector<std::uint8_t> on_c(d.order(), 0);
  for (Vertex v : c.vertices) on_c[v] = 1;
  for (auto [from, to] : {std::pair{i, j}, std::pair{j, i}}) {
    for (Vertex u : xs.sets[xs.wrap(from)]) {
      if (on_c[u]) continue;
      for (Vertex w : d.out(u)) {
        if (on_c[w] || !xs.contains(to, w)) continue;
        Evidence e;
        e.kind = "arc";
        e.vertices = {u, w};
        e.indices = {xs.wrap(from), xs.wrap(to)};
        return ClaimReport::violated_by(id, std::move(e));
      }
    }
  }
  return ClaimReport::holds(id);
}

/// (h+3)k - (h+1): the upper estimate for ||C|| given the window.
constexpr int cycle_bound(int h, int k) { return (h + 3) * k - (h + 1); }

/// ||C|| <= cycle_bound(h, k).
inline ClaimReport check_cycle_bound(const Cycle& c, const CutWindow& w) {
  const int bound = cycle_bound(w.h, w.k);
  if (c.length() <= bound) return ClaimReport::holds("cycle_bound");
  Evidence e;
  e.kind = "length";
  e.indices = {w.h, w.k};
  e.value = c.length();
  return ClaimReport::violated_by("cycle_bound", std::move(e));
}

// ---------------------------------------------------------------- whole-probe

/**
 * Every checkable predicate for one (D, C, ab, k): the cut-vertex claims on
 * the arc, the special-arc claim on C, then the X-set layer. Predicates whose
 * inputs do not exist (no window, h == 0) are reported not_applicable.
 */
inline std::vector<ClaimReport> probe_claims(const Digraph& d, const Cycle& c, const Arc& ab, int k,
                                             std::optional<Vertex> root = std::nullopt) {
  std::vector<ClaimReport> out;
  const Vertex a = ab.tail, b = ab.head;
  out.push_back(check_cut_exists(d, a, b, k));
  {
    auto r = check_cut_order(d, b, a, 1000, 0);
    if (r.holds) {
      out.push_back(ClaimReport::holds("order"));
    } else {
      Evidence e;
      e.kind = "path";
      e.vertices = r.counterexample->vertices;
      out.push_back(ClaimReport::violated_by("order", std::move(e)));
    }
  }
  out.push_back(check_no_intermediate_cut(d, b, a));
  out.push_back(check_consecutive_distances(d, b, a, k));
  out.push_back(check_special_arc(d, c, k));

  const std::vector<std::string> layer{"intersect_1", "intersect_2", "no_cross_arc", "cycle_bound"};
  std::optional<XSets> xs;
  std::string why;
  try {
    xs = x_sets(d, c, ab, k);
  } catch (const Error& e) {
    if (e.code() != Errc::NoCutVertex && e.code() != Errc::NoWindow &&
        e.code() != Errc::PreconditionFailed) {
      throw;
    }
    why = e.what();
  }
  if (!xs) {
    for (const auto& id : layer) out.push_back(ClaimReport::not_applicable(id, why));
    return out;
  }
  out.push_back(check_intersect1(d, c, *xs));
  out.push_back(check_intersect2(d, *xs, root));
  {
    std::vector<ClaimReport> parts;
    for (int i = 0; i < xs->count(); ++i) {
      for (int j = i + 1; j < xs->count(); ++j) {
        if (!detail::intersection(xs->sets[i], xs->sets[j]).empty()) continue;
        parts.push_back(no_cross_arc_check(d, c, *xs, i, j));
      }
    }
    out.push_back(combine("no_cross_arc", std::move(parts)));
  }
  out.push_back(check_cycle_bound(c, xs->window));
  return out;
}

}  // namespace tbl
