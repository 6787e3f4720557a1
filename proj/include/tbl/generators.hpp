#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tbl/digraph.hpp"
#include "tbl/error.hpp"
#include "tbl/metrics.hpp"
#include "tbl/rng.hpp"

namespace tbl {

// ---------------------------------------------------------------- D_k

/// Block i's two chosen cycle positions for v_i's out-arcs; empty = (0,1) everywhere.
struct DkParams {
  int k = 3;
  std::vector<std::pair<int, int>> choice;
};

/// Vertex layout of construct_dk: v_i = i, vertex j of block cycle C_i = k + i*k + j.
struct DkLayout {
  int k;
  Vertex hub(int i) const { return i; }
  Vertex block(int i, int j) const { return k + i * k + j; }
  std::vector<Vertex> block_cycle(int i) const {
    std::vector<Vertex> c;
    for (int j = 0; j < k; ++j) c.push_back(block(i, j));
    return c;
  }
};

/**
 * Hubs v_0..v_{k-1} and k disjoint directed k-cycles C_0..C_{k-1}. v_i points
 * to two chosen vertices of C_i, and every vertex of C_i points to v_{i+1}
 * (indices mod k). n = k + k^2, m = 2k + 2k^2, min out-degree 2, girth k.
 */
inline Digraph construct_dk(const DkParams& p) {
  const int k = p.k;
  if (k < 2) throw Error(Errc::BadParams, "k must be at least 2");
  if (!p.choice.empty() && static_cast<int>(p.choice.size()) != k) {
    throw Error(Errc::BadParams, "need one position pair per block");
  }
  DkLayout at{k};
  std::vector<Arc> arcs;
  for (int i = 0; i < k; ++i) {
    auto [x, y] = p.choice.empty() ? std::pair{0, 1} : p.choice[i];
    if (x == y || x < 0 || y < 0 || x >= k || y >= k) {
      throw Error(Errc::BadParams, "block " + std::to_string(i) + " needs two distinct positions in [0,k-1]");
    }
    for (int j = 0; j < k; ++j) {
      arcs.push_back({at.block(i, j), at.block(i, (j + 1) % k)});
      arcs.push_back({at.block(i, j), at.hub((i + 1) % k)});
    }
    arcs.push_back({at.hub(i), at.block(i, x)});
    arcs.push_back({at.hub(i), at.block(i, y)});
  }
  return Digraph(k + k * k, std::move(arcs));
}

inline Digraph construct_dk(int k) { return construct_dk(DkParams{k, {}}); }

// ---------------------------------------------------------------- fixtures

inline Digraph complete_biorientation(int n) {
  if (n < 1) throw Error(Errc::BadParams, "n must be positive");
  std::vector<Arc> arcs;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (u != v) arcs.push_back({u, v});
    }
  }
  return Digraph(n, std::move(arcs));
}

/// 0 -> 1 -> ... -> n-1 -> 0.
inline Digraph directed_cycle(int n) {
  if (n < 2) throw Error(Errc::BadParams, "n must be at least 2");
  std::vector<Arc> arcs;
  for (Vertex v = 0; v < n; ++v) arcs.push_back({v, (v + 1) % n});
  return Digraph(n, std::move(arcs));
}

/// Two internally disjoint paths 0 -> 1 of lengths a and b. Interior vertices
/// of the first path are 2..a, of the second a+1..a+b-1.
inline Digraph theta(int a, int b) {
  if (a < 1 || b < 1 || a + b < 3) throw Error(Errc::BadParams, "theta needs a,b >= 1 and a+b >= 3");
  std::vector<Arc> arcs;
  int next = 2;
  for (int len : {a, b}) {
    Vertex prev = 0;
    for (int i = 1; i < len; ++i) {
      arcs.push_back({prev, next});
      prev = next++;
    }
    arcs.push_back({prev, 1});
  }
  return Digraph(next, std::move(arcs));
}

// ---------------------------------------------------------------- random girth-constrained

struct RandomGirthParams {
  int n = 0;
  int girth_lb = 2;
  int min_outdeg = 2;
  std::uint64_t seed = 0;
  int retries = 20;
  // This vertex only needs out-degree 1 (the rooted variant).
  std::optional<Vertex> relaxed_root;
};

/**
 * Grow-and-check generator. Starts from a random Hamiltonian cycle, then
 * repeatedly picks a vertex u still short of min_outdeg and proposes an arc
 * (u,w) with dist(w,u) + 1 >= girth_lb, so no shorter cycle ever appears.
 * Among eligible heads the ones farthest back from u are preferred (ties
 * broken at random); uniform choice gets stuck on almost every attempt once
 * girth_lb is near n/2. Arcs only shrink distances, so a vertex with no
 * eligible head ends the attempt. The result is re-verified before it is
 * returned. Deterministic in the parameters; Infeasible after `retries`
 * restarts.
 */
inline Digraph random_girth_constrained(const RandomGirthParams& p) {
  if (p.n < 2 || p.girth_lb < 2 || p.min_outdeg < 1) throw Error(Errc::BadParams, "need n >= 2, girth_lb >= 2");
  if (p.relaxed_root && (*p.relaxed_root < 0 || *p.relaxed_root >= p.n)) {
    throw Error(Errc::BadParams, "root out of range");
  }
  if (p.n < p.girth_lb) throw Error(Errc::Infeasible, "girth cannot exceed the vertex count");
  if (p.min_outdeg > p.n - 1) throw Error(Errc::Infeasible, "min out-degree exceeds n-1");
  const int n = p.n;
  auto need = [&](Vertex v) { return p.relaxed_root && v == *p.relaxed_root ? 1 : p.min_outdeg; };
  constexpr int kUnreachable = std::numeric_limits<int>::max();

  for (int attempt = 0; attempt <= p.retries; ++attempt) {
    Rng rng = make_rng(derive_seed(p.seed, static_cast<std::uint64_t>(attempt)));
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<std::vector<Vertex>> out(n), in(n);
    auto add = [&](Vertex u, Vertex w) {
      out[u].push_back(w);
      in[w].push_back(u);
    };
    for (int i = 0; i < n; ++i) add(perm[i], perm[(i + 1) % n]);

    std::vector<int> back(n);
    std::vector<Vertex> queue, short_of, best;
    bool stuck = false;
    for (;;) {
      short_of.clear();
      for (Vertex v = 0; v < n; ++v) {
        if (static_cast<int>(out[v].size()) < need(v)) short_of.push_back(v);
      }
      if (short_of.empty()) break;
      Vertex u = short_of[uniform<std::size_t>(rng, 0, short_of.size() - 1)];

      std::fill(back.begin(), back.end(), kUnreachable);
      back[u] = 0;
      queue.assign(1, u);
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        for (Vertex x : in[queue[qi]]) {
          if (back[x] == kUnreachable) {
            back[x] = back[queue[qi]] + 1;
            queue.push_back(x);
          }
        }
      }
      best.clear();
      int best_back = -1;
      for (Vertex w = 0; w < n; ++w) {
        if (w == u || std::find(out[u].begin(), out[u].end(), w) != out[u].end()) continue;
        if (back[w] != kUnreachable && back[w] + 1 < p.girth_lb) continue;
        if (back[w] > best_back) {
          best_back = back[w];
          best.clear();
        }
        if (back[w] == best_back) best.push_back(w);
      }
      if (best.empty()) {
        stuck = true;
        break;
      }
      add(u, best[uniform<std::size_t>(rng, 0, best.size() - 1)]);
    }
    if (stuck) continue;

    std::vector<Arc> arcs;
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex w : out[u]) arcs.push_back({u, w});
    }
    Digraph d(n, std::move(arcs));
    Distance g = girth(d);
    bool ok = g.finite() && g.value() >= p.girth_lb;
    for (Vertex v = 0; v < n && ok; ++v) ok = d.out_degree(v) >= need(v);
    if (!ok) throw std::logic_error("random_girth_constrained produced an invalid digraph");
    return d;
  }
  throw Error(Errc::Infeasible, "no digraph after " + std::to_string(p.retries) + " restarts");
}

// ---------------------------------------------------------------- mutate

enum class MoveKind { Rewire, AddArc, RemoveArc, Subdivide };

struct Mutation {
  Digraph graph;
  MoveKind move;
};

/**
 * One random local move that keeps the digraph simple with min out-degree 2:
 * rewire an arc's head, add an arc, remove an arc whose tail keeps out-degree
 * >= 2, or subdivide an arc u->w with a new vertex x (u->x->w) that also gets
 * one extra out-arc. Moves are tried in a seeded random order; NoMove if none
 * is legal.
 */
inline Mutation mutate(const Digraph& d, std::uint64_t seed) {
  const int n = d.order();
  auto mind = min_out_degree(d);
  if (!mind || *mind < 2) throw Error(Errc::PreconditionFailed, "mutate needs min out-degree >= 2");
  Rng rng = make_rng(seed);
  std::vector<Arc> arcs = d.arcs();

  std::vector<MoveKind> order{MoveKind::Rewire, MoveKind::AddArc, MoveKind::RemoveArc,
                              MoveKind::Subdivide};
  std::shuffle(order.begin(), order.end(), rng);

  auto pick_head = [&](Vertex u, Vertex avoid) -> std::optional<Vertex> {
    std::vector<Vertex> options;
    for (Vertex w = 0; w < n; ++w) {
      if (w != u && w != avoid && !d.has_arc(u, w)) options.push_back(w);
    }
    if (options.empty()) return std::nullopt;
    return options[uniform<std::size_t>(rng, 0, options.size() - 1)];
  };

  for (MoveKind mv : order) {
    switch (mv) {
      case MoveKind::Rewire: {
        std::vector<std::size_t> idx(arcs.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t i : idx) {
          if (auto w = pick_head(arcs[i].tail, kNoVertex)) {
            auto next = arcs;
            next[i].head = *w;
            return {Digraph(n, std::move(next)), mv};
          }
        }
        break;
      }
      case MoveKind::AddArc: {
        std::vector<Vertex> tails(n);
        std::iota(tails.begin(), tails.end(), 0);
        std::shuffle(tails.begin(), tails.end(), rng);
        for (Vertex u : tails) {
          if (auto w = pick_head(u, kNoVertex)) {
            auto next = arcs;
            next.push_back({u, *w});
            return {Digraph(n, std::move(next)), mv};
          }
        }
        break;
      }
      case MoveKind::RemoveArc: {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < arcs.size(); ++i) {
          if (d.out_degree(arcs[i].tail) >= 3) idx.push_back(i);
        }
        if (idx.empty()) break;
        auto next = arcs;
        next.erase(next.begin() + static_cast<std::ptrdiff_t>(idx[uniform<std::size_t>(rng, 0, idx.size() - 1)]));
        return {Digraph(n, std::move(next)), mv};
      }
      case MoveKind::Subdivide: {
        if (arcs.empty() || n < 2) break;
        const Arc a = arcs[uniform<std::size_t>(rng, 0, arcs.size() - 1)];
        const Vertex x = n;
        // Extra out-neighbour for x: anything but x and w.
        Vertex y = uniform<Vertex>(rng, 0, n - 2);
        if (y >= a.head) ++y;
        auto next = arcs;
        next.erase(std::find(next.begin(), next.end(), a));
        next.push_back({a.tail, x});
        next.push_back({x, a.head});
        next.push_back({x, y});
        return {Digraph(n + 1, std::move(next)), mv};
      }
    }
  }
  throw Error(Errc::NoMove, "no legal move");
}

}  // namespace tbl
