#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "tbl/connectivity.hpp"
#include "tbl/digraph.hpp"
#include "tbl/error.hpp"
#include "tbl/metrics.hpp"
#include "tbl/parallel.hpp"

namespace tbl {

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

/// kDefaultBudget unless the TBL_BUDGET environment variable holds a number.
inline std::uint64_t default_search_budget() {
  if (const char* env = std::getenv("TBL_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return kDefaultBudget;
}

/// Two internally disjoint s->t paths with ||p1|| >= k and ||p2|| >= l.
struct SubdivisionWitness {
  Vertex s = 0;
  Vertex t = 0;
  Path p1;
  Path p2;
  int k = 0;
  int l = 0;

  friend bool operator==(const SubdivisionWitness&, const SubdivisionWitness&) = default;
};

/// All witness invariants against D. Lengths may be met in either role.
inline bool verify_witness(const Digraph& d, const SubdivisionWitness& w) {
  if (w.s == w.t || !d.contains(w.s) || !d.contains(w.t)) return false;
  for (const Path* p : {&w.p1, &w.p2}) {
    if (!is_path_in(d, *p) || p->init() != w.s || p->term() != w.t) return false;
  }
  if (w.p1 == w.p2) return false;
  std::vector<std::uint8_t> inner(d.order(), 0);
  for (std::size_t i = 1; i + 1 < w.p1.vertices.size(); ++i) inner[w.p1.vertices[i]] = 1;
  for (std::size_t i = 1; i + 1 < w.p2.vertices.size(); ++i) {
    if (inner[w.p2.vertices[i]]) return false;
  }
  const int a = w.p1.length(), b = w.p2.length();
  return (a >= w.k && b >= w.l) || (b >= w.k && a >= w.l);
}

/// Node-expansion counter. Exhaustion raises Error{BudgetExceeded}, which
/// means "inconclusive", never "no".
class Budget {
 public:
  explicit Budget(std::uint64_t limit) : limit_(limit) {}

  void spend() {
    if (++used_ > limit_) throw Error(Errc::BudgetExceeded, "node-expansion budget exhausted");
    if (cancel_ && (used_ & 0xff) == 0 && cancel_->load(std::memory_order_relaxed) < index_) {
      throw Cancelled{};
    }
  }
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

  // Lets a parallel scan abandon work that can no longer win.
  struct Cancelled {};
  void cancel_when_below(const std::atomic<std::size_t>* best, std::size_t index) {
    cancel_ = best;
    index_ = index;
  }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
  const std::atomic<std::size_t>* cancel_ = nullptr;
  std::size_t index_ = 0;
};

namespace detail {

// Reusable BFS over the digraph minus `blocked`; the source is always expanded.
class Sweep {
 public:
  explicit Sweep(int n) : dist_(n, -1), parent_(n, kNoVertex) { order_.reserve(n); }

  template <bool Forward>
  void run(const Digraph& d, Vertex src, const std::vector<std::uint8_t>& blocked) {
    for (Vertex v : order_) dist_[v] = -1;
    order_.clear();
    dist_[src] = 0;
    parent_[src] = kNoVertex;
    order_.push_back(src);
    for (std::size_t qi = 0; qi < order_.size(); ++qi) {
      Vertex v = order_[qi];
      for (Vertex w : Forward ? d.out(v) : d.in(v)) {
        if (dist_[w] != -1 || blocked[w]) continue;
        dist_[w] = dist_[v] + 1;
        parent_[w] = v;
        order_.push_back(w);
      }
    }
  }
  int dist(Vertex v) const { return dist_[v]; }
  Vertex parent(Vertex v) const { return parent_[v]; }
  const std::vector<Vertex>& reached() const { return order_; }

 private:
  std::vector<int> dist_;
  std::vector<Vertex> parent_;
  std::vector<Vertex> order_;
};

// Depth-first search for a simple cur->t path of length >= L in the digraph
// minus `blocked` (which holds forbidden vertices and the current prefix).
// A branch closes as soon as the prefix plus a shortest completion reaches L,
// and is cut when t is unreachable or when even a path through every vertex
// that is both reachable and co-reachable cannot reach L.
class LongPath {
 public:
  LongPath(const Digraph& d, Vertex t, int min_length, std::vector<std::uint8_t> blocked,
           Budget& budget)
      : d_(d), t_(t), L_(min_length), blocked_(std::move(blocked)), budget_(budget),
        fwd_(d.order()), back_(d.order()) {}

  std::optional<Path> from(Vertex s) {
    path_.assign(1, s);
    blocked_[s] = 1;
    bool ok = dfs(s, 0);
    blocked_[s] = 0;
    if (!ok) return std::nullopt;
    return Path{path_};
  }

 private:
  bool dfs(Vertex cur, int len) {
    budget_.spend();
    fwd_.run<true>(d_, cur, blocked_);
    if (fwd_.dist(t_) < 0) return false;
    if (len + fwd_.dist(t_) >= L_) {
      std::vector<Vertex> tail;
      for (Vertex x = t_; x != cur; x = fwd_.parent(x)) tail.push_back(x);
      path_.insert(path_.end(), tail.rbegin(), tail.rend());
      return true;
    }
    back_.run<false>(d_, t_, blocked_);
    int usable = 0;
    for (Vertex v : fwd_.reached()) {
      if (v != cur && back_.dist(v) >= 0) ++usable;
    }
    if (len + usable < L_) return false;

    std::vector<Vertex> succ;
    for (Vertex y : d_.out(cur)) {
      if (!blocked_[y] && y != t_ && back_.dist(y) >= 0) succ.push_back(y);
    }
    // Longer remaining routes first.
    std::stable_sort(succ.begin(), succ.end(),
                     [&](Vertex a, Vertex b) { return back_.dist(a) > back_.dist(b); });
    for (Vertex y : succ) {
      blocked_[y] = 1;
      path_.push_back(y);
      if (dfs(y, len + 1)) return true;
      path_.pop_back();
      blocked_[y] = 0;
    }
    return false;
  }

  const Digraph& d_;
  Vertex t_;
  int L_;
  std::vector<std::uint8_t> blocked_;
  Budget& budget_;
  Sweep fwd_, back_;
  std::vector<Vertex> path_;
};

}  // namespace detail

/**
 * A simple s->t path of length >= min_length avoiding `forbidden`, or nullopt
 * if none exists. Exact; raises BudgetExceeded when the search runs out.
 */
inline std::optional<Path> exists_path_min_length(const Digraph& d, Vertex s, Vertex t,
                                                  int min_length,
                                                  const std::vector<std::uint8_t>& forbidden,
                                                  Budget& budget) {
  if (s == t) throw Error(Errc::PreconditionFailed, "s == t");
  std::vector<std::uint8_t> blocked(d.order(), 0);
  for (std::size_t v = 0; v < forbidden.size(); ++v) blocked[v] = forbidden[v];
  if (blocked[s] || blocked[t]) throw Error(Errc::PreconditionFailed, "endpoint is forbidden");
  detail::LongPath search(d, t, min_length, std::move(blocked), budget);
  return search.from(s);
}

inline std::optional<Path> exists_path_min_length(const Digraph& d, Vertex s, Vertex t,
                                                  int min_length,
                                                  std::span<const Vertex> forbidden = {},
                                                  std::uint64_t budget = kDefaultBudget) {
  std::vector<std::uint8_t> mask(d.order(), 0);
  for (Vertex v : forbidden) mask.at(v) = 1;
  Budget b(budget);
  return exists_path_min_length(d, s, t, min_length, mask, b);
}

// ---------------------------------------------------------------- girth shortcut

/**
 * Fast sufficient test. For s != t with two internally disjoint s->t paths,
 * each path closed up with a shortest t->s path is a closed walk containing a
 * cycle, so each has length >= g(D) - dist(t,s). Any pair with
 * g(D) - dist(t,s) >= max(k,l) therefore yields a witness.
 */
inline std::optional<SubdivisionWitness> girth_shortcut(const Digraph& d, int k, int l) {
  Distance g = girth(d);
  if (!g.finite()) return std::nullopt;
  const int need = std::max(k, l);
  const auto dist = all_pairs_distances(d);
  for (Vertex s = 0; s < d.order(); ++s) {
    for (Vertex t = 0; t < d.order(); ++t) {
      if (s == t || dist[t][s] < 0 || g.value() - dist[t][s] < need) continue;
      auto mp = internally_disjoint_paths(d, s, t, {}, 2);
      if (mp.count < 2) continue;
      SubdivisionWitness w{s, t, mp.paths[0], mp.paths[1], k, l};
      if (!verify_witness(d, w)) throw std::logic_error("girth shortcut produced a bad witness");
      return w;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- exact finder

struct FinderOptions {
  // Node expansions allowed per (s,t) pair search.
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = 1;
  bool use_girth_shortcut = true;
};

namespace detail {

// Searches one ordered pair (s,t): enumerates first paths P1 with
// ||P1|| >= k1, then asks for P2 with ||P2|| >= k2 avoiding P1's interior.
class PairSearch {
 public:
  PairSearch(const Digraph& d, Vertex s, Vertex t, int k1, int k2, Budget& budget)
      : d_(d), s_(s), t_(t), k1_(k1), k2_(k2), budget_(budget), on_(d.order(), 0),
        fwd_(d.order()), back_(d.order()), p2_side_(d.order()) {}

  std::optional<std::pair<Path, Path>> run() {
    path_.assign(1, s_);
    on_[s_] = 1;
    dfs(s_, 0);
    on_[s_] = 0;
    return found_;
  }

 private:
  bool dfs(Vertex cur, int len) {
    budget_.spend();
    // P1 must still be completable: t reachable from cur off the prefix.
    fwd_.run<true>(d_, cur, on_);
    if (fwd_.dist(t_) < 0) return false;
    back_.run<false>(d_, t_, on_);
    int usable = 0;
    for (Vertex v : fwd_.reached()) {
      if (v != cur && back_.dist(v) >= 0) ++usable;
    }
    if (len + usable < k1_) return false;
    // P2 must still exist: s reaches t avoiding the prefix interior.
    // The sweep always expands its source, so s itself needs no unmasking.
    if (cur != s_) {
      p2_side_.run<true>(d_, s_, on_);
      if (p2_side_.dist(t_) < 0) return false;
    }

    std::vector<Vertex> succ;
    for (Vertex y : d_.out(cur)) {
      if (y == t_ || (!on_[y] && back_.dist(y) >= 0)) succ.push_back(y);
    }
    std::stable_sort(succ.begin(), succ.end(), [&](Vertex a, Vertex b) {
      int da = a == t_ ? 0 : back_.dist(a);
      int db = b == t_ ? 0 : back_.dist(b);
      return da > db;
    });
    for (Vertex y : succ) {
      if (y == t_) {
        if (len + 1 >= k1_ && try_close()) return true;
        continue;
      }
      on_[y] = 1;
      path_.push_back(y);
      if (dfs(y, len + 1)) return true;
      path_.pop_back();
      on_[y] = 0;
    }
    return false;
  }

  // P1 = path_ + t. Look for P2 outside P1's interior.
  bool try_close() {
    std::vector<std::uint8_t> interior(d_.order(), 0);
    for (std::size_t i = 1; i < path_.size(); ++i) interior[path_[i]] = 1;
    const bool direct = path_.size() == 1;
    std::string key(interior.begin(), interior.end());
    if (failed_.count(key)) return false;
    const int need = direct ? std::max(k2_, 2) : k2_;
    auto p2 = exists_path_min_length(d_, s_, t_, need, interior, budget_);
    if (!p2) {
      failed_.insert(std::move(key));
      return false;
    }
    Path p1{path_};
    p1.vertices.push_back(t_);
    found_ = std::pair{std::move(p1), std::move(*p2)};
    return true;
  }

  const Digraph& d_;
  Vertex s_, t_;
  int k1_, k2_;
  Budget& budget_;
  std::vector<std::uint8_t> on_;
  Sweep fwd_, back_, p2_side_;
  std::vector<Vertex> path_;
  std::unordered_set<std::string> failed_;
  std::optional<std::pair<Path, Path>> found_;
};

}  // namespace detail

/**
 * Exact decision: a C(k,l)-subdivision witness, or nullopt if D has none.
 *
 * The girth shortcut runs first. Otherwise every ordered pair (s,t) with at
 * least two internally disjoint s->t paths is searched, pairs with more
 * disjoint paths first (ties by (s,t)). The returned witness is the one from
 * the earliest pair in that order that has one, whatever the thread count.
 * Raises BudgetExceeded if no witness was found and some pair ran out of
 * budget.
 */
inline std::optional<SubdivisionWitness> find_subdivision(const Digraph& d, int k, int l,
                                                          const FinderOptions& opt = {}) {
  if (k < 1 || l < 1) throw Error(Errc::BadParams, "k and l must be positive");
  if (opt.use_girth_shortcut) {
    if (auto w = girth_shortcut(d, k, l)) return w;
  }

  struct Candidate {
    int count;
    Vertex s, t;
  };
  std::vector<Candidate> pairs;
  for (Vertex s = 0; s < d.order(); ++s) {
    auto reach = distances_from(d, s);
    for (Vertex t = 0; t < d.order(); ++t) {
      if (s == t || reach[t] < 0) continue;
      int c = internally_disjoint_paths(d, s, t).count;
      if (c >= 2) pairs.push_back({c, s, t});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Candidate& a, const Candidate& b) { return a.count > b.count; });

  const int k1 = std::max(k, l), k2 = std::min(k, l);
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::atomic<std::size_t> best{kNone};
  std::vector<std::optional<SubdivisionWitness>> found(pairs.size());
  std::vector<std::uint8_t> exhausted(pairs.size(), 0);

  parallel_for(pairs.size(), opt.threads, [&](std::size_t i) {
    if (i > best.load()) return;
    const auto [count, s, t] = pairs[i];
    Budget budget(opt.budget);
    budget.cancel_when_below(&best, i);
    try {
      auto r = detail::PairSearch(d, s, t, k1, k2, budget).run();
      if (!r) return;
      // p1 carries the longer requirement; map back to (k, l) roles.
      SubdivisionWitness w{s, t, r->first, r->second, k, l};
      if (k < l) std::swap(w.p1, w.p2);
      found[i] = std::move(w);
      atomic_min(best, i);
    } catch (const Budget::Cancelled&) {
    } catch (const Error& e) {
      if (e.code() != Errc::BudgetExceeded) throw;
      exhausted[i] = 1;
    }
  });

  if (best.load() != kNone) {
    const auto& w = *found[best.load()];
    if (!verify_witness(d, w)) throw std::logic_error("finder produced a bad witness");
    return w;
  }
  if (std::find(exhausted.begin(), exhausted.end(), 1) != exhausted.end()) {
    throw Error(Errc::BudgetExceeded, "subdivision search inconclusive");
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- brute-force oracle

/**
 * Ground truth for small digraphs (n <= 64): lists every simple s->t path for
 * every ordered pair and tests every ordered pair of paths against the
 * witness predicate. No pruning of any kind.
 */
inline bool brute_oracle(const Digraph& d, int k, int l) {
  const int n = d.order();
  if (n > 64) throw Error(Errc::PreconditionFailed, "brute_oracle supports n <= 64");
  struct Entry {
    int length;
    std::uint64_t interior;
    bool direct;
  };
  for (Vertex s = 0; s < n; ++s) {
    // All simple paths from s, bucketed by terminal vertex.
    std::vector<std::vector<Entry>> by_end(n);
    std::vector<Vertex> path{s};
    std::uint64_t on = 1ULL << s;
    auto rec = [&](auto&& self, Vertex x) -> void {
      for (Vertex y : d.out(x)) {
        if (on & (1ULL << y)) continue;
        std::uint64_t inner = on & ~(1ULL << s);
        by_end[y].push_back({static_cast<int>(path.size()), inner, path.size() == 1});
        on |= 1ULL << y;
        path.push_back(y);
        self(self, y);
        path.pop_back();
        on &= ~(1ULL << y);
      }
    };
    rec(rec, s);
    for (Vertex t = 0; t < n; ++t) {
      const auto& ps = by_end[t];
      for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i].length < k) continue;
        for (std::size_t j = 0; j < ps.size(); ++j) {
          if (i == j || ps[j].length < l) continue;
          if (ps[i].interior & ps[j].interior) continue;
          // Distinct paths with disjoint interiors; both direct is impossible
          // since i != j and the direct arc appears once.
          return true;
        }
      }
    }
  }
  return false;
}

}  // namespace tbl
