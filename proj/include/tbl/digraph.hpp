#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tbl/error.hpp"

namespace tbl {

// Dense vertex index, valid only relative to the digraph it came from.
using Vertex = int;

inline constexpr Vertex kNoVertex = -1;

struct Arc {
  Vertex tail = 0;
  Vertex head = 0;

  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/**
 * Simple finite digraph: no self-loops, no parallel arcs. Opposite arcs u->v
 * and v->u are distinct and may both be present.
 *
 * Values are immutable after construction; every "mutation" in the library
 * builds a new Digraph. Arcs are kept sorted, and both adjacency directions
 * are sorted, so two digraphs compare equal iff they have the same vertex
 * count and arc set.
 */
class Digraph {
 public:
  Digraph() = default;

  /// Throws Error{OutOfRange|SelfLoop|DuplicateArc}. Input order is irrelevant.
  Digraph(int n, std::vector<Arc> arcs) : n_(n) {
    if (n < 0) throw Error(Errc::OutOfRange, "negative vertex count");
    for (const Arc& a : arcs) check_arc(n, a);
    std::sort(arcs.begin(), arcs.end());
    auto dup = std::adjacent_find(arcs.begin(), arcs.end());
    if (dup != arcs.end()) {
      throw Error(Errc::DuplicateArc,
                  "(" + std::to_string(dup->tail) + "," + std::to_string(dup->head) + ")");
    }
    arcs_ = std::move(arcs);
    out_.assign(n, {});
    in_.assign(n, {});
    for (const Arc& a : arcs_) {
      out_[a.tail].push_back(a.head);
      in_[a.head].push_back(a.tail);
    }
    for (auto& l : in_) std::sort(l.begin(), l.end());
  }

  static void check_arc(int n, const Arc& a) {
    if (a.tail < 0 || a.tail >= n || a.head < 0 || a.head >= n) {
      throw Error(Errc::OutOfRange, "arc (" + std::to_string(a.tail) + "," +
                                        std::to_string(a.head) + ") with n=" + std::to_string(n));
    }
    if (a.tail == a.head) throw Error(Errc::SelfLoop, "at vertex " + std::to_string(a.tail));
  }

  int order() const noexcept { return n_; }
  std::size_t size() const noexcept { return arcs_.size(); }
  bool contains(Vertex v) const noexcept { return v >= 0 && v < n_; }

  const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  const std::vector<Vertex>& out(Vertex v) const { return out_[v]; }
  const std::vector<Vertex>& in(Vertex v) const { return in_[v]; }
  int out_degree(Vertex v) const { return static_cast<int>(out_[v].size()); }
  int in_degree(Vertex v) const { return static_cast<int>(in_[v].size()); }

  bool has_arc(Vertex u, Vertex v) const {
    if (!contains(u) || !contains(v)) return false;
    return std::binary_search(out_[u].begin(), out_[u].end(), v);
  }
  bool has_arc(const Arc& a) const { return has_arc(a.tail, a.head); }

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.n_ == b.n_ && a.arcs_ == b.arcs_;
  }

 private:
  int n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
};

inline Digraph build(int n, std::vector<Arc> arcs) { return Digraph(n, std::move(arcs)); }

// ---------------------------------------------------------------- degrees

struct DegreeStats {
  std::vector<int> out;
  std::vector<int> in;
  // Undefined (nullopt) on the empty digraph.
  std::optional<int> min_out;
  std::optional<int> min_in;
  std::optional<int> max_out;
  std::optional<int> max_in;
};

inline DegreeStats degrees(const Digraph& d) {
  DegreeStats s;
  s.out.resize(d.order());
  s.in.resize(d.order());
  for (Vertex v = 0; v < d.order(); ++v) {
    s.out[v] = d.out_degree(v);
    s.in[v] = d.in_degree(v);
  }
  if (d.order() > 0) {
    s.min_out = *std::min_element(s.out.begin(), s.out.end());
    s.max_out = *std::max_element(s.out.begin(), s.out.end());
    s.min_in = *std::min_element(s.in.begin(), s.in.end());
    s.max_in = *std::max_element(s.in.begin(), s.in.end());
  }
  return s;
}

inline std::optional<int> min_out_degree(const Digraph& d) { return degrees(d).min_out; }

// ---------------------------------------------------------------- deletion

struct Deletion {
  Digraph graph;
  // relabel[old] is the new index, or kNoVertex for deleted vertices.
  std::vector<Vertex> relabel;
};

/// D minus `vertices` (with incident arcs) minus `arcs`; survivors are
/// relabeled densely in increasing order of their old index.
inline Deletion remove(const Digraph& d, std::span<const Vertex> vertices,
                       std::span<const Arc> arcs = {}) {
  std::vector<std::uint8_t> gone(d.order(), 0);
  for (Vertex v : vertices) {
    if (!d.contains(v)) throw Error(Errc::NotPresent, "vertex " + std::to_string(v));
    gone[v] = 1;
  }
  std::vector<Arc> dropped(arcs.begin(), arcs.end());
  for (const Arc& a : dropped) {
    if (!d.has_arc(a)) {
      throw Error(Errc::NotPresent,
                  "arc (" + std::to_string(a.tail) + "," + std::to_string(a.head) + ")");
    }
  }
  std::sort(dropped.begin(), dropped.end());

  Deletion r;
  r.relabel.assign(d.order(), kNoVertex);
  int next = 0;
  for (Vertex v = 0; v < d.order(); ++v) {
    if (!gone[v]) r.relabel[v] = next++;
  }
  std::vector<Arc> kept;
  for (const Arc& a : d.arcs()) {
    if (gone[a.tail] || gone[a.head]) continue;
    if (std::binary_search(dropped.begin(), dropped.end(), a)) continue;
    kept.push_back({r.relabel[a.tail], r.relabel[a.head]});
  }
  r.graph = Digraph(next, std::move(kept));
  return r;
}

/// Subdigraph induced by `keep`; returns the same relabel map shape as remove().
inline Deletion induced_subgraph(const Digraph& d, std::span<const Vertex> keep) {
  std::vector<std::uint8_t> in_keep(d.order(), 0);
  for (Vertex v : keep) {
    if (!d.contains(v)) throw Error(Errc::NotPresent, "vertex " + std::to_string(v));
    in_keep[v] = 1;
  }
  std::vector<Vertex> drop;
  for (Vertex v = 0; v < d.order(); ++v) {
    if (!in_keep[v]) drop.push_back(v);
  }
  return remove(d, drop);
}

// ---------------------------------------------------------------- condensation

struct Condensation {
  // Topological order of strong components: no arc goes from a later
  // component to an earlier one. Each component is sorted.
  std::vector<std::vector<Vertex>> components;
  std::vector<int> component_of;
  bool strongly_connected = false;
  // Index of a component with no outgoing arcs (the last one).
  int sink_component = -1;
};

inline Condensation condensation(const Digraph& d) {
  const int n = d.order();
  Condensation c;
  c.component_of.assign(n, -1);

  // Iterative Tarjan. Components come out sinks-first; reversed at the end.
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<Vertex> stack;
  std::vector<std::pair<Vertex, std::size_t>> call;
  int counter = 0;
  std::vector<std::vector<Vertex>> comps;

  for (Vertex root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      const auto& succ = d.out(v);
      if (pos < succ.size()) {
        Vertex w = succ[pos++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<Vertex> comp;
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
      Vertex done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  std::reverse(comps.begin(), comps.end());
  for (int i = 0; i < static_cast<int>(comps.size()); ++i) {
    for (Vertex v : comps[i]) c.component_of[v] = i;
  }
  c.components = std::move(comps);
  c.strongly_connected = c.components.size() == 1;
  c.sink_component = c.components.empty() ? -1 : static_cast<int>(c.components.size()) - 1;
  return c;
}

inline bool is_strongly_connected(const Digraph& d) {
  return d.order() > 0 && condensation(d).strongly_connected;
}

// ---------------------------------------------------------------- text formats

/// Canonical arc-list form: "n m" then sorted "u v" lines, trailing newline.
inline std::string serialize(const Digraph& d) {
  std::string s = std::to_string(d.order()) + " " + std::to_string(d.size()) + "\n";
  for (const Arc& a : d.arcs()) {
    s += std::to_string(a.tail);
    s += ' ';
    s += std::to_string(a.head);
    s += '\n';
  }
  return s;
}

namespace detail {

inline bool parse_ints(std::string_view line, int want, long long* out) {
  std::size_t pos = 0;
  for (int i = 0; i < want; ++i) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos == line.size()) return false;
    const char* first = line.data() + pos;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, out[i]);
    if (ec != std::errc() || ptr == first) return false;
    pos = static_cast<std::size_t>(ptr - line.data());
  }
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
  return pos == line.size();
}

}  // namespace detail

/// Parses the arc-list format. Lines starting with '#' and blank lines are
/// skipped. Errors carry the 1-based line number of the offending line.
inline Digraph parse_digraph(std::string_view text) {
  int line_no = 0;
  std::size_t start = 0;
  bool have_header = false;
  long long n = 0, m = 0;
  std::vector<Arc> arcs;
  std::vector<Arc> seen;

  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    long long v[2];
    if (!detail::parse_ints(line, 2, v)) {
      throw Error(Errc::SyntaxError, "expected two integers", line_no);
    }
    if (!have_header) {
      if (v[0] < 0 || v[1] < 0 || v[0] > 1'000'000'000) {
        throw Error(Errc::SyntaxError, "bad header", line_no);
      }
      n = v[0];
      m = v[1];
      have_header = true;
      continue;
    }
    if (static_cast<long long>(arcs.size()) == m) {
      throw Error(Errc::SyntaxError, "more arcs than declared", line_no);
    }
    if (v[0] < 0 || v[0] >= n || v[1] < 0 || v[1] >= n) {
      throw Error(Errc::OutOfRange,
                  "arc (" + std::to_string(v[0]) + "," + std::to_string(v[1]) + ")", line_no);
    }
    Arc a{static_cast<Vertex>(v[0]), static_cast<Vertex>(v[1])};
    if (a.tail == a.head) throw Error(Errc::SelfLoop, "", line_no);
    auto it = std::lower_bound(seen.begin(), seen.end(), a);
    if (it != seen.end() && *it == a) throw Error(Errc::DuplicateArc, "", line_no);
    seen.insert(it, a);
    arcs.push_back(a);
  }
  if (!have_header) throw Error(Errc::SyntaxError, "missing header", line_no + 1);
  if (static_cast<long long>(arcs.size()) != m) {
    throw Error(Errc::SyntaxError,
                "declared " + std::to_string(m) + " arcs, found " + std::to_string(arcs.size()),
                line_no + 1);
  }
  return Digraph(static_cast<int>(n), std::move(arcs));
}

inline Digraph read_digraph(std::istream& in) {
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_digraph(ss.str());
}

/// DOT export; isolated vertices are listed so the vertex count survives.
inline std::string to_dot(const Digraph& d) {
  std::string s = "digraph G {\n";
  for (Vertex v = 0; v < d.order(); ++v) {
    if (d.out_degree(v) == 0 && d.in_degree(v) == 0) s += "  " + std::to_string(v) + ";\n";
  }
  for (const Arc& a : d.arcs()) {
    s += "  " + std::to_string(a.tail) + " -> " + std::to_string(a.head) + ";\n";
  }
  s += "}\n";
  return s;
}

inline std::ostream& operator<<(std::ostream& os, const Arc& a) {
  return os << '(' << a.tail << ',' << a.head << ')';
}

}  // namespace tbl
