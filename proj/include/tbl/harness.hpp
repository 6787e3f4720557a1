#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tbl/claim_report.hpp"
#include "tbl/digraph.hpp"
#include "tbl/error.hpp"
#include "tbl/generators.hpp"
#include "tbl/metrics.hpp"
#include "tbl/parallel.hpp"
#include "tbl/proof_probe.hpp"
#include "tbl/rng.hpp"
#include "tbl/subdivision.hpp"

namespace tbl {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------- json helpers

inline Json to_json(const SubdivisionWitness& w) {
  return Json{{"s", w.s}, {"t", w.t}, {"p1", w.p1.vertices}, {"p2", w.p2.vertices}, {"k", w.k}, {"l", w.l}};
}

inline SubdivisionWitness witness_from_json(const Json& j) {
  SubdivisionWitness w;
  w.s = j.at("s").get<Vertex>();
  w.t = j.at("t").get<Vertex>();
  w.p1.vertices = j.at("p1").get<std::vector<Vertex>>();
  w.p2.vertices = j.at("p2").get<std::vector<Vertex>>();
  w.k = j.at("k").get<int>();
  w.l = j.at("l").get<int>();
  return w;
}

inline Json to_json(const ClaimReport& r) {
  Json j{{"claim", r.claim}, {"status", std::string(status_name(r.status))}};
  if (r.evidence) {
    const Evidence& e = *r.evidence;
    Json ev{{"kind", e.kind}};
    if (!e.vertices.empty()) ev["vertices"] = e.vertices;
    if (!e.indices.empty()) ev["indices"] = e.indices;
    if (e.value) ev["value"] = *e.value;
    if (!e.paths.empty()) ev["paths"] = e.paths;
    j["evidence"] = std::move(ev);
  }
  if (!r.note.empty()) j["note"] = r.note;
  if (!r.parts.empty()) {
    Json parts = Json::array();
    for (const auto& p : r.parts) parts.push_back(to_json(p));
    j["parts"] = std::move(parts);
  }
  return j;
}

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
inline std::string instance_hash(const Digraph& d) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize(d)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[i] = hex[h & 0xf];
  return s;
}

/// Copy of a report with every "elapsed_ms" member removed, for comparisons.
inline Json strip_timing(Json j) {
  if (j.is_object()) {
    j.erase("elapsed_ms");
    for (auto& [key, value] : j.items()) value = strip_timing(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = strip_timing(value);
  }
  return j;
}

// ---------------------------------------------------------------- verdicts

enum class Verdict { Found, None, BudgetExceeded, Infeasible };

constexpr std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Found: return "found";
    case Verdict::None: return "none";
    case Verdict::BudgetExceeded: return "budget_exceeded";
    case Verdict::Infeasible: return "infeasible";
  }
  return "unknown";
}

struct FinderRun {
  Verdict verdict = Verdict::None;
  std::optional<SubdivisionWitness> witness;
  double elapsed_ms = 0;
};

/// find_subdivision with BudgetExceeded folded into the verdict. A returned
/// witness that fails verify_witness is a bug and raises logic_error.
inline FinderRun run_finder(const Digraph& d, int k, int l, const FinderOptions& opt) {
  FinderRun r;
  auto t0 = std::chrono::steady_clock::now();
  try {
    r.witness = find_subdivision(d, k, l, opt);
    r.verdict = r.witness ? Verdict::Found : Verdict::None;
  } catch (const Error& e) {
    if (e.code() != Errc::BudgetExceeded) throw;
    r.verdict = Verdict::BudgetExceeded;
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (r.witness && !verify_witness(d, *r.witness)) throw std::logic_error("finder returned an invalid witness");
  return r;
}

// ---------------------------------------------------------------- report

struct Summary {
  int trials = 0;
  int success = 0;
  int failures = 0;
  int inconclusive = 0;
  int budget_exceeded = 0;
  int infeasible = 0;
  int refutations = 0;
};

inline Json to_json(const Summary& s) {
  return Json{{"trials", s.trials},         {"success", s.success},
              {"failures", s.failures},     {"inconclusive", s.inconclusive},
              {"budget_exceeded", s.budget_exceeded}, {"infeasible", s.infeasible},
              {"refutations", s.refutations}};
}

struct SearchReport {
  std::string mode;
  Json parameters = Json::object();
  std::vector<Json> trials;
  Summary summary;
  std::vector<Json> candidates;
  std::vector<std::string> notes;
  std::optional<Json> refutation;

  Json to_json() const {
    Json j{{"schema_version", kSchemaVersion}, {"mode", mode}, {"parameters", parameters}};
    j["trials"] = Json::array();
    for (const auto& t : trials) j["trials"].push_back(t);
    j["summary"] = tbl::to_json(summary);
    j["candidates"] = Json::array();
    for (const auto& c : candidates) j["candidates"].push_back(c);
    j["notes"] = notes;
    if (refutation) j["refutation"] = *refutation;
    return j;
  }
};

struct RunOptions {
  unsigned threads = 1;
  std::uint64_t finder_budget = default_search_budget();
};

// ---------------------------------------------------------------- verify-theorem

struct TheoremParams {
  int k = 1;
  int trials = 0;
  int nmin = 0;
  int nmax = 0;
  std::uint64_t seed = 0;
  std::optional<Vertex> root;
};

inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) { return seed ^ index; }

/**
 * Random instances with girth >= 4k+2 and min out-degree 2 (one vertex
 * relaxed to 1 in rooted mode); every one should contain a C(k,k)
 * subdivision. A "none" verdict is a refutation: records after the first
 * refuting trial are dropped and the instance is attached in full.
 */
inline SearchReport verify_theorem(const TheoremParams& p, const RunOptions& run = {}) {
  const int g = 4 * p.k + 2;
  if (p.k < 1 || p.trials < 0) throw Error(Errc::BadParams, "need k >= 1 and trials >= 0");
  if (p.nmin < g || p.nmax < p.nmin) {
    throw Error(Errc::BadParams, "need " + std::to_string(g) + " <= nmin <= nmax");
  }
  if (p.root && (*p.root < 0 || *p.root >= p.nmin)) throw Error(Errc::BadParams, "root must lie in [0, nmin)");

  SearchReport rep;
  rep.mode = "verify-theorem";
  rep.parameters = Json{{"k", p.k},         {"trials", p.trials}, {"nmin", p.nmin},
                        {"nmax", p.nmax},   {"girth_lb", g},      {"seed", p.seed},
                        {"budget", run.finder_budget}};
  rep.parameters["root"] = p.root ? Json(*p.root) : Json(nullptr);

  struct Slot {
    Json record;
    Verdict verdict = Verdict::None;
    std::string instance;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(p.trials));
  const std::uint64_t span = static_cast<std::uint64_t>(p.nmax - p.nmin + 1);

  parallel_for(slots.size(), run.threads, [&](std::size_t i) {
    const std::uint64_t s = trial_seed(p.seed, i);
    const int n = p.nmin + static_cast<int>(mix64(s) % span);
    Slot& slot = slots[i];
    Json rec{{"index", i}, {"seed", s}, {"n", n}};
    try {
      Digraph d = random_girth_constrained({n, g, 2, s, 20, p.root});
      FinderOptions fo;
      fo.budget = run.finder_budget;
      FinderRun fr = run_finder(d, p.k, p.k, fo);
      slot.verdict = fr.verdict;
      rec["instance_hash"] = instance_hash(d);
      rec["m"] = d.size();
      rec["girth"] = girth(d).value();
      rec["min_outdeg"] = *min_out_degree(d);
      rec["verdict"] = verdict_name(fr.verdict);
      rec["witness"] = fr.witness ? to_json(*fr.witness) : Json(nullptr);
      rec["elapsed_ms"] = fr.elapsed_ms;
      if (fr.verdict == Verdict::None) slot.instance = serialize(d);
    } catch (const Error& e) {
      if (e.code() != Errc::Infeasible) throw;
      slot.verdict = Verdict::Infeasible;
      rec["verdict"] = verdict_name(Verdict::Infeasible);
      rec["witness"] = nullptr;
      rec["note"] = e.what();
    }
    slot.record = std::move(rec);
  });

  for (std::size_t i = 0; i < slots.size(); ++i) {
    Slot& slot = slots[i];
    rep.trials.push_back(slot.record);
    ++rep.summary.trials;
    switch (slot.verdict) {
      case Verdict::Found: ++rep.summary.success; break;
      case Verdict::BudgetExceeded:
        ++rep.summary.budget_exceeded;
        ++rep.summary.inconclusive;
        break;
      case Verdict::Infeasible:
        ++rep.summary.infeasible;
        ++rep.summary.inconclusive;
        break;
      case Verdict::None:
        ++rep.summary.failures;
        ++rep.summary.refutations;
        rep.refutation = Json{{"trial", i}, {"seed", slot.record["seed"]}, {"graph", slot.instance}};
        rep.notes.push_back("refutation at trial " + std::to_string(i) +
                            ": no C(k,k) subdivision found; the instance is attached and the run stopped");
        break;
    }
    if (rep.refutation) break;
  }
  return rep;
}

// ---------------------------------------------------------------- verify-construction

/// Position pairs per block up to rotation of the block cycle: {0,d} for
/// d in [1, k/2]. Every D_k is isomorphic to one built from these.
inline std::vector<std::vector<std::pair<int, int>>> dk_choice_representatives(int k) {
  std::vector<std::pair<int, int>> per_block;
  for (int d = 1; d <= k / 2; ++d) per_block.push_back({0, d});
  std::vector<std::vector<std::pair<int, int>>> out;
  std::vector<std::size_t> digit(k, 0);
  for (;;) {
    std::vector<std::pair<int, int>> choice;
    for (int i = 0; i < k; ++i) choice.push_back(per_block[digit[i]]);
    out.push_back(std::move(choice));
    int i = k - 1;
    while (i >= 0 && ++digit[i] == per_block.size()) digit[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

/**
 * Certifies D_k: min out-degree exactly 2, girth exactly k and, for k >= 3,
 * no C(k,k) subdivision. For k = 2 the verdict is recorded only. For k = 3
 * the verdict is also cross-checked by the brute-force oracle.
 */
inline SearchReport verify_construction(int k, bool all_choices, const RunOptions& run = {}) {
  if (k < 2) throw Error(Errc::BadParams, "k must be at least 2");
  SearchReport rep;
  rep.mode = "verify-construction";
  rep.parameters = Json{{"k", k}, {"all_choices", all_choices}, {"budget", run.finder_budget}};

  std::vector<std::vector<std::pair<int, int>>> choices =
      all_choices ? dk_choice_representatives(k) : std::vector<std::vector<std::pair<int, int>>>{{}};
  std::vector<Json> records(choices.size());
  std::vector<Verdict> verdicts(choices.size());
  std::vector<std::uint8_t> ok(choices.size(), 0);
  const bool asserted = k >= 3;

  parallel_for(choices.size(), run.threads, [&](std::size_t i) {
    DkParams params{k, choices[i]};
    Digraph d = construct_dk(params);
    FinderOptions fo;
    fo.budget = run.finder_budget;
    FinderRun fr = run_finder(d, k, k, fo);
    verdicts[i] = fr.verdict;
    const int g = girth(d).value();
    const int dmin = *min_out_degree(d);
    Json choice = Json::array();
    for (int b = 0; b < k; ++b) {
      auto pr = params.choice.empty() ? std::pair{0, 1} : params.choice[b];
      choice.push_back(Json::array({pr.first, pr.second}));
    }
    Json rec{{"index", i},     {"choice", choice}, {"instance_hash", instance_hash(d)},
             {"n", d.order()}, {"m", d.size()},    {"girth", g},
             {"min_outdeg", dmin}, {"verdict", verdict_name(fr.verdict)}};
    rec["witness"] = fr.witness ? to_json(*fr.witness) : Json(nullptr);
    bool pass = dmin == 2 && g == k;
    if (asserted) pass = pass && fr.verdict == Verdict::None;
    if (k == 3) {
      bool oracle = brute_oracle(d, k, k);
      rec["oracle"] = oracle ? "found" : "none";
      if (fr.verdict != Verdict::BudgetExceeded) pass = pass && oracle == (fr.verdict == Verdict::Found);
    }
    rec["verdict_asserted"] = asserted;
    rec["pass"] = pass;
    rec["elapsed_ms"] = fr.elapsed_ms;
    ok[i] = pass;
    records[i] = std::move(rec);
  });

  for (std::size_t i = 0; i < records.size(); ++i) {
    rep.trials.push_back(records[i]);
    ++rep.summary.trials;
    if (verdicts[i] == Verdict::BudgetExceeded) {
      ++rep.summary.budget_exceeded;
      ++rep.summary.inconclusive;
    } else if (ok[i]) {
      ++rep.summary.success;
    } else {
      ++rep.summary.failures;
    }
  }
  if (!asserted) rep.notes.push_back("k = 2: the finder verdict is recorded, not asserted");
  return rep;
}

// ---------------------------------------------------------------- explore-gap

struct GapParams {
  int k = 3;
  int target_girth = 4;
  // Number of candidate evaluations.
  int budget = 0;
  std::uint64_t seed = 0;
  int population = 8;
  std::optional<std::filesystem::path> out_dir;
};

struct CandidateEval {
  std::string graph;  // canonical serialization
  int n = 0;
  int m = 0;
  int girth = 0;  // 0 for acyclic
  int min_outdeg = 0;
  Verdict verdict = Verdict::None;
  double elapsed_ms = 0;

  bool qualifies(int target) const { return min_outdeg >= 2 && girth >= target && verdict == Verdict::None; }
};

inline CandidateEval evaluate_candidate(const Digraph& d, int k, const FinderOptions& fo) {
  CandidateEval e;
  e.graph = serialize(d);
  e.n = d.order();
  e.m = d.size();
  Distance g = girth(d);
  e.girth = g.finite() ? g.value() : 0;
  e.min_outdeg = min_out_degree(d).value_or(0);
  FinderRun fr = run_finder(d, k, k, fo);
  e.verdict = fr.verdict;
  e.elapsed_ms = fr.elapsed_ms;
  return e;
}

/// Re-derives all three certificates from the serialized text alone.
inline bool recertify(const std::string& text, int k, int target, const FinderOptions& fo) {
  Digraph d = parse_digraph(text);
  return evaluate_candidate(d, k, fo).qualifies(target);
}

/**
 * Seeded evolutionary search for digraphs with min out-degree 2, girth >=
 * target and no C(k,k) subdivision. The population starts with D_k followed
 * by random girth-constrained digraphs; each generation mutates every member
 * once and keeps the best `population` distinct digraphs by (no witness,
 * girth, -n). `budget` caps the number of evaluations, D_k first.
 */
inline SearchReport explore_gap(const GapParams& p, const RunOptions& run = {}) {
  if (p.k < 2) throw Error(Errc::BadParams, "k must be at least 2");
  if (p.target_girth < p.k || p.target_girth > 4 * p.k + 1) {
    throw Error(Errc::BadParams, "target girth must lie in [k, 4k+1]");
  }
  if (p.budget < 0 || p.population < 1) throw Error(Errc::BadParams, "need budget >= 0, population >= 1");

  SearchReport rep;
  rep.mode = "explore-gap";
  rep.parameters = Json{{"k", p.k},       {"target_girth", p.target_girth}, {"budget", p.budget},
                        {"seed", p.seed}, {"population", p.population},     {"finder_budget", run.finder_budget}};
  FinderOptions fo;
  fo.budget = run.finder_budget;

  // Subdivision moves grow n; children beyond this are not kept.
  const int max_n = std::max(p.k + p.k * p.k, 2 * p.target_girth + 8) + 8;

  struct Member {
    CandidateEval eval;
    Digraph graph;
  };
  auto better = [](const CandidateEval& a, const CandidateEval& b) {
    auto key = [](const CandidateEval& e) {
      return std::tuple{e.verdict == Verdict::None, e.girth, -e.n};
    };
    if (key(a) != key(b)) return key(a) > key(b);
    return a.graph < b.graph;
  };

  std::vector<Member> population;
  std::set<std::string> seen, certified;
  int evaluations = 0;
  int generation = 0;

  auto evaluate_batch = [&](std::vector<Digraph> batch, std::vector<std::string> origin) {
    const std::size_t take = std::min<std::size_t>(batch.size(), static_cast<std::size_t>(p.budget - evaluations));
    batch.resize(take);
    std::vector<CandidateEval> evals(take);
    parallel_for(take, run.threads, [&](std::size_t i) { evals[i] = evaluate_candidate(batch[i], p.k, fo); });
    for (std::size_t i = 0; i < take; ++i) {
      const CandidateEval& e = evals[i];
      ++evaluations;
      ++rep.summary.trials;
      Json rec{{"index", evaluations - 1},  {"generation", generation},      {"origin", origin[i]},
               {"instance_hash", instance_hash(batch[i])}, {"n", e.n}, {"m", e.m},
               {"girth", e.girth},          {"min_outdeg", e.min_outdeg},    {"verdict", verdict_name(e.verdict)},
               {"elapsed_ms", e.elapsed_ms}};
      rep.trials.push_back(std::move(rec));
      if (e.verdict == Verdict::BudgetExceeded) {
        ++rep.summary.budget_exceeded;
        ++rep.summary.inconclusive;
      } else if (e.qualifies(p.target_girth)) {
        ++rep.summary.success;
      } else {
        ++rep.summary.failures;
      }
      if (e.qualifies(p.target_girth) && !certified.count(e.graph)) {
        if (!recertify(e.graph, p.k, p.target_girth, fo)) {
          throw std::logic_error("candidate failed re-verification from its serialized form");
        }
        certified.insert(e.graph);
        const bool improves = e.girth >= p.k + 1;
        Json cand{{"instance_hash", instance_hash(batch[i])}, {"n", e.n}, {"m", e.m}, {"girth", e.girth},
                  {"min_outdeg", e.min_outdeg}, {"verdict", "none"}, {"improves_lower_bound", improves},
                  {"graph", e.graph}};
        if (p.out_dir) {
          std::filesystem::create_directories(*p.out_dir);
          std::string name = "candidate_" + std::to_string(rep.candidates.size()) + "_g" +
                             std::to_string(e.girth) + "_n" + std::to_string(e.n) + ".txt";
          std::ofstream(*p.out_dir / name) << e.graph;
          cand["file"] = name;
        }
        rep.candidates.push_back(std::move(cand));
        if (improves) {
          rep.notes.push_back("candidate " + instance_hash(batch[i]) + " has girth " + std::to_string(e.girth) +
                              " >= k+1, min out-degree >= 2 and no C(k,k) subdivision: it improves the known "
                              "girth-k lower bound");
        }
      }
      population.push_back({e, std::move(batch[i])});
    }
  };

  auto select = [&] {
    std::vector<Member> keep;
    std::sort(population.begin(), population.end(),
              [&](const Member& a, const Member& b) { return better(a.eval, b.eval); });
    std::set<std::string> names;
    for (auto& m : population) {
      if (static_cast<int>(keep.size()) == p.population) break;
      if (names.insert(m.eval.graph).second) keep.push_back(std::move(m));
    }
    population = std::move(keep);
  };

  if (p.budget > 0) {
    std::vector<Digraph> init{construct_dk(p.k)};
    std::vector<std::string> origin{"dk"};
    seen.insert(serialize(init.front()));
    for (int i = 1; i < p.population; ++i) {
      const std::uint64_t s = derive_seed(p.seed, static_cast<std::uint64_t>(i));
      Rng rng = make_rng(s);
      const int n = uniform<int>(rng, 2 * p.target_girth, 2 * p.target_girth + 8);
      try {
        Digraph d = random_girth_constrained({n, p.target_girth, 2, s, 20, std::nullopt});
        if (seen.insert(serialize(d)).second) {
          init.push_back(std::move(d));
          origin.push_back("random");
        }
      } catch (const Error& e) {
        if (e.code() != Errc::Infeasible) throw;
        rep.notes.push_back("initial member " + std::to_string(i) + " skipped: " + e.what());
      }
    }
    evaluate_batch(std::move(init), std::move(origin));
    select();
  }

  int idle = 0;
  while (evaluations < p.budget && !population.empty() && idle < 64) {
    ++generation;
    std::vector<Digraph> children;
    std::vector<std::string> origin;
    for (std::size_t i = 0; i < population.size(); ++i) {
      const std::uint64_t s = derive_seed(derive_seed(p.seed, 0x9e37ULL + static_cast<std::uint64_t>(generation)), i);
      try {
        Mutation mu = mutate(population[i].graph, s);
        if (mu.graph.order() > max_n) continue;
        if (!seen.insert(serialize(mu.graph)).second) continue;
        children.push_back(std::move(mu.graph));
        origin.push_back("mutate");
      } catch (const Error& e) {
        if (e.code() != Errc::NoMove) throw;
      }
    }
    if (children.empty()) {
      ++idle;
      continue;
    }
    idle = 0;
    evaluate_batch(std::move(children), std::move(origin));
    select();
  }

  rep.parameters["generations"] = generation;
  if (rep.candidates.empty()) {
    rep.notes.push_back("no certified candidate");
  } else if (std::none_of(rep.candidates.begin(), rep.candidates.end(),
                          [](const Json& c) { return c["improves_lower_bound"].get<bool>(); })) {
    rep.notes.push_back("certified candidates only reach the known girth-k baseline");
  }
  return rep;
}

// ---------------------------------------------------------------- probe

struct ProbeTarget {
  Cycle cycle;
  Arc arc;
  std::string cycle_source;
};

/**
 * Picks the (C, ab) a probe runs on. With an arc: C is ab closed by a
 * shortest path back from b to a. Without: C is a rho-maximal isometric cycle
 * (the shortest cycle if that enumeration runs out of budget) and ab is the
 * special arc of C when one exists, else C's first arc.
 */
inline ProbeTarget probe_target(const Digraph& d, int k, std::optional<Arc> arc) {
  ProbeTarget t;
  if (arc) {
    if (!d.has_arc(*arc)) throw Error(Errc::NotPresent, "arc is not in the digraph");
    auto back = shortest_path(d, arc->head, arc->tail);
    if (!back) throw Error(Errc::Unreachable, "no cycle through the arc");
    t.cycle.vertices = back->vertices;
    t.arc = *arc;
    t.cycle_source = "arc_closure";
    return t;
  }
  try {
    t.cycle = max_rho_isometric_cycle(d, d.order()).cycle;
    t.cycle_source = "max_rho_isometric";
  } catch (const Error& e) {
    if (e.code() != Errc::CapExceeded) throw;
    t.cycle = *shortest_cycle(d);
    t.cycle_source = "shortest";
  }
  if (auto sa = special_arc(d, t.cycle, k)) {
    t.arc = *sa;
  } else {
    t.arc = {t.cycle.vertices[0], t.cycle.vertices[1 % t.cycle.vertices.size()]};
  }
  return t;
}

inline Json probe_json(const std::vector<ClaimReport>& claims) {
  Json out = Json::array();
  for (const auto& c : claims) out.push_back(to_json(c));
  return out;
}

}  // namespace tbl
