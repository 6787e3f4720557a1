// tbl: command-line front end for the digraph library and experiment harness.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tbl/connectivity.hpp"
#include "tbl/digraph.hpp"
#include "tbl/generators.hpp"
#include "tbl/harness.hpp"
#include "tbl/metrics.hpp"
#include "tbl/proof_probe.hpp"
#include "tbl/subdivision.hpp"

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kBudget = 3, kRefuted = 4 };

tbl::Digraph load(const std::string& file) {
  if (file == "-") return tbl::read_digraph(std::cin);
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file);
  return tbl::read_digraph(in);
}

void require_vertex(const tbl::Digraph& d, int v) {
  if (!d.contains(v)) throw tbl::Error(tbl::Errc::OutOfRange, "vertex " + std::to_string(v) + " out of range");
}

void print_path(const tbl::Path& p) {
  for (std::size_t i = 0; i < p.vertices.size(); ++i) std::cout << (i ? " " : "") << p.vertices[i];
  std::cout << "\n";
}

void emit(const tbl::Digraph& d, bool dot) { std::cout << (dot ? tbl::to_dot(d) : tbl::serialize(d)); }

std::pair<int, int> parse_choice(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--choices", "expected X,Y but got " + text);
  return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digraph subdivision toolkit"};
  app.require_subcommand(1);

  std::string file;
  int u = 0, v = 0, k = 0, l = 0, n = 0, g = 0, min_outdeg = 2, trials = 0, nmin = 0, nmax = 0;
  int population = 8, evals = 0;
  unsigned threads = 1;
  std::uint64_t seed = 0, budget = tbl::default_search_budget();
  std::optional<int> root;
  std::vector<int> arc;
  std::vector<std::string> choices;
  std::string out_dir;
  bool all_choices = false, dot = false;

  auto* girth_cmd = app.add_subcommand("girth", "Length of a shortest cycle (inf if acyclic)");
  girth_cmd->add_option("file", file, "Arc-list file, - for stdin")->required();

  auto* dist_cmd = app.add_subcommand("distance", "dist(u,v), inf if unreachable");
  dist_cmd->add_option("file", file)->required();
  dist_cmd->add_option("u", u)->required();
  dist_cmd->add_option("v", v)->required();

  auto* scc_cmd = app.add_subcommand("scc", "Strong components in topological order, one per line");
  scc_cmd->add_option("file", file)->required();

  auto* menger_cmd = app.add_subcommand("menger", "Maximum family of internally disjoint s-t paths");
  menger_cmd->add_option("file", file)->required();
  menger_cmd->add_option("s", u)->required();
  menger_cmd->add_option("t", v)->required();

  auto* cut_cmd = app.add_subcommand("cutverts", "(s,t)-cut-vertices in path order");
  cut_cmd->add_option("file", file)->required();
  cut_cmd->add_option("s", u)->required();
  cut_cmd->add_option("t", v)->required();

  auto* find_cmd = app.add_subcommand("find", "Search for a C(k,l) subdivision");
  find_cmd->add_option("file", file)->required();
  find_cmd->add_option("-k", k)->required()->check(CLI::PositiveNumber);
  find_cmd->add_option("-l", l, "defaults to k")->check(CLI::PositiveNumber);
  find_cmd->add_option("--budget", budget, "Node expansions per (s,t) pair");
  find_cmd->add_option("-j,--threads", threads)->check(CLI::PositiveNumber);

  auto* gen_cmd = app.add_subcommand("gen", "Generate a digraph in arc-list format");
  gen_cmd->require_subcommand(1);
  gen_cmd->add_flag("--dot", dot, "Emit DOT instead of the arc list");
  auto* gen_dk = gen_cmd->add_subcommand("dk", "The construction D_k");
  gen_dk->add_option("-k", k)->required();
  gen_dk->add_option("--choices", choices, "One X,Y position pair per block");
  auto* gen_bi = gen_cmd->add_subcommand("biorient", "Complete biorientation of K_n");
  gen_bi->add_option("-n", n)->required();
  auto* gen_rand = gen_cmd->add_subcommand("random", "Random digraph with girth >= G");
  gen_rand->add_option("-n", n)->required();
  gen_rand->add_option("-g", g)->required();
  gen_rand->add_option("--min-outdeg", min_outdeg);
  gen_rand->add_option("--seed", seed)->required();

  auto* vt_cmd = app.add_subcommand("verify-theorem", "C(k,k) subdivisions in random girth >= 4k+2 digraphs");
  vt_cmd->add_option("-k", k)->required();
  vt_cmd->add_option("--trials", trials)->required();
  vt_cmd->add_option("--nmin", nmin)->required();
  vt_cmd->add_option("--nmax", nmax)->required();
  vt_cmd->add_option("--seed", seed)->required();
  vt_cmd->add_option("--root", root, "Vertex allowed out-degree 1");
  vt_cmd->add_option("-j,--threads", threads)->check(CLI::PositiveNumber);

  auto* vc_cmd = app.add_subcommand("verify-construction", "Certify D_k");
  vc_cmd->add_option("-k", k)->required();
  vc_cmd->add_flag("--all-choices", all_choices);
  vc_cmd->add_option("-j,--threads", threads)->check(CLI::PositiveNumber);

  auto* eg_cmd = app.add_subcommand("explore-gap", "Search for girth >= G digraphs without C(k,k)");
  eg_cmd->add_option("-k", k)->required();
  eg_cmd->add_option("-g", g)->required();
  eg_cmd->add_option("--budget", evals, "Candidate evaluations")->required();
  eg_cmd->add_option("--seed", seed)->required();
  eg_cmd->add_option("-o", out_dir, "Directory for certified candidates")->required();
  eg_cmd->add_option("--population", population)->check(CLI::PositiveNumber);
  eg_cmd->add_option("-j,--threads", threads)->check(CLI::PositiveNumber);

  auto* probe_cmd = app.add_subcommand("probe", "Evaluate the cut-vertex and X-set claims");
  probe_cmd->add_option("file", file)->required();
  probe_cmd->add_option("-k", k)->required()->check(CLI::PositiveNumber);
  probe_cmd->add_option("--arc", arc)->expected(2);
  probe_cmd->add_option("--root", root);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    tbl::RunOptions run{threads, tbl::default_search_budget()};

    if (*girth_cmd) {
      std::cout << tbl::girth(load(file)) << "\n";
      return kOk;
    }
    if (*dist_cmd) {
      auto d = load(file);
      require_vertex(d, u);
      require_vertex(d, v);
      auto dist = tbl::distance(d, u, v);
      std::cout << dist << "\n";
      return dist.finite() ? kOk : kNegative;
    }
    if (*scc_cmd) {
      auto c = tbl::condensation(load(file));
      for (const auto& comp : c.components) {
        for (std::size_t i = 0; i < comp.size(); ++i) std::cout << (i ? " " : "") << comp[i];
        std::cout << "\n";
      }
      return kOk;
    }
    if (*menger_cmd) {
      auto d = load(file);
      require_vertex(d, u);
      require_vertex(d, v);
      auto r = tbl::internally_disjoint_paths(d, u, v);
      std::cout << r.count << "\n";
      for (const auto& p : r.paths) print_path(p);
      return kOk;
    }
    if (*cut_cmd) {
      auto d = load(file);
      require_vertex(d, u);
      require_vertex(d, v);
      tbl::Path chain{tbl::cut_vertices_ordered(d, u, v)};
      print_path(chain);
      return kOk;
    }
    if (*find_cmd) {
      auto d = load(file);
      if (l == 0) l = k;
      tbl::FinderOptions fo;
      fo.budget = budget;
      fo.threads = threads;
      auto r = tbl::run_finder(d, k, l, fo);
      if (r.verdict == tbl::Verdict::Found) {
        std::cout << tbl::to_json(*r.witness).dump() << "\n";
        return kOk;
      }
      std::cout << tbl::verdict_name(r.verdict) << "\n";
      return r.verdict == tbl::Verdict::None ? kNegative : kBudget;
    }
    if (*gen_dk) {
      tbl::DkParams p{k, {}};
      for (const auto& c : choices) p.choice.push_back(parse_choice(c));
      emit(tbl::construct_dk(p), dot);
      return kOk;
    }
    if (*gen_bi) {
      emit(tbl::complete_biorientation(n), dot);
      return kOk;
    }
    if (*gen_rand) {
      emit(tbl::random_girth_constrained({n, g, min_outdeg, seed, 20, std::nullopt}), dot);
      return kOk;
    }
    if (*vt_cmd) {
      auto rep = tbl::verify_theorem({k, trials, nmin, nmax, seed, root}, run);
      std::cout << rep.to_json().dump(2) << "\n";
      if (rep.refutation) return kRefuted;
      return kOk;
    }
    if (*vc_cmd) {
      auto rep = tbl::verify_construction(k, all_choices, run);
      std::cout << rep.to_json().dump(2) << "\n";
      if (rep.summary.failures > 0) return kNegative;
      if (rep.summary.budget_exceeded > 0) return kBudget;
      return kOk;
    }
    if (*eg_cmd) {
      tbl::GapParams p{k, g, evals, seed, population, std::filesystem::path(out_dir)};
      auto rep = tbl::explore_gap(p, run);
      std::cout << rep.to_json().dump(2) << "\n";
      return rep.candidates.empty() ? kNegative : kOk;
    }
    if (*probe_cmd) {
      auto d = load(file);
      std::optional<tbl::Arc> ab;
      if (!arc.empty()) {
        require_vertex(d, arc[0]);
        require_vertex(d, arc[1]);
        ab = tbl::Arc{arc[0], arc[1]};
      }
      if (root) require_vertex(d, *root);
      auto target = tbl::probe_target(d, k, ab);
      auto claims = tbl::probe_claims(d, target.cycle, target.arc, k, root);
      std::cout << tbl::probe_json(claims).dump(2) << "\n";
      for (const auto& c : claims) {
        if (c.violated()) return kNegative;
      }
      return kOk;
    }
  } catch (const tbl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == tbl::Errc::BudgetExceeded) return kBudget;
    if (e.code() == tbl::Errc::Unreachable) return kNegative;
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
