#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tbl/generators.hpp"
#include "tbl/proof_probe.hpp"
#include "tbl/subdivision.hpp"
#include "test_util.hpp"

using namespace tbl;

namespace {

Cycle ring(int n) {
  Cycle c;
  for (Vertex v = 0; v < n; ++v) c.vertices.push_back(v);
  return c;
}

const ClaimReport& part(const ClaimReport& r, const std::string& id) {
  for (const auto& p : r.parts) {
    if (p.claim == id) return p;
  }
  throw std::runtime_error("missing part " + id);
}

// Re-derives X_i with the relaxation oracle.
std::vector<std::vector<Vertex>> oracle_sets(const Digraph& d, const CutWindow& w) {
  std::vector<std::vector<Vertex>> out;
  const int m = w.h + 1;
  for (int i = 0; i < m; ++i) {
    std::vector<bool> removed(d.order(), false);
    removed[w.tilde[(i + 1) % m]] = true;
    auto r = oracle::reach(d, w.tilde[i], removed);
    std::vector<Vertex> set;
    for (Vertex v = 0; v < d.order(); ++v) {
      if (r[v]) set.push_back(v);
    }
    out.push_back(set);
  }
  return out;
}

// 14-cycle plus the backward chord 6 -> 2: the chain is unchanged but X_3
// (from 6) runs back over 2..5 and meets X_0 = {3}.
Digraph chorded_ring() {
  std::vector<Arc> arcs;
  for (Vertex v = 0; v < 14; ++v) arcs.push_back({v, (v + 1) % 14});
  arcs.push_back({6, 2});
  return Digraph(14, arcs);
}

}  // namespace

TEST(XSets, FourteenCycle) {
  auto d = directed_cycle(14);
  auto xs = x_sets(d, ring(14), {13, 0}, 3);
  ASSERT_EQ(xs.count(), 8);
  for (int i = 0; i < 8; ++i) {
    auto want = segment_vertices(ring(14), xs.tilde(i), xs.tilde(i + 1), SegmentMode::RightOpen);
    std::sort(want.begin(), want.end());
    EXPECT_EQ(xs.sets[i], want);
  }
  EXPECT_EQ(xs.sets[7], (std::vector<Vertex>{0, 1, 2, 10, 11, 12, 13}));
}

TEST(XSets, InvariantsAndOracleOnRandomInstances) {
  int probed = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto d = oracle::random_strong_digraph(8 + static_cast<int>(seed % 8), 0.04, seed);
    auto c = *shortest_cycle(d);
    for (const Arc& ab : cycle_arcs(c)) {
      XSets xs;
      try {
        xs = x_sets(d, c, ab, 1 + static_cast<int>(seed % 2));
      } catch (const Error& e) {
        ASSERT_TRUE(e.code() == Errc::NoCutVertex || e.code() == Errc::NoWindow ||
                    e.code() == Errc::PreconditionFailed);
        continue;
      }
      ++probed;
      EXPECT_TRUE(xs.window.chain_on_cycle);
      EXPECT_EQ(xs.sets, oracle_sets(d, xs.window));
      for (int i = 0; i < xs.count(); ++i) {
        EXPECT_TRUE(xs.contains(i, xs.tilde(i)));
        EXPECT_FALSE(xs.contains(i, xs.tilde(i + 1)));
      }
    }
  }
  EXPECT_GT(probed, 20);
}

TEST(XSets, RejectsSingleStratum) {
  // On a 7-cycle with k = 3 the window collapses to the single vertex 3.
  auto d = directed_cycle(7);
  auto w = cut_window(d, ring(7), {6, 0}, 3);
  ASSERT_EQ(w.h, 0);
  EXPECT_EQ(error_of([&] { x_sets(d, ring(7), {6, 0}, 3); }), Errc::PreconditionFailed);
  EXPECT_EQ(error_of([&] { x_sets(d, ring(7), {6, 0}, 4); }), Errc::NoWindow);
}

TEST(Intersect1, FourteenCycleHolds) {
  EXPECT_EQ(check_intersect1(directed_cycle(14), ring(14), {13, 0}, 3).status, ClaimStatus::Holds);
}

TEST(Intersect1, DkReportsADefiniteStatus) {
  auto d = construct_dk(3);
  auto c = *shortest_cycle(d);
  for (const Arc& ab : cycle_arcs(c)) {
    try {
      auto r = check_intersect1(d, c, ab, 3);
      EXPECT_NE(r.status, ClaimStatus::NotApplicable);
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == Errc::NoCutVertex || e.code() == Errc::NoWindow ||
                  e.code() == Errc::PreconditionFailed);
    }
  }
}

TEST(Intersect1, EvidenceIsRecheckable) {
  Digraph d = chorded_ring();
  auto xs = x_sets(d, ring(14), {13, 0}, 3);
  auto r = check_intersect1(d, ring(14), xs);
  ASSERT_EQ(r.status, ClaimStatus::Violated);
  const int i = r.evidence->indices[0];
  const Vertex v = r.evidence->vertices[0];
  auto seg = segment_vertices(ring(14), xs.tilde(i), xs.tilde(i + 1), SegmentMode::RightOpen);
  bool in_seg = std::find(seg.begin(), seg.end(), v) != seg.end();
  std::vector<bool> removed(14, false);
  removed[xs.tilde(i + 1)] = true;
  EXPECT_NE(oracle::reach(d, xs.tilde(i), removed)[v], in_seg);
}

TEST(Intersect2, FourteenCycleVacuous) {
  auto d = directed_cycle(14);
  auto xs = x_sets(d, ring(14), {13, 0}, 3);
  auto r = check_intersect2(d, xs);
  EXPECT_EQ(r.status, ClaimStatus::Holds);
  EXPECT_EQ(part(r, "intersect_2.i").status, ClaimStatus::Holds);
  EXPECT_EQ(part(r, "intersect_2.ii").status, ClaimStatus::NotApplicable);
  EXPECT_EQ(part(r, "intersect_2.iii").status, ClaimStatus::NotApplicable);
}

TEST(Intersect2, RootPart) {
  auto d = directed_cycle(14);
  auto xs = x_sets(d, ring(14), {13, 0}, 3);
  auto r = check_intersect2(d, xs, 5);
  // No two sets meet, so part iii has nothing to check.
  EXPECT_EQ(part(r, "intersect_2.iii").status, ClaimStatus::NotApplicable);
  EXPECT_EQ(part(r, "intersect_2.iii").note, "no consecutive sets meet");
}

TEST(Intersect2, EvidenceMatchesBruteForceIntersections) {
  int violated = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto d = oracle::random_strong_digraph(8 + static_cast<int>(seed % 6), 0.03, seed);
    auto c = *shortest_cycle(d);
    for (const Arc& ab : cycle_arcs(c)) {
      XSets xs;
      try {
        xs = x_sets(d, c, ab, 1);
      } catch (const Error&) {
        continue;
      }
      auto sets = oracle_sets(d, xs.window);
      const int m = static_cast<int>(sets.size());
      bool far_meet = false;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          if (i == j || j == (i + 1) % m || i == (j + 1) % m) continue;
          std::vector<Vertex> common;
          std::set_intersection(sets[i].begin(), sets[i].end(), sets[j].begin(), sets[j].end(),
                                std::back_inserter(common));
          far_meet |= !common.empty();
        }
      }
      auto r = check_intersect2(d, xs);
      const auto& p1 = part(r, "intersect_2.i");
      EXPECT_EQ(p1.violated(), far_meet);
      if (p1.violated()) {
        ++violated;
        const int i = p1.evidence->indices[0], j = p1.evidence->indices[1];
        const Vertex v = p1.evidence->vertices[0];
        EXPECT_TRUE(std::binary_search(sets[i].begin(), sets[i].end(), v));
        EXPECT_TRUE(std::binary_search(sets[j].begin(), sets[j].end(), v));
      }
      const auto& p2 = part(r, "intersect_2.ii");
      if (p2.violated()) {
        EXPECT_FALSE(d.has_arc(p2.evidence->vertices[0], p2.evidence->vertices[1]));
      }
    }
  }
  RecordProperty("far_meetings", violated);
}

TEST(NoCrossArc, FourteenCycleHolds) {
  auto d = directed_cycle(14);
  auto xs = x_sets(d, ring(14), {13, 0}, 3);
  for (int i = 0; i < 8; ++i) {
    for (int j = i + 1; j < 8; ++j) EXPECT_EQ(no_cross_arc_check(d, ring(14), xs, i, j).status, ClaimStatus::Holds);
  }
}

TEST(NoCrossArc, IntersectingSetsRejected) {
  Digraph d = chorded_ring();
  auto xs = x_sets(d, ring(14), {13, 0}, 3);
  bool tried = false;
  for (int i = 0; i < xs.count(); ++i) {
    for (int j = 0; j < xs.count(); ++j) {
      if (i == j || detail::intersection(xs.sets[i], xs.sets[j]).empty()) continue;
      EXPECT_EQ(error_of([&] { no_cross_arc_check(d, ring(14), xs, i, j); }), Errc::PreconditionFailed);
      tried = true;
    }
  }
  EXPECT_TRUE(tried);
}

TEST(NoCrossArc, EvidenceIsRecheckable) {
  // X_i is closed under out-arcs except into tilde_{i+1}, which lies on C, so
  // disjoint sets never see a violation; any reported arc must still re-check.
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto d = oracle::random_strong_digraph(8 + static_cast<int>(seed % 8), 0.04, seed);
    auto c = *shortest_cycle(d);
    for (const Arc& ab : cycle_arcs(c)) {
      XSets xs;
      try {
        xs = x_sets(d, c, ab, 1);
      } catch (const Error&) {
        continue;
      }
      for (int i = 0; i < xs.count(); ++i) {
        for (int j = i + 1; j < xs.count(); ++j) {
          if (!detail::intersection(xs.sets[i], xs.sets[j]).empty()) continue;
          ++checked;
          auto r = no_cross_arc_check(d, c, xs, i, j);
          if (!r.violated()) continue;
          Vertex u = r.evidence->vertices[0], w = r.evidence->vertices[1];
          EXPECT_TRUE(d.has_arc(u, w));
          EXPECT_TRUE(xs.contains(r.evidence->indices[0], u));
          EXPECT_TRUE(xs.contains(r.evidence->indices[1], w));
        }
      }
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(CycleBound, Formula) {
  EXPECT_EQ(cycle_bound(2, 3), 12);
  EXPECT_EQ(cycle_bound(0, 1), 2);
  EXPECT_EQ(cycle_bound(7, 3), 22);
}

TEST(CycleBound, DistanceSumMatchesLengthOnPureCycles) {
  for (int n = 8; n <= 20; ++n) {
    for (int k = 1; k <= 3; ++k) {
      auto d = directed_cycle(n);
      Arc ab{n - 1, 0};
      CutWindow w;
      try {
        w = cut_window(d, ring(n), ab, k);
      } catch (const Error&) {
        continue;
      }
      int sum = distance(d, ab.head, w.tilde.front()).value() + distance(d, w.tilde.back(), ab.tail).value() + 1;
      for (int i = 0; i < w.h; ++i) sum += distance(d, w.tilde[i], w.tilde[i + 1]).value();
      EXPECT_EQ(sum, n);
    }
  }
}

TEST(Probe, AllClaimsReportedOnFourteenCycle) {
  auto claims = probe_claims(directed_cycle(14), ring(14), {13, 0}, 3);
  std::vector<std::string> ids;
  for (const auto& c : claims) ids.push_back(c.claim);
  EXPECT_EQ(ids, (std::vector<std::string>{"cut", "order", "no_cut", "dis", "wlog", "intersect_1", "intersect_2",
                                           "no_cross_arc", "cycle_bound"}));
  for (const auto& c : claims) EXPECT_FALSE(c.violated()) << c.claim;
}

TEST(Probe, MissingWindowMakesXLayerNotApplicable) {
  auto claims = probe_claims(complete_biorientation(4), Cycle{{0, 1, 2}}, {0, 1}, 2);
  for (const auto& c : claims) {
    if (c.claim == "intersect_1" || c.claim == "cycle_bound") EXPECT_EQ(c.status, ClaimStatus::NotApplicable);
  }
}

TEST(Probe, ContrapositiveOnGirthInstances) {
  for (int k = 1; k <= 2; ++k) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto d = random_girth_constrained({(4 * k + 2) * 2 + static_cast<int>(seed % 5), 4 * k + 2, 2, seed});
      auto c = *shortest_cycle(d);
      bool any_violation = false;
      for (const Arc& ab : cycle_arcs(c)) {
        for (const auto& r : probe_claims(d, c, ab, k)) any_violation |= r.violated();
      }
      if (any_violation) EXPECT_TRUE(find_subdivision(d, k, k));
    }
  }
}
