#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tbl/generators.hpp"
#include "tbl/subdivision.hpp"
#include "test_util.hpp"

using namespace tbl;

TEST(Dk, CountsAndBasicInvariants) {
  for (int k = 2; k <= 6; ++k) {
    auto d = construct_dk(k);
    EXPECT_EQ(d.order(), k + k * k);
    EXPECT_EQ(d.size(), 2 * k + 2 * k * k);
    EXPECT_EQ(min_out_degree(d), 2);
    EXPECT_EQ(girth(d), Distance(k));
    EXPECT_TRUE(is_strongly_connected(d));
  }
}

TEST(Dk, Layout) {
  auto d = construct_dk(3);
  DkLayout at{3};
  EXPECT_TRUE(d.has_arc(at.hub(0), at.block(0, 0)));
  EXPECT_TRUE(d.has_arc(at.hub(0), at.block(0, 1)));
  EXPECT_FALSE(d.has_arc(at.hub(0), at.block(0, 2)));
  for (int j = 0; j < 3; ++j) {
    EXPECT_TRUE(d.has_arc(at.block(2, j), at.hub(0)));
    EXPECT_TRUE(d.has_arc(at.block(1, j), at.block(1, (j + 1) % 3)));
  }
}

TEST(Dk, NoSubdivisionForKThree) {
  auto d = construct_dk(3);
  EXPECT_FALSE(find_subdivision(d, 3, 3));
  EXPECT_FALSE(brute_oracle(d, 3, 3));
}

TEST(Dk, EveryChoiceForKFour) {
  std::vector<std::pair<int, int>> pairs;
  for (int x = 0; x < 4; ++x) {
    for (int y = x + 1; y < 4; ++y) pairs.push_back({x, y});
  }
  int built = 0;
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    for (std::size_t b = 0; b < pairs.size(); ++b) {
      for (std::size_t c = 0; c < pairs.size(); ++c) {
        for (std::size_t e = 0; e < pairs.size(); ++e) {
          auto d = construct_dk({4, {pairs[a], pairs[b], pairs[c], pairs[e]}});
          ASSERT_EQ(girth(d), Distance(4));
          ASSERT_EQ(min_out_degree(d), 2);
          ASSERT_TRUE(is_strongly_connected(d));
          ++built;
        }
      }
    }
  }
  EXPECT_EQ(built, 1296);
}

TEST(Dk, KTwoContainsTwoTwo) {
  // Both out-neighbours of v_0 sit on the 2-cycle C_0 and lead to v_1.
  auto d = construct_dk(2);
  DkLayout at{2};
  SubdivisionWitness w{at.hub(0), at.hub(1), Path{{at.hub(0), at.block(0, 0), at.hub(1)}},
                       Path{{at.hub(0), at.block(0, 1), at.hub(1)}}, 2, 2};
  EXPECT_TRUE(verify_witness(d, w));
  EXPECT_TRUE(find_subdivision(d, 2, 2));
}

TEST(Dk, BadParams) {
  EXPECT_EQ(error_of([] { construct_dk(1); }), Errc::BadParams);
  EXPECT_EQ(error_of([] { construct_dk({3, {{0, 0}, {0, 1}, {0, 1}}}); }), Errc::BadParams);
  EXPECT_EQ(error_of([] { construct_dk({3, {{0, 3}, {0, 1}, {0, 1}}}); }), Errc::BadParams);
  EXPECT_EQ(error_of([] { construct_dk({3, {{0, 1}}}); }), Errc::BadParams);
}

TEST(Fixtures, Biorientation) {
  auto d = complete_biorientation(3);
  EXPECT_EQ(d.size(), 6);
  EXPECT_EQ(girth(d), Distance(2));
  for (int n = 1; n <= 6; ++n) {
    EXPECT_EQ(complete_biorientation(n).size(), n * (n - 1));
    if (n > 1) EXPECT_EQ(min_out_degree(complete_biorientation(n)), n - 1);
  }
  EXPECT_EQ(error_of([] { complete_biorientation(0); }), Errc::BadParams);
}

TEST(Fixtures, BiorientationThreshold) {
  for (int k = 2; k <= 3; ++k) {
    EXPECT_FALSE(find_subdivision(complete_biorientation(2 * k - 1), k, k));
    EXPECT_TRUE(find_subdivision(complete_biorientation(2 * k), k, k));
    EXPECT_TRUE(brute_oracle(complete_biorientation(2 * k), k, k));
  }
}

TEST(Fixtures, CycleAndTheta) {
  EXPECT_EQ(girth(directed_cycle(6)), Distance(6));
  auto t = theta(3, 3);
  EXPECT_EQ(t.order(), 6);
  EXPECT_TRUE(find_subdivision(t, 3, 3));
  auto small = theta(1, 2);
  EXPECT_EQ(small, build(3, {{0, 1}, {0, 2}, {2, 1}}));
  EXPECT_EQ(error_of([] { theta(1, 1); }), Errc::BadParams);
  EXPECT_EQ(error_of([] { directed_cycle(1); }), Errc::BadParams);
}

TEST(RandomGirth, Deterministic) {
  RandomGirthParams p{20, 6, 2, 99};
  EXPECT_EQ(serialize(random_girth_constrained(p)), serialize(random_girth_constrained(p)));
  RandomGirthParams q = p;
  q.seed = 100;
  EXPECT_NE(serialize(random_girth_constrained(p)), serialize(random_girth_constrained(q)));
}

TEST(RandomGirth, InvariantsReverified) {
  int made = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int g = 3 + static_cast<int>(seed % 8);
    const int n = 2 * g + static_cast<int>(seed % 11);
    try {
      auto d = random_girth_constrained({n, g, 2, seed});
      auto og = oracle::girth(d);
      ASSERT_TRUE(og);
      EXPECT_GE(*og, g);
      EXPECT_GE(min_out_degree(d), 2);
      ++made;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::Infeasible);
    }
  }
  EXPECT_GE(made, 55);
}

TEST(RandomGirth, RootRelaxed) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomGirthParams p{14, 6, 2, seed};
    p.relaxed_root = 0;
    auto d = random_girth_constrained(p);
    EXPECT_GE(d.out_degree(0), 1);
    for (Vertex v = 1; v < d.order(); ++v) EXPECT_GE(d.out_degree(v), 2);
    EXPECT_GE(girth(d).value(), 6);
  }
}

TEST(RandomGirth, Infeasible) {
  EXPECT_EQ(error_of([] { random_girth_constrained({4, 6, 2, 1}); }), Errc::Infeasible);
  EXPECT_EQ(error_of([] { random_girth_constrained({3, 2, 3, 1}); }), Errc::Infeasible);
  // Min out-degree 2 forces girth <= ceil(n/2).
  EXPECT_EQ(error_of([] { random_girth_constrained({10, 9, 2, 1, 3}); }), Errc::Infeasible);
}

TEST(Mutate, SameSeedSameMove) {
  auto d = complete_biorientation(4);
  auto a = mutate(d, 5), b = mutate(d, 5);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.move, b.move);
}

TEST(Mutate, RequiresMinOutDegreeTwo) {
  EXPECT_EQ(error_of([] { mutate(directed_cycle(5), 1); }), Errc::PreconditionFailed);
}

TEST(Mutate, FuzzTenThousandMoves) {
  Digraph d = complete_biorientation(3);
  std::array<int, 4> seen{};
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const int n = d.order();
    const int m = d.size();
    auto mu = mutate(d, i);
    const Digraph& e = mu.graph;
    ++seen[static_cast<int>(mu.move)];
    ASSERT_GE(min_out_degree(e), 2);
    ASSERT_EQ(parse_digraph(serialize(e)), e);
    switch (mu.move) {
      case MoveKind::Rewire:
        ASSERT_EQ(e.order(), n);
        ASSERT_EQ(e.size(), m);
        break;
      case MoveKind::AddArc:
        ASSERT_EQ(e.order(), n);
        ASSERT_EQ(e.size(), m + 1);
        break;
      case MoveKind::RemoveArc:
        ASSERT_EQ(e.order(), n);
        ASSERT_EQ(e.size(), m - 1);
        break;
      case MoveKind::Subdivide:
        ASSERT_EQ(e.order(), n + 1);
        ASSERT_EQ(e.size(), m + 2);
        break;
    }
    ASSERT_LE(e.size(), e.order() * (e.order() - 1));
    // Keep the fuzz bounded in size: restart from a small seed digraph.
    d = e.order() > 30 ? complete_biorientation(3) : e;
  }
  for (int c : seen) EXPECT_GT(c, 0);
}
