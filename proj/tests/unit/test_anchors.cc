#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.h"
#include "gsana/anchors.h"
#include "gsana/similarity.h"
#include "oracles.h"

namespace gsana {
namespace {

using testing::numbered_graph;
using testing::path_graph;

std::vector<VertexId> iota(VertexId n) {
  std::vector<VertexId> out(n);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

TEST(Bfs, PathAndUnreachable) {
  const auto g = numbered_graph(5, {{0, 1}, {1, 2}, {3, 4}});
  const auto d = bfs_distances(g, 0);
  EXPECT_EQ(d, (std::vector<std::uint32_t>{0, 1, 2, kUnreachable, kUnreachable}));
}

TEST(Bfs, MatchesRelaxationOracleAndIsSymmetric) {
  std::mt19937_64 rng(2);
  const auto g = testing::random_graph(rng, 80, 120, 0, 0);
  for (VertexId s = 0; s < 10; ++s) {
    const auto d = bfs_distances(g, s);
    EXPECT_EQ(d, oracle::bfs(g, s));
    EXPECT_EQ(d[s], 0u);
    for (VertexId t = 0; t < 10; ++t) EXPECT_EQ(d[t], bfs_distances(g, t)[s]);
  }
}

TEST(DistanceTable, EachRowComputedOnce) {
  const auto g = path_graph(6);
  DistanceTable d;
  const std::vector<VertexId> a{0, 3};
  EXPECT_EQ(d.ensure_rows(Side::kFirst, g, a), 2u);
  EXPECT_EQ(d.ensure_rows(Side::kFirst, g, a), 0u);
  const std::vector<VertexId> b{3, 5};
  EXPECT_EQ(d.ensure_rows(Side::kFirst, g, b, 4), 1u);
  EXPECT_EQ(d.ensure_rows(Side::kSecond, g, a), 2u);
  EXPECT_EQ(d.row_count(Side::kFirst), 3u);
  EXPECT_EQ(d.bfs_runs(), 5u);
  EXPECT_EQ(d.distance(Side::kFirst, 0, 5), 5u);
}

TEST(Bootstrap, TargetSizeUsesNaturalLog) {
  EXPECT_EQ(bootstrap_target_size(4000, 4000), 34u);
  EXPECT_EQ(bootstrap_target_size(4000, 10), 34u);
  EXPECT_EQ(bootstrap_target_size(1, 1), 1u);
  EXPECT_EQ(bootstrap_target_size(4000, 4000, 2.0),
            static_cast<std::size_t>(std::ceil(4 * std::log2(4000.0))));
}

TEST(Bootstrap, SingleVertexGraphs) {
  GraphBuilder b1;
  b1.add_vertex("a");
  GraphBuilder b2;
  b2.add_vertex("x");
  const auto g1 = std::move(b1).build();
  const auto g2 = std::move(b2).build();
  const SimilarityContext sim(g1, g2);
  const auto map = bootstrap_anchors(g1, g2, [&](VertexId u, VertexId v) {
    return sim.total(u, v, nullptr);
  });
  ASSERT_EQ(map.size(), 1u);
  EXPECT_EQ(map.pairs[0], (VertexPair{0, 0}));
  EXPECT_EQ(map.source, AnchorMap::Source::kBootstrapped);
}

TEST(Bootstrap, EmptyGraphRejected) {
  const AttributedGraph empty;
  EXPECT_THROW(bootstrap_anchors(empty, empty, [](VertexId, VertexId) { return 1.0; }),
               std::invalid_argument);
}

TEST(Bootstrap, RelabeledCloneWithUniqueSignaturesGivesTruePairs) {
  // Every vertex carries its own type, so only true pairs pass the type gate.
  std::mt19937_64 rng(9);
  GraphBuilder b(EdgeSchema{.has_type = false, .columns = {}});
  for (int i = 0; i < 100; ++i) b.set_vertex_type(b.add_vertex("v" + std::to_string(i)), "t" + std::to_string(i));
  std::uniform_int_distribution<VertexId> pick(0, 99);
  for (int i = 0; i < 400; ++i) b.add_edge(pick(rng), pick(rng));
  const auto g1 = std::move(b).build();
  const auto clone = testing::relabeled_copy(g1, 4);
  const SimilarityContext sim(g1, clone.graph);
  const auto map = bootstrap_anchors(g1, clone.graph, [&](VertexId u, VertexId v) {
    return sim.total(u, v, nullptr);
  });
  std::vector<VertexId> truth(g1.num_vertices());
  for (const auto& [u, v] : clone.truth.pairs) truth[u] = v;
  EXPECT_EQ(map.size(), bootstrap_target_size(100, 100));
  for (const auto& [u, v] : map.pairs) EXPECT_EQ(truth[u], v);
  // Brute force: the chosen graph-1 vertices are among the 2|S| highest degrees.
  std::vector<VertexId> by_degree = iota(100);
  std::stable_sort(by_degree.begin(), by_degree.end(),
                   [&](VertexId a, VertexId c) { return g1.degree(a) > g1.degree(c); });
  const auto cutoff = g1.degree(by_degree[2 * map.size() - 1]);
  for (const auto& p : map.pairs) EXPECT_GE(g1.degree(p.first), cutoff);
}

TEST(CentralAnchors, LimitIsCeilLog2) {
  EXPECT_EQ(central_anchor_limit(16), 4u);
  EXPECT_EQ(central_anchor_limit(17), 5u);
  EXPECT_EQ(central_anchor_limit(1), 1u);
  EXPECT_EQ(central_anchor_limit(2), 1u);
}

TEST(CentralAnchors, AdjacentPairKeepsFirstScanned) {
  // 0-1 adjacent; 1 has the higher degree, so picking 1 would mean 0 was not
  // kept first.
  const auto g = numbered_graph(5, {{0, 1}, {1, 2}, {1, 3}, {1, 4}});
  DistanceTable d;
  const std::vector<VertexId> s{0, 1};
  d.ensure_rows(Side::kFirst, g, s);
  EXPECT_EQ(find_central_anchors(g, s, d, 1), (std::vector<VertexId>{0}));
}

TEST(CentralAnchors, SixteenDistantAnchorsGiveFourHighestDegree) {
  // Hub i gets i + 1 private leaves; hubs are chained through two-edge paths.
  std::vector<std::pair<int, int>> edges;
  int next = 16;
  for (int h = 0; h < 16; ++h) {
    for (int l = 0; l <= h; ++l) edges.emplace_back(h, next++);
    if (h > 0) {
      edges.emplace_back(h - 1, next);
      edges.emplace_back(next++, h);
    }
  }
  const auto g = numbered_graph(next, edges);
  std::vector<VertexId> hubs = iota(16);
  std::shuffle(hubs.begin(), hubs.end(), std::mt19937_64(1));
  DistanceTable d;
  d.ensure_rows(Side::kFirst, g, hubs);
  auto central = find_central_anchors(g, hubs, d, 1);
  std::sort(central.begin(), central.end());
  // Brute force: all hubs are > 1 apart, so the answer is the top 4 by degree.
  std::vector<VertexId> expected = iota(16);
  std::sort(expected.begin(), expected.end(),
            [&](VertexId a, VertexId b) { return g.degree(a) > g.degree(b); });
  expected.resize(4);
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(central, expected);
  EXPECT_EQ(central, (std::vector<VertexId>{12, 13, 14, 15}));
}

TEST(CentralAnchors, ShortfallReturnsAllKept) {
  const auto g = path_graph(3);
  DistanceTable d;
  const std::vector<VertexId> s{0, 1, 2};  // l = 2, S' = {0, 2}
  d.ensure_rows(Side::kFirst, g, s);
  EXPECT_EQ(find_central_anchors(g, s, d, 1).size(), 2u);
  EXPECT_EQ(find_central_anchors(g, s, d, 2).size(), 1u);  // 0 and 2 are 2 apart
}

TEST(VantageAnchors, SingleCentralKeepsAllAssignees) {
  // Central 0 on a path; assignees at distances 2, 5 and 7.
  const auto g = path_graph(8);
  DistanceTable d;
  const std::vector<VertexId> all{0, 2, 5, 7};
  d.ensure_rows(Side::kFirst, g, all);
  const std::vector<VertexId> central{0};
  const std::vector<VertexId> rest{2, 5, 7};
  const auto sel = find_vantage_anchors(rest, central, d);
  EXPECT_EQ(sel.anchors, rest);
  EXPECT_FALSE(sel.degenerate);
}

TEST(VantageAnchors, ListsOfThreeAndOneGiveTwo) {
  // 8-vertex graph: centrals 0 and 4 on a path 0-1-2-3-4; 5, 6, 7 hang off 0's
  // side (5-0, 6-5, 7-6) and 3 sits next to 4.
  const auto g = numbered_graph(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 5}, {5, 6}, {6, 7}});
  DistanceTable d;
  const std::vector<VertexId> central{0, 4};
  const std::vector<VertexId> rest{1, 3, 6, 7};
  d.ensure_rows(Side::kFirst, g, central);
  d.ensure_rows(Side::kFirst, g, rest);
  const auto sel = find_vantage_anchors(rest, central, d);
  // 0 gets {1, 6, 7}, 4 gets {3}: a = 1, keeping 7 (farthest from 0) and 3.
  EXPECT_EQ(sel.anchors, (std::vector<VertexId>{3, 7}));
  EXPECT_FALSE(sel.degenerate);
}

TEST(VantageAnchors, UnreachableAnchorExcluded) {
  const auto g = numbered_graph(6, {{0, 1}, {1, 2}, {4, 5}});
  DistanceTable d;
  const std::vector<VertexId> central{0};
  const std::vector<VertexId> rest{2, 5};
  d.ensure_rows(Side::kFirst, g, central);
  d.ensure_rows(Side::kFirst, g, rest);
  EXPECT_EQ(find_vantage_anchors(rest, central, d).anchors, (std::vector<VertexId>{2}));
}

TEST(VantageAnchors, EmptyListFallsBackToOneFarthestEach) {
  const auto g = path_graph(8);
  DistanceTable d;
  const std::vector<VertexId> central{0, 7};
  const std::vector<VertexId> rest{1, 2};  // both nearest to 0
  d.ensure_rows(Side::kFirst, g, central);
  d.ensure_rows(Side::kFirst, g, rest);
  const auto sel = find_vantage_anchors(rest, central, d);
  EXPECT_TRUE(sel.degenerate);
  EXPECT_EQ(sel.anchors, (std::vector<VertexId>{2}));
}

TEST(VantageAnchors, FarTieBrokenBySumOfDistancesToOtherCentrals) {
  // Central 0 with assignees 2 and 6 both 2 hops away; 6 is farther from the
  // other central 9, so it wins the single slot.
  const auto g = numbered_graph(12, {{0, 1}, {1, 2}, {0, 5}, {5, 6}, {2, 3}, {3, 9}, {9, 10}, {10, 11}, {11, 4}, {4, 8}});
  DistanceTable d;
  const std::vector<VertexId> central{0, 9};
  const std::vector<VertexId> rest{2, 6, 10};
  d.ensure_rows(Side::kFirst, g, central);
  d.ensure_rows(Side::kFirst, g, rest);
  // 0: {2 (d=2), 6 (d=2)} ; 9: {10}. a = 1.
  EXPECT_EQ(find_vantage_anchors(rest, central, d).anchors, (std::vector<VertexId>{6, 10}));
}

TEST(PairAndOrder, PathOfSix) {
  const auto g = path_graph(6);
  DistanceTable d;
  const auto all = iota(6);
  d.ensure_rows(Side::kFirst, g, all);
  const auto pairs = pair_and_order(all, d);
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs.pairs[0], (std::array<VertexId, 2>{0, 5}));
  EXPECT_EQ(pairs.pairs[1], (std::array<VertexId, 2>{1, 4}));
  EXPECT_EQ(pairs.pairs[2], (std::array<VertexId, 2>{2, 3}));
}

TEST(PairAndOrder, TwoAndFiveAnchors) {
  const auto g = path_graph(6);
  DistanceTable d;
  d.ensure_rows(Side::kFirst, g, iota(6));
  const std::vector<VertexId> two{1, 3};
  EXPECT_EQ(pair_and_order(two, d).size(), 1u);
  const std::vector<VertexId> five{0, 1, 2, 3, 4};
  EXPECT_EQ(pair_and_order(five, d).size(), 2u);
  const std::vector<VertexId> one{2};
  EXPECT_THROW(pair_and_order(one, d), InsufficientVantageAnchors);
  EXPECT_THROW(pair_and_order({}, d), InsufficientVantageAnchors);
}

TEST(PairAndOrder, MatchesLiteralTranscriptionOnRandomGraphs) {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 50; ++round) {
    const auto g = testing::random_graph(rng, 40, 120, 0, 0);
    // Keep one connected component: the one holding vertex 0.
    const auto reach = oracle::bfs(g, 0);
    std::vector<VertexId> cand;
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
      if (reach[u] != kUnreachable) cand.push_back(u);
    }
    std::shuffle(cand.begin(), cand.end(), rng);
    cand.resize(std::min<std::size_t>(cand.size(), 2 + round % 9));
    std::sort(cand.begin(), cand.end());
    if (cand.size() < 2) continue;
    DistanceTable d;
    d.ensure_rows(Side::kFirst, g, cand);
    const auto got = pair_and_order(cand, d);
    const auto want = oracle::pair_and_order(
        cand, [&](VertexId a, VertexId b) { return oracle::bfs(g, a)[b]; });
    EXPECT_EQ(got.pairs, want) << "round " << round;
    EXPECT_EQ(got.size(), cand.size() / 2);
  }
}

}  // namespace
}  // namespace gsana
