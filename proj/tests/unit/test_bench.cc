#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.h"
#include "gsana/bench.h"

namespace gsana {
namespace {

std::vector<VertexPair> identity_pairs(VertexId n) {
  std::vector<VertexPair> out;
  for (VertexId i = 0; i < n; ++i) out.push_back({i, i});
  return out;
}

// Ten vertices per graph: 0..6 of both graphs share leaf 0; graph-1 7..9 sit in
// leaf 1 and graph-2 7..9 in leaf 2, neither scanning the other.
ScopeLog ten_pair_log(const std::vector<VertexPair>& mapping) {
  ScopeLog log;
  for (int i = 0; i < 10; ++i) {
    log.first_ids.push_back("a" + std::to_string(i));
    log.second_ids.push_back("b" + std::to_string(i));
  }
  IterationScope it;
  it.iteration = 1;
  it.leaf_of_first = {0, 0, 0, 0, 0, 0, 0, 1, 1, 1};
  it.leaf_of_second = {0, 0, 0, 0, 0, 0, 0, 2, 2, 2};
  it.scopes = {{0}, {1}, {2}};
  it.compared = 49;
  it.mapping = mapping;
  log.iterations.push_back(it);
  return log;
}

TEST(Evaluate, SevenScoredFiveCorrect) {
  const std::vector<VertexPair> mapping{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 6}, {6, 5}};
  const auto log = ten_pair_log(mapping);
  const auto truth = identity_pairs(10);
  const auto r = evaluate(mapping, &log, truth, 10, 10);
  EXPECT_EQ(r.correct, 5u);
  EXPECT_DOUBLE_EQ(r.recall, 0.5);
  EXPECT_DOUBLE_EQ(*r.hit_count, 0.7);
  EXPECT_EQ(*r.distinct_compared, 49u);
  EXPECT_DOUBLE_EQ(*r.gain, 1.0 - 49.0 / 100.0);
  ASSERT_EQ(r.per_iteration.size(), 1u);
  EXPECT_DOUBLE_EQ(r.per_iteration[0].recall, 0.5);
  EXPECT_DOUBLE_EQ(r.per_iteration[0].hit_count, 0.7);
}

TEST(Evaluate, PerfectAndEmpty) {
  const auto truth = identity_pairs(10);
  ScopeLog all = ten_pair_log(truth);
  all.iterations[0].scopes = {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}};
  const auto perfect = evaluate(truth, &all, truth, 10, 10);
  EXPECT_EQ(perfect.recall, 1.0);
  EXPECT_EQ(*perfect.hit_count, 1.0);
  EXPECT_EQ(*perfect.gain, 0.0);

  ScopeLog none;
  none.first_ids = all.first_ids;
  none.second_ids = all.second_ids;
  const auto nothing = evaluate({}, &none, truth, 10, 10);
  EXPECT_EQ(nothing.recall, 0.0);
  EXPECT_EQ(*nothing.hit_count, 0.0);
  EXPECT_EQ(*nothing.gain, 1.0);

  EXPECT_THROW(evaluate(truth, nullptr, {}, 10, 10), std::invalid_argument);
  const auto bare = evaluate(truth, nullptr, truth, 10, 10);
  EXPECT_FALSE(bare.hit_count);
}

TEST(Evaluate, ExternalIdsAndFiles) {
  const std::vector<VertexPair> mapping{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 6}, {6, 5}};
  const auto log = ten_pair_log(mapping);
  std::vector<MappingRow> rows;
  for (const auto& [u, v] : mapping) rows.push_back({log.first_ids[u], log.second_ids[v], 0.5, 1});
  std::ostringstream t;
  for (int i = 0; i < 10; ++i) t << "a" << i << "\tb" << i << '\n';
  std::istringstream in(t.str());
  const auto truth = read_external_pairs(in);
  const auto r = evaluate_external(rows, truth, &log);
  EXPECT_DOUBLE_EQ(r.recall, 0.5);
  EXPECT_DOUBLE_EQ(*r.hit_count, 0.7);
  const std::vector<std::pair<std::string, std::string>> unknown{{"zz", "b0"}};
  EXPECT_THROW(evaluate_external(rows, unknown, &log), InputError);
}

TEST(Perturb, ZeroFractionsGiveRelabeledIsomorphicCopy) {
  std::mt19937_64 rng(1);
  const auto g = testing::random_graph(rng, 80, 200, 4, 20);
  const auto p = testing::relabeled_copy(g, 12);
  ASSERT_EQ(p.graph.num_vertices(), g.num_vertices());
  ASSERT_EQ(p.graph.num_edges(), g.num_edges());
  std::vector<VertexId> image(g.num_vertices(), kNoVertex);
  std::set<VertexId> seen;
  for (const auto& [u, v] : p.truth.pairs) {
    image[u] = v;
    EXPECT_TRUE(seen.insert(v).second);
  }
  EXPECT_EQ(seen.size(), g.num_vertices());
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    const auto v = image[u];
    EXPECT_EQ(p.graph.external_id(v), "n" + std::to_string(v));
    EXPECT_EQ(g.vertex_type_names().name(g.vertex_type(u)),
              p.graph.vertex_type_names().name(p.graph.vertex_type(v)));
    EXPECT_EQ(g.vertex_attrs(u).size(), p.graph.vertex_attrs(v).size());
    for (const auto w : g.neighbors(u)) EXPECT_TRUE(p.graph.has_edge(v, image[w]));
  }
}

TEST(Perturb, EgoScaleRemovalCountIsExact) {
  GraphBuilder b(EdgeSchema{.has_type = false, .columns = {}});
  for (int i = 0; i < 4038; ++i) b.add_vertex(std::to_string(i));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<VertexId> pick(0, 4037);
  while (b.num_edges() < 88234) b.add_edge(pick(rng), pick(rng));
  const auto g = std::move(b).build();
  ASSERT_EQ(g.num_edges(), 88234u);
  PerturbationSpec spec;
  spec.remove_edges = 0.2;
  spec.seed = 7;
  const auto p = perturb(g, spec);
  EXPECT_EQ(g.num_edges() - p.graph.num_edges(), 17646u);
}

std::set<std::pair<VertexId, VertexId>> removed_edges(const AttributedGraph& g, const Perturbed& p) {
  std::vector<VertexId> image(g.num_vertices());
  for (const auto& [u, v] : p.truth.pairs) image[u] = v;
  std::set<std::pair<VertexId, VertexId>> out;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edge_endpoints(e);
    if (!p.graph.has_edge(image[u], image[v])) out.insert({u, v});
  }
  return out;
}

TEST(Perturb, RemovalsNestedAcrossFractions) {
  SyntheticSpec gs;
  gs.vertices = 500;
  const auto g = erdos_renyi(gs);
  std::set<std::pair<VertexId, VertexId>> previous;
  for (const double pe : {0.05, 0.1, 0.15, 0.2}) {
    PerturbationSpec spec;
    spec.remove_edges = pe;
    spec.seed = 3;
    const auto removed = removed_edges(g, perturb(g, spec));
    EXPECT_EQ(removed.size(), static_cast<std::size_t>(std::floor(pe * g.num_edges())));
    EXPECT_TRUE(std::includes(removed.begin(), removed.end(), previous.begin(), previous.end()));
    previous = removed;
  }
}

TEST(RemoveEdges, KeepsIdsAndNests) {
  SyntheticSpec gs;
  gs.vertices = 300;
  const auto g = erdos_renyi(gs);
  const auto light = remove_edges(g, 0.1, 8);
  const auto heavy = remove_edges(g, 0.3, 8);
  EXPECT_EQ(light.num_vertices(), g.num_vertices());
  EXPECT_EQ(light.num_edges(), g.num_edges() - g.num_edges() / 10);
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    EXPECT_EQ(light.external_id(u), g.external_id(u));
    EXPECT_EQ(light.vertex_attrs(u).size(), g.vertex_attrs(u).size());
  }
  for (EdgeId e = 0; e < heavy.num_edges(); ++e) {
    const auto [u, v] = heavy.edge_endpoints(e);
    EXPECT_TRUE(light.has_edge(u, v));
  }
  EXPECT_EQ(remove_edges(g, 0.0, 8).num_edges(), g.num_edges());
  EXPECT_THROW(remove_edges(g, -0.1, 8), std::invalid_argument);
}

TEST(Perturb, AddedVerticesAndEdges) {
  SyntheticSpec gs;
  gs.vertices = 400;
  const auto g = erdos_renyi(gs);
  const auto per_vertex = static_cast<std::size_t>(2.0 * g.num_edges() / g.num_vertices());

  PerturbationSpec edges_only;
  edges_only.add_edges = 0.1;
  const auto a = perturb(g, edges_only);
  EXPECT_EQ(a.graph.num_edges(), g.num_edges() + g.num_edges() / 10);

  PerturbationSpec vertices_only;
  vertices_only.add_vertices = 0.1;
  const auto b = perturb(g, vertices_only);
  EXPECT_EQ(b.graph.num_vertices(), 440u);
  EXPECT_EQ(b.graph.num_edges(), g.num_edges() + 40 * per_vertex);
  EXPECT_EQ(b.truth.size(), 400u);

  PerturbationSpec facebook;
  facebook.remove_edges = 0.2;
  facebook.add_vertices = 0.1;
  facebook.add_edges = 0.1;
  facebook.seed = 7;
  const auto c = perturb(g, facebook);
  EXPECT_EQ(c.graph.num_vertices(), 440u);
  const std::size_t budget = g.num_edges() / 10;
  std::size_t added = 0;
  std::size_t left = budget;
  for (int i = 0; i < 40; ++i) {
    const auto want = std::max<std::size_t>(1, std::min(per_vertex, left));
    left -= std::min(want, left);
    added += want;
  }
  added += left;
  EXPECT_EQ(c.graph.num_edges(), g.num_edges() - g.num_edges() / 5 + added);
  for (VertexId v = 400; v < 440; ++v) EXPECT_GE(c.graph.degree(v), 1u);
}

TEST(Perturb, SeededReproducibility) {
  SyntheticSpec gs;
  gs.vertices = 300;
  const auto g = erdos_renyi(gs);
  PerturbationSpec spec;
  spec.remove_edges = 0.2;
  spec.add_vertices = 0.1;
  spec.add_edges = 0.1;
  spec.attr_noise = 0.1;
  spec.seed = 99;
  auto text = [&](const Perturbed& p) {
    std::ostringstream v;
    std::ostringstream e;
    write_graph(p.graph, v, e);
    std::ostringstream t;
    write_vertex_pairs(t, p.truth.pairs, g, p.graph);
    return v.str() + e.str() + t.str();
  };
  EXPECT_EQ(text(perturb(g, spec)), text(perturb(g, spec)));
  spec.seed = 100;
  const auto other = text(perturb(g, spec));
  spec.seed = 99;
  EXPECT_NE(text(perturb(g, spec)), other);
  spec.remove_edges = 1.5;
  EXPECT_THROW(perturb(g, spec), std::invalid_argument);
}

TEST(Perturb, VertexTokenNoise) {
  SyntheticSpec gs;
  gs.vertices = 200;
  const auto g = erdos_renyi(gs);
  const auto same = perturb_vertex_tokens(g, 0.0, 1);
  std::size_t total = 0;
  std::size_t changed = 0;
  const auto noisy = perturb_vertex_tokens(g, 0.2, 1);
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    std::multiset<std::string> a;
    std::multiset<std::string> b;
    std::multiset<std::string> c;
    for (const auto t : g.vertex_attrs(u)) a.insert(g.vertex_token_names().name(t));
    for (const auto t : same.vertex_attrs(u)) b.insert(same.vertex_token_names().name(t));
    for (const auto t : noisy.vertex_attrs(u)) c.insert(noisy.vertex_token_names().name(t));
    EXPECT_EQ(a, b);
    total += a.size();
    for (const auto& t : a) changed += c.count(t) == 0;
  }
  EXPECT_GT(changed, 0u);
  EXPECT_LE(changed, total / 5);
}

TEST(PerturbExternal, IdentityAndFullRewrite) {
  ExternalSimilarity table;
  for (VertexId i = 0; i < 10; ++i) table.set(i, 9 - i, 0.05 * (i + 1));
  const auto same = perturb_external(table, 0.0, 4);
  EXPECT_EQ(same.entries(), table.entries());
  const auto all = perturb_external(table, 1.0, 4);
  ASSERT_EQ(all.nnz(), 10u);
  std::size_t changed = 0;
  for (const auto& [p, value] : all.entries()) {
    EXPECT_GT(value, 0.0);
    EXPECT_LE(value, 1.0);
    changed += value != table.value(p.first, p.second);
  }
  EXPECT_EQ(changed, 10u);
  // Nested: entries rewritten at 30% are rewritten identically at 60%.
  const auto thirty = perturb_external(table, 0.3, 4);
  const auto sixty = perturb_external(table, 0.6, 4);
  for (const auto& [p, value] : thirty.entries()) {
    if (value != table.value(p.first, p.second)) {
      EXPECT_EQ(sixty.value(p.first, p.second), value);
    }
  }
}

TEST(Synthetic, ErdosRenyiShape) {
  SyntheticSpec spec;
  spec.vertices = 1000;
  const auto g = erdos_renyi(spec);
  EXPECT_EQ(g.num_vertices(), 1000u);
  EXPECT_GE(g.num_edges(), 4000u);
  EXPECT_LE(g.num_edges(), 4010u);
  const auto d = bfs_distances(g, 0);
  EXPECT_EQ(std::count(d.begin(), d.end(), kUnreachable), 0);
  EXPECT_LE(g.vertex_type_names().size(), 65u);
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    EXPECT_GE(g.vertex_attrs(u).size(), 1u);
    EXPECT_LE(g.vertex_attrs(u).size(), 6u);
  }
  std::ostringstream a;
  std::ostringstream b;
  std::ostringstream sink;
  write_graph(g, a, sink);
  write_graph(erdos_renyi(spec), b, sink);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Synthetic, AnchorsAndPrior) {
  SyntheticSpec spec;
  spec.vertices = 200;
  PerturbationSpec noise;
  noise.remove_edges = 0.1;
  const auto s = make_scenario("x", spec, noise, 30);
  EXPECT_EQ(s.anchors.size(), 30u);
  std::set<VertexPair> truth(s.truth.pairs.begin(), s.truth.pairs.end());
  for (const auto& p : s.anchors.pairs) EXPECT_TRUE(truth.count(p));
  const auto prior = make_prior_table(s.truth, s.second.num_vertices(), 5, 1);
  for (const auto& [u, v] : s.truth.pairs) {
    EXPECT_GE(prior.value(u, v), 0.6);
    EXPECT_LE(prior.value(u, v), 1.0);
  }
  EXPECT_LE(prior.nnz(), 6 * s.truth.size());
  EXPECT_GT(prior.nnz(), 5 * s.truth.size());
}

TEST(Sweep, SingleCellMatchesAlignAndComparedGrowsWithBucketSize) {
  SyntheticSpec spec;
  spec.vertices = 600;
  PerturbationSpec noise;
  noise.remove_edges = 0.1;
  noise.seed = 2;
  const std::vector<Scenario> scenarios{make_scenario("s", spec, noise, 30)};
  const std::vector<std::size_t> sizes{50, 100, 200, 400};
  const auto cells = sweep(scenarios, sizes, AlignerConfig{}, SimilarityConfig{});
  ASSERT_EQ(cells.size(), 4u);

  const SimilarityContext sim(scenarios[0].first, scenarios[0].second);
  AlignerConfig one;
  one.bucket_capacity = 50;
  const auto run = align(sim, scenarios[0].anchors, one);
  const auto eval = evaluate(run.mapping.pairs(), &run.scopes, scenarios[0].truth.pairs,
                             scenarios[0].first.num_vertices(), scenarios[0].second.num_vertices());
  EXPECT_EQ(cells[0].eval.recall, eval.recall);
  EXPECT_EQ(cells[0].compared_total, run.report.compared_total);
  EXPECT_EQ(cells[0].iterations, run.report.iterations.size());

  std::ostringstream csv;
  write_sweep_csv(csv, cells);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "scenario,bucket_size,recall,hit_count,gain,iterations,seconds");
  for (const auto& c : cells) EXPECT_LE(c.eval.recall, *c.eval.hit_count);
}

}  // namespace
}  // namespace gsana
