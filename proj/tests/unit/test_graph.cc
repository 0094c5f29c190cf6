#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "fixtures.h"
#include "gsana/graph.h"

namespace gsana {
namespace {

using testing::TempDir;

AttributedGraph read(const std::string& vertices, const std::string& edges) {
  std::istringstream v(vertices);
  std::istringstream e(edges);
  return read_graph(vertices.empty() ? nullptr : &v, e);
}

std::vector<std::string> neighbor_names(const AttributedGraph& g, const std::string& id) {
  std::vector<std::string> out;
  for (const auto w : g.neighbors(*g.find(id))) out.push_back(g.external_id(w));
  return out;
}

TEST(Graph, PathIsSymmetric) {
  const auto g = read("", "a\tb\nb\tc\n");
  EXPECT_EQ(g.num_vertices(), 3u);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(neighbor_names(g, "b"), (std::vector<std::string>{"a", "c"}));
  EXPECT_EQ(neighbor_names(g, "a"), (std::vector<std::string>{"b"}));
}

TEST(Graph, ReversedDuplicateIsOneEdge) {
  const auto g = read("", "a b\nb a\n");
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.degree(*g.find("a")), 1u);
}

TEST(Graph, SelfLoopsDropped) {
  const auto g = read("", "a\ta\na\tb\n");
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_FALSE(g.has_edge(*g.find("a"), *g.find("a")));
}

TEST(Graph, FirstSeenEdgeTypeWins) {
  const auto g = read("", "#edges type\na\tb\tknows\nb\ta\tlikes\n");
  ASSERT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.edge_type_names().name(g.edge_type(0)), "knows");
}

TEST(Graph, VertexFileTypesAndAttributes) {
  const auto g = read("a\tperson\tx,y\nb\t\t\nc\tplace\tz\n", "a\tb\nb\tc\nd\ta\n");
  EXPECT_EQ(g.num_vertices(), 4u);
  const auto a = *g.find("a");
  EXPECT_EQ(g.vertex_type_names().name(g.vertex_type(a)), "person");
  EXPECT_EQ(g.vertex_attrs(a).size(), 2u);
  const auto d = *g.find("d");  // only in the edge file
  EXPECT_EQ(g.vertex_type_names().name(g.vertex_type(d)), "");
  EXPECT_TRUE(g.vertex_attrs(d).empty());
  EXPECT_TRUE(g.has_vertex_types());
  EXPECT_TRUE(g.has_vertex_attrs());
}

TEST(Graph, NumericAndSetEdgeColumns) {
  const auto g = read("", "#edges type attrs=year:numeric,venue:set\n"
                          "a\tb\tcoauthor\t2014\tkdd,www\n"
                          "b\tc\tcoauthor\t2016\tkdd\n");
  ASSERT_EQ(g.edge_schema().numeric_count(), 1u);
  EXPECT_EQ(g.edge_numeric(0)[0], 2014.0);
  EXPECT_EQ(g.edge_tokens(0).size(), 2u);
  EXPECT_TRUE(g.has_edge_tokens());
}

TEST(Graph, NonNumericValueReportsLine) {
  try {
    read("", "#edges type attrs=year:numeric\na\tb\tx\t2014\nb\tc\tx\tlate\n");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Graph, MalformedLineReportsLine) {
  try {
    read("", "a\tb\nlonely\n");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Graph, MissingFileIsInputError) {
  EXPECT_THROW(load_graph(std::nullopt, "/nonexistent/edges.tsv"), InputError);
}

TEST(Graph, DenseIdsSortedNeighborsNoDuplicates) {
  std::mt19937_64 rng(5);
  const auto g = testing::random_graph(rng, 60, 300, 3, 10);
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    EXPECT_EQ(*g.find(g.external_id(u)), u);
    const auto n = g.neighbors(u);
    EXPECT_TRUE(std::is_sorted(n.begin(), n.end()));
    EXPECT_EQ(std::adjacent_find(n.begin(), n.end()), n.end());
    for (const auto w : n) {
      EXPECT_NE(w, u);
      EXPECT_TRUE(g.has_edge(w, u));
    }
  }
}

TEST(Graph, RoundTripPreservesStructure) {
  const auto g = read("a\tperson\tx,y\nb\tplace\t\n",
                      "#edges type attrs=year:numeric,venue:set\n"
                      "a\tb\tcoauthor\t2014\tkdd,www\nb\tc\tcites\t2016\t\n");
  std::ostringstream v;
  std::ostringstream e;
  write_graph(g, v, e);
  const auto h = read(v.str(), e.str());
  ASSERT_EQ(h.num_vertices(), g.num_vertices());
  ASSERT_EQ(h.num_edges(), g.num_edges());
  EXPECT_EQ(h.edge_schema(), g.edge_schema());
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    const auto hu = *h.find(g.external_id(u));
    EXPECT_EQ(h.vertex_type_names().name(h.vertex_type(hu)),
              g.vertex_type_names().name(g.vertex_type(u)));
    std::set<std::string> ga;
    std::set<std::string> ha;
    for (const auto t : g.vertex_attrs(u)) ga.insert(g.vertex_token_names().name(t));
    for (const auto t : h.vertex_attrs(hu)) ha.insert(h.vertex_token_names().name(t));
    EXPECT_EQ(ga, ha);
    std::set<std::string> gn;
    std::set<std::string> hn;
    for (const auto w : g.neighbors(u)) gn.insert(g.external_id(w));
    for (const auto w : h.neighbors(hu)) hn.insert(h.external_id(w));
    EXPECT_EQ(gn, hn);
  }
  for (EdgeId x = 0; x < g.num_edges(); ++x) {
    const auto [a, b] = g.edge_endpoints(x);
    const auto ha = *h.find(g.external_id(a));
    const auto hb = *h.find(g.external_id(b));
    const auto n = h.neighbors(ha);
    const auto pos = std::lower_bound(n.begin(), n.end(), hb) - n.begin();
    const auto hx = h.incident_edges(ha)[static_cast<std::size_t>(pos)];
    EXPECT_EQ(h.edge_type_names().name(h.edge_type(hx)), g.edge_type_names().name(g.edge_type(x)));
    EXPECT_EQ(std::vector<double>(h.edge_numeric(hx).begin(), h.edge_numeric(hx).end()),
              std::vector<double>(g.edge_numeric(x).begin(), g.edge_numeric(x).end()));
    EXPECT_EQ(h.edge_tokens(hx).size(), g.edge_tokens(x).size());
  }
}

TEST(Graph, LoadsExactCountsAtEgoNetworkScale) {
  TempDir dir("graph");
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 4037);
  std::set<std::pair<int, int>> edges;
  for (int i = 1; i < 4038; ++i) edges.insert({i - 1, i});
  while (edges.size() < 88234) {
    int a = pick(rng);
    int b = pick(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    edges.insert({a, b});
  }
  std::ostringstream out;
  for (const auto& [a, b] : edges) out << a << '\t' << b << '\n';
  const auto path = dir.write("edges.tsv", out.str());
  const auto g = load_graph(std::nullopt, path);
  EXPECT_EQ(g.num_vertices(), 4038u);
  EXPECT_EQ(g.num_edges(), 88234u);
}

class AnchorFiles : public ::testing::Test {
 protected:
  AttributedGraph g1 = read("", "a\tb\nb\tc\n");
  AttributedGraph g2 = read("", "x\ty\ny\tz\n");

  std::vector<VertexPair> pairs(const std::string& content) {
    std::istringstream in(content);
    return read_vertex_pairs(in, g1, g2);
  }
};

TEST_F(AnchorFiles, TwoRowsInFileOrder) {
  const auto p = pairs("b\ty\na\tx\n");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0], (VertexPair{*g1.find("b"), *g2.find("y")}));
  EXPECT_EQ(p[1], (VertexPair{*g1.find("a"), *g2.find("x")}));
}

TEST_F(AnchorFiles, DuplicateLeftRejected) { EXPECT_THROW(pairs("a\tx\na\ty\n"), InputError); }
TEST_F(AnchorFiles, DuplicateRightRejected) { EXPECT_THROW(pairs("a\tx\nb\tx\n"), InputError); }
TEST_F(AnchorFiles, UnknownIdRejected) { EXPECT_THROW(pairs("a\tq\n"), InputError); }

TEST(AnchorMapFile, FortyEightRows) {
  TempDir dir("anchors");
  std::ostringstream e;
  std::ostringstream a;
  for (int i = 0; i < 60; ++i) e << "u" << i << "\tu" << (i + 1) % 60 << '\n';
  std::ostringstream e2;
  for (int i = 0; i < 60; ++i) e2 << "w" << i << "\tw" << (i + 1) % 60 << '\n';
  for (int i = 0; i < 48; ++i) a << "u" << i << "\tw" << i << '\n';
  const auto g1 = load_graph(std::nullopt, dir.write("e1.tsv", e.str()));
  const auto g2 = load_graph(std::nullopt, dir.write("e2.tsv", e2.str()));
  const auto map = load_anchor_map(dir.write("a.tsv", "# anchors\n" + a.str()), g1, g2);
  EXPECT_EQ(map.size(), 48u);
  EXPECT_EQ(map.source, AnchorMap::Source::kUserProvided);
}

}  // namespace
}  // namespace gsana
