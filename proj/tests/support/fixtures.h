#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gsana/bench.h"
#include "gsana/graph.h"

namespace gsana::testing {

struct VertexSpec {
  std::string id;
  std::string type;
  std::vector<std::string> attrs;
};

struct EdgeSpec {
  std::string u;
  std::string v;
  std::string type;
  std::vector<std::string> tokens;  // column-qualified
  std::vector<double> numeric;
};

inline AttributedGraph make_graph(const std::vector<VertexSpec>& vertices,
                                  const std::vector<EdgeSpec>& edges,
                                  EdgeSchema schema = {.has_type = false, .columns = {}}) {
  GraphBuilder b(std::move(schema));
  for (const auto& v : vertices) {
    const auto id = b.add_vertex(v.id);
    if (!v.type.empty()) b.set_vertex_type(id, v.type);
    for (const auto& a : v.attrs) b.add_vertex_attr(id, a);
  }
  for (const auto& e : edges) {
    const auto u = b.add_vertex(e.u);  // sequenced: ids follow first appearance
    const auto v = b.add_vertex(e.v);
    b.add_edge(u, v, e.type, e.tokens, e.numeric);
  }
  return std::move(b).build();
}

// Vertices "0".."n-1" in id order joined by `pairs`.
inline AttributedGraph numbered_graph(int n, const std::vector<std::pair<int, int>>& pairs) {
  GraphBuilder b(EdgeSchema{.has_type = false, .columns = {}});
  for (int i = 0; i < n; ++i) b.add_vertex(std::to_string(i));
  for (const auto& [u, v] : pairs) {
    b.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v));
  }
  return std::move(b).build();
}

inline AttributedGraph path_graph(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
  return numbered_graph(n, pairs);
}

// Random graph on n vertices with roughly m edges, a few types and tokens.
inline AttributedGraph random_graph(std::mt19937_64& rng, int n, int m, int types, int tokens) {
  GraphBuilder b(EdgeSchema{.has_type = types > 0, .columns = {}});
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int i = 0; i < n; ++i) {
    const auto id = b.add_vertex("r" + std::to_string(i));
    if (types > 0) b.set_vertex_type(id, "t" + std::to_string(pick(rng) % types));
    if (tokens > 0) {
      const int count = pick(rng) % 4;
      for (int t = 0; t < count; ++t) b.add_vertex_attr(id, "a" + std::to_string(pick(rng) % tokens));
    }
  }
  for (int i = 0; i < m; ++i) {
    const auto u = static_cast<VertexId>(pick(rng));
    const auto v = static_cast<VertexId>(pick(rng));
    const std::string type = types > 0 ? "e" + std::to_string(pick(rng) % types) : "";
    b.add_edge(u, v, type);
  }
  return std::move(b).build();
}

// Exact relabeled copy and its ground truth.
inline Perturbed relabeled_copy(const AttributedGraph& g, std::uint64_t seed) {
  PerturbationSpec spec;
  spec.seed = seed;
  return perturb(g, spec);
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("gsana-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(path_ / name) << content;
    return file(name);
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace gsana::testing
