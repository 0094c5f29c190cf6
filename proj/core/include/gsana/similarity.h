#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gsana/graph.h"

namespace gsana {

// Which metadata components take part in the composite score. The anchor and
// relative-degree components are always active.
struct ComponentMask {
  bool neighbor_vertex_types = false;
  bool neighbor_edge_types = false;
  bool vertex_attrs = false;
  bool edge_attrs = false;

  std::size_t active_count() const {
    return 2 + neighbor_vertex_types + neighbor_edge_types + vertex_attrs + edge_attrs;
  }
  friend bool operator==(const ComponentMask&, const ComponentMask&) = default;
};

// Sparse externally supplied pair likelihoods in [0, 1]; absent pairs are 0.
class ExternalSimilarity {
 public:
  // Stores `value` for (u, v); a value of 0 erases the entry.
  void set(VertexId u, VertexId v, double value);
  double value(VertexId u, VertexId v) const;
  std::size_t nnz() const { return values_.size(); }
  // All entries ordered by (u, v).
  std::vector<std::pair<VertexPair, double>> entries() const;

 private:
  static std::uint64_t key(VertexId u, VertexId v) {
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }
  std::unordered_map<std::uint64_t, double> values_;
};

ExternalSimilarity read_external_similarity(std::istream& in, const AttributedGraph& g1,
                                            const AttributedGraph& g2,
                                            const std::string& name = "<similarity>");
ExternalSimilarity load_external_similarity(const std::filesystem::path& file,
                                            const AttributedGraph& g1,
                                            const AttributedGraph& g2);
void write_external_similarity(std::ostream& out, const ExternalSimilarity& table,
                               const AttributedGraph& g1, const AttributedGraph& g2);

using TokenWeights = std::unordered_map<std::string, double>;

// `token TAB weight` lines; weights must be positive.
TokenWeights read_token_weights(std::istream& in, const std::string& name = "<weights>");
TokenWeights load_token_weights(const std::filesystem::path& file);

struct SimilarityConfig {
  TokenWeights token_weights;  // missing tokens weigh 1
  double close_epsilon = 1.0;
  std::optional<ComponentMask> components;  // nullopt: derived from the data
  std::shared_ptr<const ExternalSimilarity> external;
};

struct SimilarityScore {
  double total = 0.0;
  double type = 0.0;
  double anchor = 0.0;
  double degree = 0.0;
  std::optional<double> neighbor_vertex_types;
  std::optional<double> neighbor_edge_types;
  std::optional<double> vertex_attrs;
  std::optional<double> edge_attrs;
};

// (key, count) pairs sorted by key.
using Histogram = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

// (1 + 2|d1 - d2| / (d1 + d2))^-1, and 1 when both degrees are 0.
double relative_degree_distance(std::size_t d1, std::size_t d2);

// Sum of per-key minima over sum of per-key maxima, optionally weighted per
// key. Two empty histograms give `empty_value`.
double histogram_overlap(std::span<const std::pair<std::uint32_t, std::uint32_t>> a,
                         std::span<const std::pair<std::uint32_t, std::uint32_t>> b,
                         std::span<const double> weights = {}, double empty_value = 1.0);

// Weighted Jaccard of two sorted unique id sets; 0 when both are empty.
double weighted_jaccard(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                        std::span<const double> weights = {});

// Anchor bookkeeping for one iteration: membership of S1 / S2, counterparts,
// and for every graph-1 vertex the images of its anchor neighbors.
class AnchorIndex {
 public:
  AnchorIndex(const AttributedGraph& g1, const AttributedGraph& g2,
              std::span<const VertexPair> anchors);

  bool is_first(VertexId u) const { return counterpart_[u] != kNoVertex; }
  bool is_second(VertexId v) const { return in_second_[v] != 0; }
  VertexId counterpart(VertexId u) const { return counterpart_[u]; }
  std::span<const VertexId> counterparts() const { return counterpart_; }
  std::span<const VertexId> anchor_neighbor_images(VertexId u) const {
    return {images_.data() + image_offsets_[u], images_.data() + image_offsets_[u + 1]};
  }
  std::uint32_t anchor_neighbor_count_second(VertexId v) const { return second_count_[v]; }
  std::size_t size() const { return size_; }

 private:
  std::vector<VertexId> counterpart_;
  std::vector<char> in_second_;
  std::vector<std::size_t> image_offsets_;
  std::vector<VertexId> images_;
  std::vector<std::uint32_t> second_count_;
  std::size_t size_ = 0;
};

// Composite vertex-pair similarity between a graph-1 and a graph-2 vertex.
// Immutable after construction; all queries are safe to run concurrently.
class SimilarityContext {
 public:
  enum class NeighborKind { kVertexTypes, kEdgeTypes };

  SimilarityContext(const AttributedGraph& g1, const AttributedGraph& g2,
                    SimilarityConfig config = {});

  const AttributedGraph& first() const { return *g1_; }
  const AttributedGraph& second() const { return *g2_; }
  const SimilarityConfig& config() const { return config_; }
  const ComponentMask& components() const { return mask_; }

  double type_similarity(VertexId u, VertexId v) const;
  double anchor_similarity(VertexId u, VertexId v, const AnchorIndex& anchors) const;
  double relative_degree(VertexId u, VertexId v) const;
  double neighbor_type_similarity(VertexId u, VertexId v, NeighborKind kind) const;
  double vertex_attr_similarity(VertexId u, VertexId v) const;
  double edge_attr_similarity(VertexId u, VertexId v) const;

  // Full breakdown. With `anchors == nullptr` the anchor component is 0.
  SimilarityScore score(VertexId u, VertexId v, const AnchorIndex* anchors) const;
  // Same total as score(), without the breakdown.
  double total(VertexId u, VertexId v, const AnchorIndex* anchors) const;

 private:
  struct SideData {
    std::vector<std::uint32_t> vertex_type;  // unified type id
    std::vector<std::size_t> offsets_vtype;
    Histogram neighbor_vtypes;
    std::vector<std::size_t> offsets_etype;
    Histogram incident_etypes;
    std::vector<std::size_t> offsets_attrs;
    std::vector<std::uint32_t> attrs;  // unified token ids
    std::vector<std::size_t> offsets_etokens;
    Histogram incident_etokens;  // unified edge token ids
  };

  static std::span<const std::pair<std::uint32_t, std::uint32_t>> slice(
      const Histogram& h, const std::vector<std::size_t>& offsets, VertexId u) {
    return {h.data() + offsets[u], h.data() + offsets[u + 1]};
  }
  double sum_active(VertexId u, VertexId v, const AnchorIndex* anchors,
                    SimilarityScore* breakdown) const;

  const AttributedGraph* g1_;
  const AttributedGraph* g2_;
  SimilarityConfig config_;
  ComponentMask mask_;
  std::array<SideData, 2> sides_;
  std::vector<double> token_weights_;       // by unified vertex token id
  std::vector<double> edge_token_weights_;  // by unified edge token id
  // Numeric edge columns declared in both graphs: (graph-1 index, graph-2 index).
  std::vector<std::pair<std::size_t, std::size_t>> shared_numeric_;
};

}  // namespace gsana
