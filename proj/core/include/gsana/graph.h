#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gsana/types.h"

namespace gsana {

enum class AttrKind : std::uint8_t { kSet, kNumeric };

// Edge set-attribute tokens are interned per column as "column<US>token".
inline constexpr char kTokenSeparator = '\x1f';
std::string qualified_token(std::string_view column, std::string_view token);
std::pair<std::string_view, std::string_view> split_qualified_token(
    std::string_view name);

struct EdgeAttrColumn {
  std::string name;
  AttrKind kind = AttrKind::kSet;

  friend bool operator==(const EdgeAttrColumn&, const EdgeAttrColumn&) = default;
};

// Declared layout of an edge file: an optional type column followed by the
// attribute columns, in order.
struct EdgeSchema {
  bool has_type = true;
  std::vector<EdgeAttrColumn> columns;

  std::size_t numeric_count() const;
  // Position of `name` among the numeric columns, if declared numeric.
  std::optional<std::size_t> numeric_index(std::string_view name) const;

  friend bool operator==(const EdgeSchema&, const EdgeSchema&) = default;
};

// Parses a `#edges type attrs=name:kind,...` header line. Returns nullopt when
// the line is not an edge header.
std::optional<EdgeSchema> parse_edge_header(std::string_view line);
std::string format_edge_header(const EdgeSchema& schema);

// String interning table; ids are dense in insertion order.
class Vocabulary {
 public:
  std::uint32_t intern(std::string_view name);
  std::optional<std::uint32_t> find(std::string_view name) const;
  const std::string& name(std::uint32_t id) const { return names_[id]; }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

// Undirected typed/attributed graph. Immutable once built; safe for
// concurrent readers.
//
// Adjacency is stored in CSR form with each neighbor list sorted by internal
// id. incident_edges(u)[i] is the edge joining u and neighbors(u)[i].
class AttributedGraph {
 public:
  AttributedGraph() = default;

  VertexId num_vertices() const {
    return static_cast<VertexId>(external_ids_.size());
  }
  std::size_t num_edges() const { return edge_endpoints_.size(); }

  std::span<const VertexId> neighbors(VertexId u) const {
    return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
  }
  std::span<const EdgeId> incident_edges(VertexId u) const {
    return {adjacency_edges_.data() + offsets_[u],
            adjacency_edges_.data() + offsets_[u + 1]};
  }
  std::size_t degree(VertexId u) const { return offsets_[u + 1] - offsets_[u]; }
  bool has_edge(VertexId u, VertexId v) const;

  TypeId vertex_type(VertexId u) const { return vertex_types_[u]; }
  std::span<const TokenId> vertex_attrs(VertexId u) const {
    return {vertex_attrs_.data() + vertex_attr_offsets_[u],
            vertex_attrs_.data() + vertex_attr_offsets_[u + 1]};
  }

  VertexPair edge_endpoints(EdgeId e) const { return edge_endpoints_[e]; }
  TypeId edge_type(EdgeId e) const { return edge_types_[e]; }
  // Union of the edge's set-valued attribute tokens, sorted and unique.
  std::span<const TokenId> edge_tokens(EdgeId e) const {
    return {edge_tokens_.data() + edge_token_offsets_[e],
            edge_tokens_.data() + edge_token_offsets_[e + 1]};
  }
  // Values of the numeric columns, in numeric-column order.
  std::span<const double> edge_numeric(EdgeId e) const {
    const std::size_t n = schema_.numeric_count();
    return {edge_numeric_.data() + e * n, n};
  }

  const EdgeSchema& edge_schema() const { return schema_; }
  const Vocabulary& vertex_type_names() const { return vertex_type_vocab_; }
  const Vocabulary& vertex_token_names() const { return vertex_token_vocab_; }
  const Vocabulary& edge_type_names() const { return edge_type_vocab_; }
  const Vocabulary& edge_token_names() const { return edge_token_vocab_; }

  // True when at least one vertex (edge) carries a non-empty type name.
  bool has_vertex_types() const;
  bool has_edge_types() const;
  bool has_vertex_attrs() const { return !vertex_attrs_.empty(); }
  bool has_edge_tokens() const { return !edge_tokens_.empty(); }

  const std::string& external_id(VertexId u) const { return external_ids_[u]; }
  std::optional<VertexId> find(std::string_view external) const;

 private:
  friend class GraphBuilder;

  std::vector<std::string> external_ids_;
  std::unordered_map<std::string, VertexId> internal_ids_;

  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> adjacency_;
  std::vector<EdgeId> adjacency_edges_;

  std::vector<TypeId> vertex_types_;
  std::vector<std::size_t> vertex_attr_offsets_{0};
  std::vector<TokenId> vertex_attrs_;

  std::vector<VertexPair> edge_endpoints_;
  std::vector<TypeId> edge_types_;
  std::vector<std::size_t> edge_token_offsets_{0};
  std::vector<TokenId> edge_tokens_;
  std::vector<double> edge_numeric_;

  EdgeSchema schema_;
  Vocabulary vertex_type_vocab_;
  Vocabulary vertex_token_vocab_;
  Vocabulary edge_type_vocab_;
  Vocabulary edge_token_vocab_;
};

// Incremental construction of an AttributedGraph. Self-loops are dropped and
// repeated edges keep the first-seen type and attributes.
class GraphBuilder {
 public:
  explicit GraphBuilder(EdgeSchema schema = {});

  // Returns the id of `external`, creating an untyped attribute-free vertex on
  // first sight.
  VertexId add_vertex(std::string_view external);
  std::optional<VertexId> find(std::string_view external) const;
  void set_vertex_type(VertexId u, std::string_view type);
  void add_vertex_attr(VertexId u, std::string_view token);

  // `tokens` are column-qualified set-attribute tokens (see qualified_token);
  // `numeric` holds one value per numeric column. Returns false for
  // self-loops and duplicates.
  bool add_edge(VertexId u, VertexId v, std::string_view type = {},
                std::span<const std::string> tokens = {},
                std::span<const double> numeric = {});
  bool has_edge(VertexId u, VertexId v) const;

  VertexId num_vertices() const {
    return static_cast<VertexId>(external_ids_.size());
  }
  std::size_t num_edges() const { return edges_.size(); }
  const EdgeSchema& schema() const { return schema_; }

  AttributedGraph build() &&;

 private:
  struct PendingEdge {
    VertexPair ends;
    TypeId type;
    std::vector<TokenId> tokens;
    std::vector<double> numeric;
  };

  EdgeSchema schema_;
  std::vector<std::string> external_ids_;
  std::unordered_map<std::string, VertexId> internal_ids_;
  std::vector<TypeId> vertex_types_;
  std::vector<std::vector<TokenId>> vertex_attrs_;
  std::vector<PendingEdge> edges_;
  std::unordered_set<std::uint64_t> edge_keys_;
  Vocabulary vertex_type_vocab_;
  Vocabulary vertex_token_vocab_;
  Vocabulary edge_type_vocab_;
  Vocabulary edge_token_vocab_;
};

// Known correspondences between graph-1 and graph-2 vertices.
struct AnchorMap {
  enum class Source : std::uint8_t { kUserProvided, kBootstrapped };

  std::vector<VertexPair> pairs;
  Source source = Source::kUserProvided;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

struct GroundTruth {
  std::vector<VertexPair> pairs;

  std::size_t size() const { return pairs.size(); }
};

// Throws std::invalid_argument if any first or second id repeats.
void check_injective(std::span<const VertexPair> pairs);

// Loaders. Vertex file: `ext_id TAB type TAB attr1,attr2,...`; edge file:
// optional `#edges ...` header then `ext_u TAB ext_v [TAB type] TAB attrs...`
// rows. Lines without tabs are split on whitespace. `#` starts a comment.
AttributedGraph read_graph(std::istream* vertices, std::istream& edges,
                           const std::string& vertex_name = "<vertices>",
                           const std::string& edge_name = "<edges>");
AttributedGraph load_graph(const std::optional<std::filesystem::path>& vertex_file,
                           const std::filesystem::path& edge_file);

void write_graph(const AttributedGraph& g, std::ostream& vertices,
                 std::ostream& edges);
void save_graph(const AttributedGraph& g, const std::filesystem::path& vertex_file,
                const std::filesystem::path& edge_file);

// Pair files: `ext_u TAB ext_v` per line; both ids must resolve and the pairs
// must be injective in both directions. File order is preserved.
std::vector<VertexPair> read_vertex_pairs(std::istream& in, const AttributedGraph& g1,
                                          const AttributedGraph& g2,
                                          const std::string& name = "<pairs>");
AnchorMap load_anchor_map(const std::filesystem::path& file,
                          const AttributedGraph& g1, const AttributedGraph& g2);
GroundTruth load_ground_truth(const std::filesystem::path& file,
                              const AttributedGraph& g1, const AttributedGraph& g2);
void write_vertex_pairs(std::ostream& out, std::span<const VertexPair> pairs,
                        const AttributedGraph& g1, const AttributedGraph& g2);

}  // namespace gsana
