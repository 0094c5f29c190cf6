#include "gsana/graph.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "gsana/text.h"

namespace gsana {
namespace {

std::uint64_t edge_key(VertexId u, VertexId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

void sort_unique(std::vector<TokenId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::string qualified_token(std::string_view column, std::string_view token) {
  std::string out(column);
  out.push_back(kTokenSeparator);
  out.append(token);
  return out;
}

std::pair<std::string_view, std::string_view> split_qualified_token(
    std::string_view name) {
  const auto pos = name.find(kTokenSeparator);
  if (pos == std::string_view::npos) return {{}, name};
  return {name.substr(0, pos), name.substr(pos + 1)};
}

// --- EdgeSchema ------------------------------------------------------------

std::size_t EdgeSchema::numeric_count() const {
  return static_cast<std::size_t>(
      std::count_if(columns.begin(), columns.end(),
                    [](const auto& c) { return c.kind == AttrKind::kNumeric; }));
}

std::optional<std::size_t> EdgeSchema::numeric_index(std::string_view name) const {
  std::size_t index = 0;
  for (const auto& c : columns) {
    if (c.kind != AttrKind::kNumeric) continue;
    if (c.name == name) return index;
    ++index;
  }
  return std::nullopt;
}

std::optional<EdgeSchema> parse_edge_header(std::string_view line) {
  line = text::trim(line);
  constexpr std::string_view kTag = "#edges";
  if (line.substr(0, kTag.size()) != kTag) return std::nullopt;
  const auto rest = line.substr(kTag.size());
  if (!rest.empty() && rest.front() != ' ' && rest.front() != '\t') {
    return std::nullopt;
  }
  EdgeSchema schema;
  schema.has_type = false;
  for (auto word : text::split_fields(rest)) {
    if (word == "type") {
      schema.has_type = true;
    } else if (word.substr(0, 6) == "attrs=") {
      const auto list = word.substr(6);
      if (list.empty()) continue;
      for (auto item : text::split(list, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
          throw std::invalid_argument("attribute '" + std::string(item) +
                                      "' lacks a ':kind' suffix");
        }
        EdgeAttrColumn column{std::string(item.substr(0, colon)), AttrKind::kSet};
        const auto kind = item.substr(colon + 1);
        if (kind == "numeric") {
          column.kind = AttrKind::kNumeric;
        } else if (kind != "set") {
          throw std::invalid_argument("unknown attribute kind '" +
                                      std::string(kind) + "'");
        }
        if (column.name.empty()) throw std::invalid_argument("empty attribute name");
        schema.columns.push_back(std::move(column));
      }
    } else {
      throw std::invalid_argument("unexpected header word '" + std::string(word) + "'");
    }
  }
  return schema;
}

std::string format_edge_header(const EdgeSchema& schema) {
  std::string out = "#edges";
  if (schema.has_type) out += " type";
  if (!schema.columns.empty()) {
    out += " attrs=";
    for (std::size_t i = 0; i < schema.columns.size(); ++i) {
      if (i) out += ',';
      out += schema.columns[i].name;
      out += schema.columns[i].kind == AttrKind::kNumeric ? ":numeric" : ":set";
    }
  }
  return out;
}

// --- Vocabulary ------------------------------------------------------------

std::uint32_t Vocabulary::intern(std::string_view name) {
  const auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view name) const {
  const auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

// --- AttributedGraph -------------------------------------------------------

bool AttributedGraph::has_edge(VertexId u, VertexId v) const {
  const auto n = neighbors(u);
  return std::binary_search(n.begin(), n.end(), v);
}

bool AttributedGraph::has_vertex_types() const {
  for (const auto& name : vertex_type_vocab_.names()) {
    if (!name.empty()) return true;
  }
  return false;
}

bool AttributedGraph::has_edge_types() const {
  for (const auto& name : edge_type_vocab_.names()) {
    if (!name.empty()) return true;
  }
  return false;
}

std::optional<VertexId> AttributedGraph::find(std::string_view external) const {
  const auto it = internal_ids_.find(std::string(external));
  if (it == internal_ids_.end()) return std::nullopt;
  return it->second;
}

// --- GraphBuilder ----------------------------------------------------------

GraphBuilder::GraphBuilder(EdgeSchema schema) : schema_(std::move(schema)) {
  // Type id 0 is always the empty (untyped) name.
  vertex_type_vocab_.intern("");
  edge_type_vocab_.intern("");
}

VertexId GraphBuilder::add_vertex(std::string_view external) {
  const auto it = internal_ids_.find(std::string(external));
  if (it != internal_ids_.end()) return it->second;
  const auto id = static_cast<VertexId>(external_ids_.size());
  external_ids_.emplace_back(external);
  internal_ids_.emplace(external_ids_.back(), id);
  vertex_types_.push_back(0);
  vertex_attrs_.emplace_back();
  return id;
}

std::optional<VertexId> GraphBuilder::find(std::string_view external) const {
  const auto it = internal_ids_.find(std::string(external));
  if (it == internal_ids_.end()) return std::nullopt;
  return it->second;
}

void GraphBuilder::set_vertex_type(VertexId u, std::string_view type) {
  vertex_types_.at(u) = vertex_type_vocab_.intern(type);
}

void GraphBuilder::add_vertex_attr(VertexId u, std::string_view token) {
  vertex_attrs_.at(u).push_back(vertex_token_vocab_.intern(token));
}

bool GraphBuilder::has_edge(VertexId u, VertexId v) const {
  return edge_keys_.contains(edge_key(u, v));
}

bool GraphBuilder::add_edge(VertexId u, VertexId v, std::string_view type,
                            std::span<const std::string> tokens,
                            std::span<const double> numeric) {
  if (u >= num_vertices() || v >= num_vertices()) {
    throw std::out_of_range("edge endpoint out of range");
  }
  if (numeric.size() != schema_.numeric_count()) {
    throw std::invalid_argument("numeric value count does not match the schema");
  }
  if (u == v) return false;
  if (!edge_keys_.insert(edge_key(u, v)).second) return false;
  PendingEdge e{{std::min(u, v), std::max(u, v)}, edge_type_vocab_.intern(type), {},
                {numeric.begin(), numeric.end()}};
  e.tokens.reserve(tokens.size());
  for (const auto& t : tokens) e.tokens.push_back(edge_token_vocab_.intern(t));
  sort_unique(e.tokens);
  edges_.push_back(std::move(e));
  return true;
}

AttributedGraph GraphBuilder::build() && {
  AttributedGraph g;
  const std::size_t n = external_ids_.size();
  g.external_ids_ = std::move(external_ids_);
  g.internal_ids_ = std::move(internal_ids_);
  g.vertex_types_ = std::move(vertex_types_);
  g.schema_ = std::move(schema_);
  g.vertex_type_vocab_ = std::move(vertex_type_vocab_);
  g.vertex_token_vocab_ = std::move(vertex_token_vocab_);
  g.edge_type_vocab_ = std::move(edge_type_vocab_);
  g.edge_token_vocab_ = std::move(edge_token_vocab_);

  g.vertex_attr_offsets_.assign(n + 1, 0);
  for (std::size_t u = 0; u < n; ++u) {
    sort_unique(vertex_attrs_[u]);
    g.vertex_attr_offsets_[u + 1] = g.vertex_attr_offsets_[u] + vertex_attrs_[u].size();
  }
  g.vertex_attrs_.reserve(g.vertex_attr_offsets_[n]);
  for (const auto& attrs : vertex_attrs_) {
    g.vertex_attrs_.insert(g.vertex_attrs_.end(), attrs.begin(), attrs.end());
  }

  const std::size_t m = edges_.size();
  const std::size_t numeric_width = g.schema_.numeric_count();
  g.edge_endpoints_.reserve(m);
  g.edge_types_.reserve(m);
  g.edge_token_offsets_.assign(m + 1, 0);
  g.edge_numeric_.reserve(m * numeric_width);
  for (std::size_t e = 0; e < m; ++e) {
    const auto& pe = edges_[e];
    g.edge_endpoints_.push_back(pe.ends);
    g.edge_types_.push_back(pe.type);
    g.edge_token_offsets_[e + 1] = g.edge_token_offsets_[e] + pe.tokens.size();
    g.edge_tokens_.insert(g.edge_tokens_.end(), pe.tokens.begin(), pe.tokens.end());
    g.edge_numeric_.insert(g.edge_numeric_.end(), pe.numeric.begin(), pe.numeric.end());
  }

  std::vector<std::size_t> degree(n, 0);
  for (const auto& pe : edges_) {
    ++degree[pe.ends.first];
    ++degree[pe.ends.second];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t u = 0; u < n; ++u) g.offsets_[u + 1] = g.offsets_[u] + degree[u];
  std::vector<std::pair<VertexId, EdgeId>> slots(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (std::size_t e = 0; e < m; ++e) {
    const auto [a, b] = edges_[e].ends;
    slots[cursor[a]++] = {b, static_cast<EdgeId>(e)};
    slots[cursor[b]++] = {a, static_cast<EdgeId>(e)};
  }
  g.adjacency_.resize(slots.size());
  g.adjacency_edges_.resize(slots.size());
  for (std::size_t u = 0; u < n; ++u) {
    auto first = slots.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u]);
    auto last = slots.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u + 1]);
    std::sort(first, last);
    for (auto it = first; it != last; ++it) {
      const auto i = static_cast<std::size_t>(it - slots.begin());
      g.adjacency_[i] = it->first;
      g.adjacency_edges_[i] = it->second;
    }
  }
  return g;
}

// --- Loading ---------------------------------------------------------------

AttributedGraph read_graph(std::istream* vertices, std::istream& edges,
                           const std::string& vertex_name,
                           const std::string& edge_name) {
  std::optional<GraphBuilder> builder;

  // Vertex rows are buffered until the edge header fixes the schema.
  std::vector<std::pair<std::size_t, std::string>> vertex_rows;
  if (vertices != nullptr) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(*vertices, line)) {
      ++line_no;
      if (!text::is_content_line(line)) continue;
      vertex_rows.emplace_back(line_no, line);
    }
  }

  EdgeSchema schema;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<std::size_t, std::string>> edge_rows;
  bool seen_data = false;
  while (std::getline(edges, line)) {
    ++line_no;
    if (!text::is_content_line(line)) {
      if (!seen_data) {
        try {
          if (auto header = parse_edge_header(line)) schema = std::move(*header);
        } catch (const std::invalid_argument& e) {
          throw InputError(edge_name, line_no, e.what());
        }
      }
      continue;
    }
    seen_data = true;
    edge_rows.emplace_back(line_no, line);
  }

  builder.emplace(schema);
  for (const auto& [no, row] : vertex_rows) {
    const auto fields = text::split_fields(row);
    if (fields.empty() || fields.size() > 3 || fields[0].empty()) {
      throw InputError(vertex_name, no, "expected 'ext_id TAB type TAB attrs'");
    }
    if (builder->find(fields[0])) {
      throw InputError(vertex_name, no,
                       "duplicate vertex id '" + std::string(fields[0]) + "'");
    }
    const auto u = builder->add_vertex(fields[0]);
    if (fields.size() > 1) builder->set_vertex_type(u, text::trim(fields[1]));
    if (fields.size() > 2) {
      for (auto token : text::split(fields[2], ',')) {
        token = text::trim(token);
        if (!token.empty()) builder->add_vertex_attr(u, token);
      }
    }
  }

  const std::size_t numeric_width = schema.numeric_count();
  const std::size_t first_attr = schema.has_type ? 3 : 2;
  std::vector<std::string> tokens;
  std::vector<double> numeric;
  for (const auto& [no, row] : edge_rows) {
    const auto fields = text::split_fields(row);
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      throw InputError(edge_name, no, "expected 'ext_u TAB ext_v ...'");
    }
    const std::size_t max_fields = first_attr + schema.columns.size();
    if (fields.size() > max_fields) {
      throw InputError(edge_name, no, "more fields than the header declares");
    }
    std::string_view type;
    if (schema.has_type && fields.size() > 2) type = text::trim(fields[2]);
    tokens.clear();
    numeric.clear();
    numeric.reserve(numeric_width);
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      const auto& column = schema.columns[c];
      const std::string_view value =
          first_attr + c < fields.size() ? fields[first_attr + c] : std::string_view{};
      if (column.kind == AttrKind::kNumeric) {
        try {
          numeric.push_back(text::parse_double(value));
        } catch (const std::invalid_argument& e) {
          throw InputError(edge_name, no,
                           "attribute '" + column.name + "': " + e.what());
        }
      } else {
        for (auto token : text::split(value, ',')) {
          token = text::trim(token);
          if (!token.empty()) tokens.push_back(qualified_token(column.name, token));
        }
      }
    }
    const auto u = builder->add_vertex(fields[0]);
    const auto v = builder->add_vertex(fields[1]);
    builder->add_edge(u, v, type, tokens, numeric);
  }
  return std::move(*builder).build();
}

AttributedGraph load_graph(const std::optional<std::filesystem::path>& vertex_file,
                           const std::filesystem::path& edge_file) {
  auto edges = text::open_input(edge_file);
  if (vertex_file) {
    auto vertices = text::open_input(*vertex_file);
    return read_graph(&vertices, edges, vertex_file->string(), edge_file.string());
  }
  return read_graph(nullptr, edges, "", edge_file.string());
}

void write_graph(const AttributedGraph& g, std::ostream& vertices, std::ostream& edges) {
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    vertices << g.external_id(u) << '\t' << g.vertex_type_names().name(g.vertex_type(u))
             << '\t';
    bool first = true;
    for (const auto t : g.vertex_attrs(u)) {
      if (!first) vertices << ',';
      vertices << g.vertex_token_names().name(t);
      first = false;
    }
    vertices << '\n';
  }

  const auto& schema = g.edge_schema();
  edges << format_edge_header(schema) << '\n';
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edge_endpoints(e);
    edges << g.external_id(u) << '\t' << g.external_id(v);
    if (schema.has_type) edges << '\t' << g.edge_type_names().name(g.edge_type(e));
    std::size_t numeric_index = 0;
    const auto values = g.edge_numeric(e);
    for (const auto& column : schema.columns) {
      edges << '\t';
      if (column.kind == AttrKind::kNumeric) {
        edges << values[numeric_index++];
        continue;
      }
      bool first = true;
      for (const auto t : g.edge_tokens(e)) {
        const auto [col, token] = split_qualified_token(g.edge_token_names().name(t));
        if (col != column.name) continue;
        if (!first) edges << ',';
        edges << token;
        first = false;
      }
    }
    edges << '\n';
  }
}

void save_graph(const AttributedGraph& g, const std::filesystem::path& vertex_file,
                const std::filesystem::path& edge_file) {
  std::ofstream vertices(vertex_file);
  std::ofstream edges(edge_file);
  if (!vertices) throw InputError(vertex_file.string(), 0, "cannot write file");
  if (!edges) throw InputError(edge_file.string(), 0, "cannot write file");
  edges.precision(17);
  write_graph(g, vertices, edges);
}

// --- Pair files ------------------------------------------------------------

void check_injective(std::span<const VertexPair> pairs) {
  std::unordered_set<VertexId> left;
  std::unordered_set<VertexId> right;
  for (const auto& p : pairs) {
    if (!left.insert(p.first).second) {
      throw std::invalid_argument("duplicate left id " + std::to_string(p.first));
    }
    if (!right.insert(p.second).second) {
      throw std::invalid_argument("duplicate right id " + std::to_string(p.second));
    }
  }
}

std::vector<VertexPair> read_vertex_pairs(std::istream& in, const AttributedGraph& g1,
                                          const AttributedGraph& g2,
                                          const std::string& name) {
  std::vector<VertexPair> pairs;
  std::unordered_set<VertexId> left;
  std::unordered_set<VertexId> right;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!text::is_content_line(line)) continue;
    const auto fields = text::split_fields(line);
    if (fields.size() != 2) throw InputError(name, line_no, "expected 'ext_u TAB ext_v'");
    const auto u = g1.find(fields[0]);
    if (!u) {
      throw InputError(name, line_no,
                       "unknown graph-1 vertex '" + std::string(fields[0]) + "'");
    }
    const auto v = g2.find(fields[1]);
    if (!v) {
      throw InputError(name, line_no,
                       "unknown graph-2 vertex '" + std::string(fields[1]) + "'");
    }
    if (!left.insert(*u).second) {
      throw InputError(name, line_no, "duplicate left id '" + std::string(fields[0]) + "'");
    }
    if (!right.insert(*v).second) {
      throw InputError(name, line_no,
                       "duplicate right id '" + std::string(fields[1]) + "'");
    }
    pairs.push_back({*u, *v});
  }
  return pairs;
}

AnchorMap load_anchor_map(const std::filesystem::path& file, const AttributedGraph& g1,
                          const AttributedGraph& g2) {
  auto in = text::open_input(file);
  return {read_vertex_pairs(in, g1, g2, file.string()), AnchorMap::Source::kUserProvided};
}

GroundTruth load_ground_truth(const std::filesystem::path& file,
                              const AttributedGraph& g1, const AttributedGraph& g2) {
  auto in = text::open_input(file);
  return {read_vertex_pairs(in, g1, g2, file.string())};
}

void write_vertex_pairs(std::ostream& out, std::span<const VertexPair> pairs,
                        const AttributedGraph& g1, const AttributedGraph& g2) {
  for (const auto& p : pairs) {
    out << g1.external_id(p.first) << '\t' << g2.external_id(p.second) << '\n';
  }
}

}  // namespace gsana
