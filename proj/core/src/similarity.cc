#include "gsana/similarity.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "gsana/text.h"

namespace gsana {

// --- External similarity table ---------------------------------------------

void ExternalSimilarity::set(VertexId u, VertexId v, double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("external similarity must lie in [0, 1]");
  }
  if (value == 0.0) {
    values_.erase(key(u, v));
  } else {
    values_[key(u, v)] = value;
  }
}

double ExternalSimilarity::value(VertexId u, VertexId v) const {
  const auto it = values_.find(key(u, v));
  return it == values_.end() ? 0.0 : it->second;
}

std::vector<std::pair<VertexPair, double>> ExternalSimilarity::entries() const {
  std::vector<std::pair<VertexPair, double>> out;
  out.reserve(values_.size());
  for (const auto& [k, value] : values_) {
    out.push_back({{static_cast<VertexId>(k >> 32), static_cast<VertexId>(k)}, value});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

ExternalSimilarity read_external_similarity(std::istream& in, const AttributedGraph& g1,
                                            const AttributedGraph& g2,
                                            const std::string& name) {
  ExternalSimilarity table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!text::is_content_line(line)) continue;
    const auto fields = text::split_fields(line);
    if (fields.size() != 3) throw InputError(name, line_no, "expected 'ext_u TAB ext_v TAB value'");
    const auto u = g1.find(fields[0]);
    const auto v = g2.find(fields[1]);
    if (!u) throw InputError(name, line_no, "unknown graph-1 vertex '" + std::string(fields[0]) + "'");
    if (!v) throw InputError(name, line_no, "unknown graph-2 vertex '" + std::string(fields[1]) + "'");
    double value = 0.0;
    try {
      value = text::parse_double(fields[2]);
    } catch (const std::invalid_argument&) {
      throw InputError(name, line_no, "value is not a number");
    }
    if (value < 0.0 || value > 1.0) throw InputError(name, line_no, "value outside [0, 1]");
    table.set(*u, *v, value);
  }
  return table;
}

ExternalSimilarity load_external_similarity(const std::filesystem::path& file,
                                            const AttributedGraph& g1,
                                            const AttributedGraph& g2) {
  auto in = text::open_input(file);
  return read_external_similarity(in, g1, g2, file.string());
}

void write_external_similarity(std::ostream& out, const ExternalSimilarity& table,
                               const AttributedGraph& g1, const AttributedGraph& g2) {
  const auto precision = out.precision(17);
  for (const auto& [pair, value] : table.entries()) {
    out << g1.external_id(pair.first) << '\t' << g2.external_id(pair.second) << '\t' << value
        << '\n';
  }
  out.precision(precision);
}

TokenWeights read_token_weights(std::istream& in, const std::string& name) {
  TokenWeights weights;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!text::is_content_line(line)) continue;
    const auto fields = text::split_fields(line);
    if (fields.size() != 2) throw InputError(name, line_no, "expected 'token TAB weight'");
    double w = 0.0;
    try {
      w = text::parse_double(fields[1]);
    } catch (const std::invalid_argument&) {
      throw InputError(name, line_no, "weight is not a number");
    }
    if (!(w > 0.0)) throw InputError(name, line_no, "weight must be positive");
    weights[std::string(fields[0])] = w;
  }
  return weights;
}

TokenWeights load_token_weights(const std::filesystem::path& file) {
  auto in = text::open_input(file);
  return read_token_weights(in, file.string());
}

// --- Component formulas ----------------------------------------------------

double relative_degree_distance(std::size_t d1, std::size_t d2) {
  if (d1 + d2 == 0) return 1.0;
  const double diff = d1 > d2 ? static_cast<double>(d1 - d2) : static_cast<double>(d2 - d1);
  return 1.0 / (1.0 + 2.0 * diff / static_cast<double>(d1 + d2));
}

double histogram_overlap(std::span<const std::pair<std::uint32_t, std::uint32_t>> a,
                         std::span<const std::pair<std::uint32_t, std::uint32_t>> b,
                         std::span<const double> weights, double empty_value) {
  auto weight = [&](std::uint32_t key) { return weights.empty() ? 1.0 : weights[key]; };
  double num = 0.0;
  double den = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      den += weight(a[i].first) * a[i].second;
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      den += weight(b[j].first) * b[j].second;
      ++j;
    } else {
      const double w = weight(a[i].first);
      num += w * std::min(a[i].second, b[j].second);
      den += w * std::max(a[i].second, b[j].second);
      ++i;
      ++j;
    }
  }
  return den == 0.0 ? empty_value : num / den;
}

double weighted_jaccard(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                        std::span<const double> weights) {
  auto weight = [&](std::uint32_t key) { return weights.empty() ? 1.0 : weights[key]; };
  double inter = 0.0;
  double uni = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      uni += weight(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      uni += weight(b[j++]);
    } else {
      const double w = weight(a[i]);
      inter += w;
      uni += w;
      ++i;
      ++j;
    }
  }
  return uni == 0.0 ? 0.0 : inter / uni;
}

// --- AnchorIndex -----------------------------------------------------------

AnchorIndex::AnchorIndex(const AttributedGraph& g1, const AttributedGraph& g2,
                         std::span<const VertexPair> anchors)
    : counterpart_(g1.num_vertices(), kNoVertex),
      in_second_(g2.num_vertices(), 0),
      image_offsets_(g1.num_vertices() + 1, 0),
      second_count_(g2.num_vertices(), 0),
      size_(anchors.size()) {
  for (const auto& [u, v] : anchors) {
    if (u >= g1.num_vertices() || v >= g2.num_vertices()) {
      throw std::out_of_range("anchor pair out of range");
    }
    if (counterpart_[u] != kNoVertex || in_second_[v]) {
      throw std::invalid_argument("anchor pairs are not injective");
    }
    counterpart_[u] = v;
    in_second_[v] = 1;
  }
  for (VertexId u = 0; u < g1.num_vertices(); ++u) {
    for (const auto w : g1.neighbors(u)) {
      if (counterpart_[w] != kNoVertex) images_.push_back(counterpart_[w]);
    }
    std::sort(images_.begin() + static_cast<std::ptrdiff_t>(image_offsets_[u]), images_.end());
    image_offsets_[u + 1] = images_.size();
  }
  for (VertexId v = 0; v < g2.num_vertices(); ++v) {
    for (const auto x : g2.neighbors(v)) second_count_[v] += in_second_[x];
  }
}

// --- SimilarityContext -----------------------------------------------------

namespace {

// Shared id space over the names of two vocabularies.
struct Unified {
  std::vector<std::uint32_t> first;
  std::vector<std::uint32_t> second;
  std::vector<std::string> names;
};

Unified unify(const Vocabulary& a, const Vocabulary& b) {
  Unified out;
  out.names = a.names();
  out.first.resize(a.size());
  for (std::uint32_t i = 0; i < a.size(); ++i) out.first[i] = i;
  out.second.resize(b.size());
  for (std::uint32_t i = 0; i < b.size(); ++i) {
    const auto hit = a.find(b.name(i));
    if (hit) {
      out.second[i] = *hit;
    } else {
      out.second[i] = static_cast<std::uint32_t>(out.names.size());
      out.names.push_back(b.name(i));
    }
  }
  return out;
}

// Appends the run-length histogram of `keys` (sorted in place) to `out`.
void append_histogram(std::vector<std::uint32_t>& keys, Histogram& out) {
  std::sort(keys.begin(), keys.end());
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    out.push_back({keys[i], static_cast<std::uint32_t>(j - i)});
    i = j;
  }
}

}  // namespace

SimilarityContext::SimilarityContext(const AttributedGraph& g1, const AttributedGraph& g2,
                                     SimilarityConfig config)
    : g1_(&g1), g2_(&g2), config_(std::move(config)) {
  if (!(config_.close_epsilon > 0.0)) {
    throw std::invalid_argument("closeness threshold must be positive");
  }
  for (const auto& [token, w] : config_.token_weights) {
    if (!(w > 0.0)) throw std::invalid_argument("weight of '" + token + "' must be positive");
  }

  for (std::size_t i = 0; i < g1.edge_schema().columns.size(); ++i) {
    const auto& col = g1.edge_schema().columns[i];
    if (col.kind != AttrKind::kNumeric) continue;
    const auto j = g2.edge_schema().numeric_index(col.name);
    if (j) shared_numeric_.push_back({*g1.edge_schema().numeric_index(col.name), *j});
  }

  if (config_.components) {
    mask_ = *config_.components;
  } else {
    mask_.neighbor_vertex_types = g1.has_vertex_types() || g2.has_vertex_types();
    mask_.neighbor_edge_types = g1.has_edge_types() || g2.has_edge_types();
    mask_.vertex_attrs =
        config_.external != nullptr || g1.has_vertex_attrs() || g2.has_vertex_attrs();
    mask_.edge_attrs =
        !shared_numeric_.empty() || g1.has_edge_tokens() || g2.has_edge_tokens();
  }

  const auto vtypes = unify(g1.vertex_type_names(), g2.vertex_type_names());
  const auto etypes = unify(g1.edge_type_names(), g2.edge_type_names());
  const auto vtokens = unify(g1.vertex_token_names(), g2.vertex_token_names());
  const auto etokens = unify(g1.edge_token_names(), g2.edge_token_names());

  auto weight_of = [&](std::string_view token) {
    const auto it = config_.token_weights.find(std::string(token));
    return it == config_.token_weights.end() ? 1.0 : it->second;
  };
  token_weights_.reserve(vtokens.names.size());
  for (const auto& n : vtokens.names) token_weights_.push_back(weight_of(n));
  edge_token_weights_.reserve(etokens.names.size());
  for (const auto& n : etokens.names) {
    edge_token_weights_.push_back(weight_of(split_qualified_token(n).second));
  }

  for (const auto side : {Side::kFirst, Side::kSecond}) {
    const bool first = side == Side::kFirst;
    const auto& g = first ? g1 : g2;
    const auto& vt = first ? vtypes.first : vtypes.second;
    const auto& et = first ? etypes.first : etypes.second;
    const auto& vk = first ? vtokens.first : vtokens.second;
    const auto& ek = first ? etokens.first : etokens.second;
    auto& data = sides_[side_index(side)];
    const auto n = g.num_vertices();

    data.vertex_type.resize(n);
    for (VertexId u = 0; u < n; ++u) data.vertex_type[u] = vt[g.vertex_type(u)];

    std::vector<std::uint32_t> keys;
    data.offsets_vtype.assign(1, 0);
    data.offsets_etype.assign(1, 0);
    data.offsets_attrs.assign(1, 0);
    data.offsets_etokens.assign(1, 0);
    for (VertexId u = 0; u < n; ++u) {
      keys.clear();
      for (const auto w : g.neighbors(u)) keys.push_back(vt[g.vertex_type(w)]);
      append_histogram(keys, data.neighbor_vtypes);
      data.offsets_vtype.push_back(data.neighbor_vtypes.size());

      keys.clear();
      for (const auto e : g.incident_edges(u)) keys.push_back(et[g.edge_type(e)]);
      append_histogram(keys, data.incident_etypes);
      data.offsets_etype.push_back(data.incident_etypes.size());

      const auto begin = data.attrs.size();
      for (const auto t : g.vertex_attrs(u)) data.attrs.push_back(vk[t]);
      std::sort(data.attrs.begin() + static_cast<std::ptrdiff_t>(begin), data.attrs.end());
      data.offsets_attrs.push_back(data.attrs.size());

      keys.clear();
      for (const auto e : g.incident_edges(u)) {
        for (const auto t : g.edge_tokens(e)) keys.push_back(ek[t]);
      }
      append_histogram(keys, data.incident_etokens);
      data.offsets_etokens.push_back(data.incident_etokens.size());
    }
  }
}

double SimilarityContext::type_similarity(VertexId u, VertexId v) const {
  return sides_[0].vertex_type[u] == sides_[1].vertex_type[v] ? 1.0 : 0.0;
}

double SimilarityContext::anchor_similarity(VertexId u, VertexId v,
                                            const AnchorIndex& anchors) const {
  const auto images = anchors.anchor_neighbor_images(u);
  const auto second = anchors.anchor_neighbor_count_second(v);
  if (images.empty() && second == 0) return 0.0;
  const auto nv = g2_->neighbors(v);
  std::size_t common = 0;
  for (const auto x : images) common += std::binary_search(nv.begin(), nv.end(), x);
  return static_cast<double>(common) /
         static_cast<double>(images.size() + second - common);
}

double SimilarityContext::relative_degree(VertexId u, VertexId v) const {
  return relative_degree_distance(g1_->degree(u), g2_->degree(v));
}

double SimilarityContext::neighbor_type_similarity(VertexId u, VertexId v,
                                                   NeighborKind kind) const {
  if (kind == NeighborKind::kVertexTypes) {
    return histogram_overlap(slice(sides_[0].neighbor_vtypes, sides_[0].offsets_vtype, u),
                             slice(sides_[1].neighbor_vtypes, sides_[1].offsets_vtype, v));
  }
  return histogram_overlap(slice(sides_[0].incident_etypes, sides_[0].offsets_etype, u),
                           slice(sides_[1].incident_etypes, sides_[1].offsets_etype, v));
}

double SimilarityContext::vertex_attr_similarity(VertexId u, VertexId v) const {
  if (config_.external) return config_.external->value(u, v);
  const auto& a = sides_[0];
  const auto& b = sides_[1];
  return weighted_jaccard({a.attrs.data() + a.offsets_attrs[u], a.attrs.data() + a.offsets_attrs[u + 1]},
                          {b.attrs.data() + b.offsets_attrs[v], b.attrs.data() + b.offsets_attrs[v + 1]},
                          token_weights_);
}

double SimilarityContext::edge_attr_similarity(VertexId u, VertexId v) const {
  const auto d1 = g1_->degree(u);
  const auto d2 = g2_->degree(v);
  if (d1 == 0 || d2 == 0) return 0.0;
  if (!shared_numeric_.empty()) {
    std::size_t close = 0;
    for (const auto e : g1_->incident_edges(u)) {
      const auto x = g1_->edge_numeric(e);
      for (const auto f : g2_->incident_edges(v)) {
        const auto y = g2_->edge_numeric(f);
        close += std::all_of(shared_numeric_.begin(), shared_numeric_.end(), [&](const auto& c) {
          return std::abs(x[c.first] - y[c.second]) < config_.close_epsilon;
        });
      }
    }
    return static_cast<double>(close) / (static_cast<double>(d1) * static_cast<double>(d2));
  }
  return histogram_overlap(slice(sides_[0].incident_etokens, sides_[0].offsets_etokens, u),
                           slice(sides_[1].incident_etokens, sides_[1].offsets_etokens, v),
                           edge_token_weights_, 0.0);
}

double SimilarityContext::sum_active(VertexId u, VertexId v, const AnchorIndex* anchors,
                                     SimilarityScore* out) const {
  const double alpha = anchors ? anchor_similarity(u, v, *anchors) : 0.0;
  const double delta = relative_degree(u, v);
  double sum = alpha + delta;
  if (out) {
    out->anchor = alpha;
    out->degree = delta;
  }
  if (mask_.neighbor_vertex_types) {
    const double x = neighbor_type_similarity(u, v, NeighborKind::kVertexTypes);
    sum += x;
    if (out) out->neighbor_vertex_types = x;
  }
  if (mask_.neighbor_edge_types) {
    const double x = neighbor_type_similarity(u, v, NeighborKind::kEdgeTypes);
    sum += x;
    if (out) out->neighbor_edge_types = x;
  }
  if (mask_.vertex_attrs) {
    const double x = vertex_attr_similarity(u, v);
    sum += x;
    if (out) out->vertex_attrs = x;
  }
  if (mask_.edge_attrs) {
    const double x = edge_attr_similarity(u, v);
    sum += x;
    if (out) out->edge_attrs = x;
  }
  return sum / static_cast<double>(mask_.active_count());
}

SimilarityScore SimilarityContext::score(VertexId u, VertexId v,
                                         const AnchorIndex* anchors) const {
  SimilarityScore out;
  out.type = type_similarity(u, v);
  const double mean = sum_active(u, v, anchors, &out);
  out.total = out.type == 0.0 ? 0.0 : mean;
  return out;
}

double SimilarityContext::total(VertexId u, VertexId v, const AnchorIndex* anchors) const {
  if (type_similarity(u, v) == 0.0) return 0.0;
  return sum_active(u, v, anchors, nullptr);
}

}  // namespace gsana
