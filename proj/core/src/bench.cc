#include "gsana/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <nlohmann/json.hpp>
#include <numeric>
#include <ostream>
#include <random>
#include <spdlog/spdlog.h>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "gsana/rng.h"
#include "gsana/text.h"

namespace gsana {

// --- Evaluation ------------------------------------------------------------

EvalReport evaluate(std::span<const VertexPair> mapping, const ScopeLog* scopes,
                    std::span<const VertexPair> truth, VertexId first_count,
                    VertexId second_count) {
  if (truth.empty()) throw std::invalid_argument("ground truth is empty");
  EvalReport report;
  report.truth_size = truth.size();

  std::vector<VertexId> image(first_count, kNoVertex);
  for (const auto& [u, v] : mapping) {
    if (u >= first_count || v >= second_count) throw std::out_of_range("mapping id out of range");
    image[u] = v;
  }
  for (const auto& [u, v] : truth) {
    if (u >= first_count || v >= second_count) {
      throw std::out_of_range("ground-truth id out of range");
    }
    report.correct += image[u] == v;
  }
  const double n = static_cast<double>(truth.size());
  report.recall = static_cast<double>(report.correct) / n;
  if (scopes == nullptr) return report;

  const auto& its = scopes->iterations;
  for (const auto& it : its) {
    if (it.leaf_of_first.size() != first_count || it.leaf_of_second.size() != second_count) {
      throw std::invalid_argument("scope log does not match the graph sizes");
    }
  }

  // Hits: co-scoped in some iteration or mapped together at some point.
  constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> first_hit(truth.size(), kNever);
  std::vector<std::size_t> new_hits(its.size(), 0);
  std::vector<double> recall_by_iteration(its.size(), 0.0);
  for (std::size_t i = 0; i < its.size(); ++i) {
    const auto& it = its[i];
    std::vector<VertexId> snapshot(first_count, kNoVertex);
    for (const auto& [u, v] : it.mapping) snapshot[u] = v;
    std::size_t correct = 0;
    for (std::size_t t = 0; t < truth.size(); ++t) {
      const auto [u, v] = truth[t];
      const bool mapped = snapshot[u] == v;
      correct += mapped;
      if (first_hit[t] != kNever) continue;
      const auto& scope = it.scopes[it.leaf_of_second[v]];
      if (mapped || std::binary_search(scope.begin(), scope.end(), it.leaf_of_first[u])) {
        first_hit[t] = i;
        ++new_hits[i];
      }
    }
    recall_by_iteration[i] = static_cast<double>(correct) / n;
  }
  std::size_t final_hits = 0;
  for (std::size_t t = 0; t < truth.size(); ++t) {
    final_hits += first_hit[t] != kNever || image[truth[t].first] == truth[t].second;
  }
  report.hit_count = static_cast<double>(final_hits) / n;

  // Distinct co-scoped pairs, counted per graph-2 vertex with a stamp array.
  std::vector<std::vector<std::vector<VertexId>>> members(its.size());
  for (std::size_t i = 0; i < its.size(); ++i) {
    members[i].resize(its[i].scopes.size());
    for (VertexId u = 0; u < first_count; ++u) members[i][its[i].leaf_of_first[u]].push_back(u);
  }
  std::vector<std::uint64_t> fresh(its.size(), 0);
  std::vector<VertexId> stamp(first_count, kNoVertex);
  for (VertexId v = 0; v < second_count; ++v) {
    for (std::size_t i = 0; i < its.size(); ++i) {
      for (const auto leaf : its[i].scopes[its[i].leaf_of_second[v]]) {
        for (const auto u : members[i][leaf]) {
          if (stamp[u] == v) continue;
          stamp[u] = v;
          ++fresh[i];
        }
      }
    }
  }
  const double all_pairs = static_cast<double>(first_count) * static_cast<double>(second_count);
  std::uint64_t distinct = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < its.size(); ++i) {
    distinct += fresh[i];
    hits += new_hits[i];
    EvalIteration row;
    row.iteration = its[i].iteration;
    row.recall = recall_by_iteration[i];
    row.hit_count = static_cast<double>(hits) / n;
    row.gain = all_pairs > 0 ? 1.0 - static_cast<double>(distinct) / all_pairs : 1.0;
    report.per_iteration.push_back(row);
  }
  report.distinct_compared = distinct;
  report.gain = all_pairs > 0 ? 1.0 - static_cast<double>(distinct) / all_pairs : 1.0;
  return report;
}

std::vector<std::pair<std::string, std::string>> read_external_pairs(std::istream& in,
                                                                     const std::string& name) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!text::is_content_line(line)) continue;
    const auto f = text::split_fields(line);
    if (f.size() != 2) throw InputError(name, line_no, "expected 'ext_u TAB ext_v'");
    out.emplace_back(std::string(f[0]), std::string(f[1]));
  }
  return out;
}

EvalReport evaluate_external(std::span<const MappingRow> mapping,
                             std::span<const std::pair<std::string, std::string>> truth,
                             const ScopeLog* scopes) {
  if (truth.empty()) throw std::invalid_argument("ground truth is empty");
  if (scopes == nullptr) {
    std::unordered_map<std::string, std::string> image;
    for (const auto& row : mapping) image[row.first] = row.second;
    EvalReport report;
    report.truth_size = truth.size();
    for (const auto& [u, v] : truth) {
      const auto it = image.find(u);
      report.correct += it != image.end() && it->second == v;
    }
    report.recall = static_cast<double>(report.correct) / static_cast<double>(truth.size());
    return report;
  }

  auto index = [](const std::vector<std::string>& ids) {
    std::unordered_map<std::string_view, VertexId> out;
    for (VertexId i = 0; i < ids.size(); ++i) out.emplace(ids[i], i);
    return out;
  };
  const auto first = index(scopes->first_ids);
  const auto second = index(scopes->second_ids);
  auto resolve = [&](const std::string& u, const std::string& v, const char* what) {
    const auto a = first.find(u);
    const auto b = second.find(v);
    if (a == first.end() || b == second.end()) {
      throw InputError(what, 0, "pair (" + u + ", " + v + ") names an unknown vertex");
    }
    return VertexPair{a->second, b->second};
  };
  std::vector<VertexPair> dense_mapping;
  for (const auto& row : mapping) dense_mapping.push_back(resolve(row.first, row.second, "mapping"));
  std::vector<VertexPair> dense_truth;
  for (const auto& [u, v] : truth) dense_truth.push_back(resolve(u, v, "ground truth"));
  return evaluate(dense_mapping, scopes, dense_truth,
                  static_cast<VertexId>(scopes->first_ids.size()),
                  static_cast<VertexId>(scopes->second_ids.size()));
}

void write_eval_report(std::ostream& out, const EvalReport& r) {
  using nlohmann::ordered_json;
  auto opt = [](const auto& x) { return x ? ordered_json(*x) : ordered_json(nullptr); };
  ordered_json j;
  j["truth_size"] = r.truth_size;
  j["correct"] = r.correct;
  j["recall"] = r.recall;
  j["hit_count"] = opt(r.hit_count);
  j["gain"] = opt(r.gain);
  j["distinct_compared"] = opt(r.distinct_compared);
  auto rows = ordered_json::array();
  for (const auto& it : r.per_iteration) {
    rows.push_back({{"iteration", it.iteration},
                    {"recall", it.recall},
                    {"hit_count", it.hit_count},
                    {"gain", it.gain}});
  }
  j["per_iteration"] = std::move(rows);
  out << j.dump(2) << '\n';
}

// --- Perturbation ----------------------------------------------------------

void PerturbationSpec::validate() const {
  for (const double p : {remove_edges, add_vertices, add_edges, attr_noise}) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("fractions must lie in [0, 1]");
  }
}

namespace {

std::size_t fraction_of(double p, std::size_t n) {
  return static_cast<std::size_t>(std::floor(p * static_cast<double>(n)));
}

template <class Rng>
std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::vector<std::string> edge_token_names(const AttributedGraph& g, EdgeId e) {
  std::vector<std::string> out;
  for (const auto t : g.edge_tokens(e)) out.push_back(g.edge_token_names().name(t));
  return out;
}

// Copies `g` vertex by vertex and edge by edge, with vertex tokens taken from
// `attrs` (token names per vertex).
AttributedGraph rebuild(const AttributedGraph& g,
                        const std::vector<std::vector<std::string>>& attrs) {
  GraphBuilder b(g.edge_schema());
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    const auto id = b.add_vertex(g.external_id(u));
    b.set_vertex_type(id, g.vertex_type_names().name(g.vertex_type(u)));
    for (const auto& t : attrs[u]) b.add_vertex_attr(id, t);
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edge_endpoints(e);
    b.add_edge(u, v, g.edge_type_names().name(g.edge_type(e)), edge_token_names(g, e),
               g.edge_numeric(e));
  }
  return std::move(b).build();
}

}  // namespace

Perturbed perturb(const AttributedGraph& g, const PerturbationSpec& spec) {
  spec.validate();
  const VertexId n = g.num_vertices();
  const std::size_t m = g.num_edges();

  auto permute_rng = named_stream(spec.seed, "perturb-permute");
  std::vector<VertexId> order(n);  // new id -> original id
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), permute_rng);
  std::vector<VertexId> relabel(n);
  for (VertexId i = 0; i < n; ++i) relabel[order[i]] = i;

  GraphBuilder b(g.edge_schema());
  auto copy_vertex = [&](VertexId source) {
    const auto id = b.add_vertex("n" + std::to_string(b.num_vertices()));
    b.set_vertex_type(id, g.vertex_type_names().name(g.vertex_type(source)));
    for (const auto t : g.vertex_attrs(source)) {
      b.add_vertex_attr(id, g.vertex_token_names().name(t));
    }
    return id;
  };
  for (VertexId i = 0; i < n; ++i) copy_vertex(order[i]);

  auto edge_rng = named_stream(spec.seed, "perturb-edges");
  std::vector<EdgeId> edges(m);
  std::iota(edges.begin(), edges.end(), 0);
  std::shuffle(edges.begin(), edges.end(), edge_rng);
  const auto removed = fraction_of(spec.remove_edges, m);
  if (spec.remove_edges == 1.0 && m > 0) spdlog::warn("perturbation removes every edge");
  std::vector<EdgeId> kept(edges.begin() + static_cast<std::ptrdiff_t>(removed), edges.end());
  std::sort(kept.begin(), kept.end());
  for (const auto e : kept) {
    const auto [u, v] = g.edge_endpoints(e);
    b.add_edge(relabel[u], relabel[v], g.edge_type_names().name(g.edge_type(e)),
               edge_token_names(g, e), g.edge_numeric(e));
  }

  // Added edges copy the type and attributes of a random original edge.
  auto add_rng = named_stream(spec.seed, "perturb-add");
  const std::vector<double> zeros(g.edge_schema().numeric_count(), 0.0);
  auto add_random_edge = [&](VertexId u, VertexId v) {
    if (m == 0) return b.add_edge(u, v, {}, {}, zeros);
    const auto e = static_cast<EdgeId>(uniform_index(add_rng, m));
    return b.add_edge(u, v, g.edge_type_names().name(g.edge_type(e)), edge_token_names(g, e),
                      g.edge_numeric(e));
  };

  std::size_t budget = fraction_of(spec.add_edges, m);
  const auto new_vertices = fraction_of(spec.add_vertices, n);
  const auto per_vertex = n == 0 ? std::size_t{0}
                                 : static_cast<std::size_t>(std::floor(
                                       2.0 * static_cast<double>(m) / static_cast<double>(n)));
  for (std::size_t i = 0; i < new_vertices && n > 0; ++i) {
    const auto id = copy_vertex(static_cast<VertexId>(uniform_index(add_rng, n)));
    std::size_t want = std::max<std::size_t>(1, per_vertex);
    if (spec.add_edges > 0.0) {
      want = std::max<std::size_t>(1, std::min(per_vertex, budget));
      budget -= std::min(want, budget);
    }
    want = std::min<std::size_t>(want, id);
    for (std::size_t made = 0, tries = 0; made < want && tries < 100 * want + 100; ++tries) {
      const auto w = static_cast<VertexId>(uniform_index(add_rng, id));
      if (!b.has_edge(id, w) && add_random_edge(id, w)) ++made;
    }
  }
  const VertexId total = b.num_vertices();
  const std::size_t capacity = static_cast<std::size_t>(total) * (total - 1) / 2;
  for (std::size_t tries = 0; budget > 0 && total > 1 && b.num_edges() < capacity &&
                              tries < 100 * fraction_of(spec.add_edges, m) + 100;
       ++tries) {
    const auto u = static_cast<VertexId>(uniform_index(add_rng, total));
    const auto v = static_cast<VertexId>(uniform_index(add_rng, total));
    if (u == v || b.has_edge(u, v)) continue;
    if (add_random_edge(u, v)) --budget;
  }
  if (budget > 0) spdlog::warn("could not place {} of the requested edges", budget);

  Perturbed out;
  out.graph = std::move(b).build();
  if (spec.attr_noise > 0.0) {
    out.graph = perturb_vertex_tokens(out.graph, spec.attr_noise, spec.seed);
  }
  out.truth.pairs.reserve(n);
  for (VertexId u = 0; u < n; ++u) out.truth.pairs.push_back({u, relabel[u]});
  return out;
}

ExternalSimilarity perturb_external(const ExternalSimilarity& table, double fraction,
                                    std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("fraction must lie in [0, 1]");
  }
  auto entries = table.entries();
  auto pick = named_stream(seed, "perturb-attrs");
  auto values = named_stream(seed, "perturb-attrs-values");
  std::shuffle(entries.begin(), entries.end(), pick);
  ExternalSimilarity out = table;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto count = fraction_of(fraction, entries.size());
  for (std::size_t i = 0; i < count; ++i) {
    out.set(entries[i].first.first, entries[i].first.second, 1.0 - unit(values));
  }
  return out;
}

AttributedGraph perturb_vertex_tokens(const AttributedGraph& g, double fraction,
                                      std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("fraction must lie in [0, 1]");
  }
  std::vector<std::vector<std::string>> attrs(g.num_vertices());
  std::vector<std::pair<VertexId, std::size_t>> slots;
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    for (const auto t : g.vertex_attrs(u)) {
      attrs[u].push_back(g.vertex_token_names().name(t));
      slots.push_back({u, attrs[u].size() - 1});
    }
  }
  const auto& pool = g.vertex_token_names();
  if (pool.size() > 0) {
    auto pick = named_stream(seed, "perturb-attrs");
    auto values = named_stream(seed, "perturb-attrs-values");
    std::shuffle(slots.begin(), slots.end(), pick);
    const auto count = fraction_of(fraction, slots.size());
    for (std::size_t i = 0; i < count; ++i) {
      const auto [u, k] = slots[i];
      attrs[u][k] = pool.name(static_cast<std::uint32_t>(uniform_index(values, pool.size())));
    }
  }
  return rebuild(g, attrs);
}

AttributedGraph remove_edges(const AttributedGraph& g, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("fraction must lie in [0, 1]");
  }
  const std::size_t m = g.num_edges();
  std::vector<EdgeId> edges(m);
  std::iota(edges.begin(), edges.end(), 0);
  auto rng = named_stream(seed, "remove-edges");
  std::shuffle(edges.begin(), edges.end(), rng);
  std::vector<char> dropped(m, 0);
  for (std::size_t i = 0; i < fraction_of(fraction, m); ++i) dropped[edges[i]] = 1;

  GraphBuilder b(g.edge_schema());
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    const auto id = b.add_vertex(g.external_id(u));
    b.set_vertex_type(id, g.vertex_type_names().name(g.vertex_type(u)));
    for (const auto t : g.vertex_attrs(u)) b.add_vertex_attr(id, g.vertex_token_names().name(t));
  }
  for (EdgeId e = 0; e < m; ++e) {
    if (dropped[e]) continue;
    const auto [u, v] = g.edge_endpoints(e);
    b.add_edge(u, v, g.edge_type_names().name(g.edge_type(e)), edge_token_names(g, e),
               g.edge_numeric(e));
  }
  return std::move(b).build();
}

// --- Synthetic scenarios ---------------------------------------------------

AttributedGraph erdos_renyi(const SyntheticSpec& spec) {
  if (spec.vertices == 0) throw std::invalid_argument("graph needs at least one vertex");
  if (spec.min_tokens > spec.max_tokens || spec.max_tokens > spec.token_pool) {
    throw std::invalid_argument("token counts do not fit the token pool");
  }
  const VertexId n = spec.vertices;
  auto rng = named_stream(spec.seed, "synthetic");
  GraphBuilder b;
  std::uniform_int_distribution<std::size_t> type_of(0, std::max<std::size_t>(1, spec.vertex_types) - 1);
  std::uniform_int_distribution<std::size_t> token_count(spec.min_tokens, spec.max_tokens);
  for (VertexId u = 0; u < n; ++u) {
    const auto id = b.add_vertex("v" + std::to_string(u));
    if (spec.vertex_types > 0) b.set_vertex_type(id, "t" + std::to_string(type_of(rng)));
    const auto want = spec.token_pool == 0 ? 0 : token_count(rng);
    std::unordered_set<std::size_t> tokens;
    while (tokens.size() < want) {
      const auto t = uniform_index(rng, spec.token_pool);
      if (tokens.insert(t).second) b.add_vertex_attr(id, "a" + std::to_string(t));
    }
  }

  std::vector<VertexId> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](VertexId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const std::size_t capacity = static_cast<std::size_t>(n) * (n - 1) / 2;
  const auto m = std::min<std::size_t>(
      capacity, static_cast<std::size_t>(std::llround(spec.average_degree * n / 2.0)));
  while (b.num_edges() < m) {
    const auto u = static_cast<VertexId>(uniform_index(rng, n));
    const auto v = static_cast<VertexId>(uniform_index(rng, n));
    if (u != v && b.add_edge(u, v)) parent[find(u)] = find(v);
  }

  // Bridge consecutive components so the graph is connected.
  std::vector<std::vector<VertexId>> components;
  std::unordered_map<VertexId, std::size_t> slot;
  for (VertexId u = 0; u < n; ++u) {
    const auto [it, fresh] = slot.emplace(find(u), components.size());
    if (fresh) components.emplace_back();
    components[it->second].push_back(u);
  }
  for (std::size_t c = 1; c < components.size(); ++c) {
    const auto& a = components[c - 1];
    const auto& z = components[c];
    const auto from = a[uniform_index(rng, a.size())];
    b.add_edge(from, z[uniform_index(rng, z.size())]);
  }
  return std::move(b).build();
}

AnchorMap sample_anchors(const GroundTruth& truth, std::size_t count, std::uint64_t seed) {
  auto rng = named_stream(seed, "anchors");
  std::vector<VertexPair> pairs = truth.pairs;
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(std::min(count, pairs.size()));
  std::sort(pairs.begin(), pairs.end());
  return {std::move(pairs), AnchorMap::Source::kUserProvided};
}

ExternalSimilarity make_prior_table(const GroundTruth& truth, VertexId second_count,
                                    std::size_t decoys, std::uint64_t seed) {
  auto rng = named_stream(seed, "prior");
  std::uniform_real_distribution<double> high(0.6, 1.0);
  std::uniform_real_distribution<double> low(0.05, 0.5);
  ExternalSimilarity table;
  for (const auto& [u, v] : truth.pairs) {
    table.set(u, v, high(rng));
    for (std::size_t d = 0; d < decoys && second_count > 1; ++d) {
      const auto w = static_cast<VertexId>(uniform_index(rng, second_count));
      if (w != v && table.value(u, w) == 0.0) table.set(u, w, low(rng));
    }
  }
  return table;
}

Scenario make_scenario(std::string name, const SyntheticSpec& graph,
                       const PerturbationSpec& noise, std::size_t anchor_count) {
  Scenario s;
  s.name = std::move(name);
  s.first = erdos_renyi(graph);
  auto perturbed = perturb(s.first, noise);
  s.second = std::move(perturbed.graph);
  s.truth = std::move(perturbed.truth);
  s.anchors = sample_anchors(s.truth, anchor_count, noise.seed);
  return s;
}

// --- Sweeps ----------------------------------------------------------------

std::vector<SweepCell> sweep(std::span<const Scenario> scenarios,
                             std::span<const std::size_t> bucket_sizes,
                             const AlignerConfig& base, const SimilarityConfig& similarity) {
  std::vector<SweepCell> cells;
  for (const auto& scenario : scenarios) {
    auto cfg = similarity;
    if (scenario.external) cfg.external = scenario.external;
    const SimilarityContext sim(scenario.first, scenario.second, cfg);
    for (const auto bucket : bucket_sizes) {
      auto config = base;
      config.bucket_capacity = bucket;
      config.record_scopes = true;
      const auto start = std::chrono::steady_clock::now();
      const auto result = align(sim, scenario.anchors, config);
      const auto seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      SweepCell cell;
      cell.scenario = scenario.name;
      cell.bucket_size = bucket;
      cell.eval = evaluate(result.mapping.pairs(), &result.scopes, scenario.truth.pairs,
                           scenario.first.num_vertices(), scenario.second.num_vertices());
      cell.iterations = result.report.iterations.size();
      cell.compared_total = result.report.compared_total;
      cell.seconds = seconds;
      spdlog::info("sweep {} B={}: recall={:.4f} hit={:.4f} gain={:.6f}", cell.scenario, bucket,
                   cell.eval.recall, *cell.eval.hit_count, *cell.eval.gain);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells) {
  out << "scenario,bucket_size,recall,hit_count,gain,iterations,seconds\n";
  for (const auto& c : cells) {
    out << c.scenario << ',' << c.bucket_size << ',' << c.eval.recall << ',';
    if (c.eval.hit_count) out << *c.eval.hit_count;
    out << ',';
    if (c.eval.gain) out << *c.eval.gain;
    out << ',' << c.iterations << ',' << c.seconds << '\n';
  }
}

}  // namespace gsana
