#include "gsana/aligner.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <spdlog/spdlog.h>
#include <sstream>
#include <stdexcept>

#include "gsana/parallel.h"
#include "gsana/text.h"

namespace gsana {

void AlignerConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(bucket_capacity > 0, "bucket size must be positive");
  require(top_k > 0, "top-k must be positive");
  require(convergence_ratio > 1.0, "convergence ratio must exceed 1");
  require(anchor_cap > 0, "anchor cap must be positive");
  require(bootstrap_log_base > 1.0 && central_log_base > 1.0, "log bases must exceed 1");
  require(threads > 0, "thread count must be positive");
}

// --- Mapping ---------------------------------------------------------------

Mapping::Mapping(VertexId first_count, VertexId second_count)
    : entries_(first_count), preimage_(second_count, kNoVertex) {}

void Mapping::assign(VertexId u, VertexId v, double score, std::uint32_t iteration,
                     bool pinned) {
  if (entries_[u].pinned && entries_[u].target != v) {
    throw std::logic_error("cannot displace a pinned pair");
  }
  const auto holder = preimage_[v];
  if (holder != kNoVertex && holder != u) {
    if (entries_[holder].pinned) throw std::logic_error("cannot displace a pinned pair");
    unassign(holder);
  }
  if (entries_[u].target != kNoVertex && entries_[u].target != v) unassign(u);
  if (entries_[u].target == kNoVertex) ++size_;
  entries_[u] = {v, score, iteration, pinned};
  preimage_[v] = u;
}

void Mapping::unassign(VertexId u) {
  auto& e = entries_[u];
  if (e.target == kNoVertex) return;
  preimage_[e.target] = kNoVertex;
  e = {};
  --size_;
}

std::vector<VertexPair> Mapping::pairs() const {
  std::vector<VertexPair> out;
  out.reserve(size_);
  for (VertexId u = 0; u < entries_.size(); ++u) {
    if (entries_[u].target != kNoVertex) out.push_back({u, entries_[u].target});
  }
  return out;
}

// --- Candidates ------------------------------------------------------------

CandidateLists::CandidateLists(VertexId second_count, std::size_t k)
    : k_(k), slots_(static_cast<std::size_t>(second_count) * k), sizes_(second_count, 0) {}

void CandidateLists::offer(VertexId v, VertexId u, double score) {
  Candidate* list = slots_.data() + static_cast<std::size_t>(v) * k_;
  auto& size = sizes_[v];
  std::size_t pos = size;
  while (pos > 0 && (score > list[pos - 1].score ||
                     (score == list[pos - 1].score && u < list[pos - 1].vertex))) {
    --pos;
  }
  if (pos >= k_) return;
  const std::size_t last = std::min<std::size_t>(size, k_ - 1);
  for (std::size_t i = last; i > pos; --i) list[i] = list[i - 1];
  list[pos] = {u, score};
  if (size < k_) ++size;
}

CandidateScan top_similars(const BucketTree& tree, const SimilarityContext& sim,
                           const AnchorIndex& anchors, std::size_t k, bool scan_neighbors,
                           unsigned threads) {
  CandidateScan scan;
  scan.lists = CandidateLists(sim.second().num_vertices(), k);
  scan.scopes.resize(tree.leaf_count());
  std::vector<std::uint64_t> compared(tree.leaf_count(), 0);

  parallel_for(tree.leaf_count(), threads, [&](std::size_t i) {
    const auto id = static_cast<LeafId>(i);
    auto& scope = scan.scopes[i];
    scope.push_back(id);
    if (scan_neighbors && !tree.leaf(id).overflow) {
      const auto near = tree.neighbor_buckets(id);
      scope.insert(scope.end(), near.begin(), near.end());
    }
    std::sort(scope.begin(), scope.end());

    std::size_t first_total = 0;
    std::vector<VertexId> firsts;
    for (const auto l : scope) {
      for (const auto& e : tree.entries(l)) {
        if (e.side != Side::kFirst) continue;
        ++first_total;
        if (!anchors.is_first(e.vertex)) firsts.push_back(e.vertex);
      }
    }
    std::uint64_t seconds = 0;
    for (const auto& e : tree.entries(id)) {
      if (e.side != Side::kSecond) continue;
      ++seconds;
      if (anchors.is_second(e.vertex)) continue;
      for (const auto u : firsts) {
        scan.lists.offer(e.vertex, u, sim.total(u, e.vertex, &anchors));
      }
    }
    compared[i] = seconds * first_total;
  });

  for (const auto c : compared) scan.compared += c;
  return scan;
}

void greedy_map(const CandidateLists& lists, Mapping& mapping, std::uint32_t iteration) {
  std::vector<std::size_t> cursor(lists.second_count(), 0);
  bool popped = true;
  while (popped) {
    popped = false;
    for (VertexId v = 0; v < lists.second_count(); ++v) {
      if (mapping.preimage(v) != kNoVertex) continue;
      const auto list = lists.list(v);
      if (cursor[v] >= list.size()) continue;
      const auto [u, score] = list[cursor[v]++];
      popped = true;
      if (score <= 0.0) continue;
      const auto& current = mapping.entry(u);
      if (current.pinned) continue;
      if (current.target == kNoVertex || score > current.score) {
        mapping.assign(u, v, score, iteration);
      }
    }
  }
}

// --- Anchor growth ---------------------------------------------------------

AlignmentState::AlignmentState(std::vector<VertexPair> initial_anchors)
    : initial(std::move(initial_anchors)), anchors(initial), growth(initial.size()) {
  for (const auto& p : initial) found_in.emplace(p, 0);
}

std::vector<VertexPair> grow_anchors(AlignmentState& state, const Mapping& mapping,
                                     std::size_t cap) {
  state.reset = false;
  if (state.growth > cap) {
    state.anchors = state.initial;
    state.growth = state.initial.size();
    state.reset = true;
    std::erase_if(state.found_in, [&](const auto& kv) {
      return std::find(state.initial.begin(), state.initial.end(), kv.first) ==
             state.initial.end();
    });
  }

  std::vector<char> first_anchor(mapping.first_count(), 0);
  std::vector<char> second_anchor(mapping.second_count(), 0);
  for (const auto& [u, v] : state.anchors) {
    first_anchor[u] = 1;
    second_anchor[v] = 1;
  }
  std::vector<VertexId> eligible;
  for (VertexId u = 0; u < mapping.first_count(); ++u) {
    const auto v = mapping.image(u);
    if (v != kNoVertex && !first_anchor[u] && !second_anchor[v]) eligible.push_back(u);
  }
  const auto take = std::min(state.growth, eligible.size());
  std::partial_sort(eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(take),
                    eligible.end(), [&](VertexId a, VertexId b) {
                      const double sa = mapping.entry(a).score;
                      const double sb = mapping.entry(b).score;
                      if (sa != sb) return sa > sb;
                      return a < b;
                    });
  std::vector<VertexPair> added;
  added.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    const VertexPair p{eligible[i], mapping.image(eligible[i])};
    added.push_back(p);
    state.anchors.push_back(p);
    state.found_in.emplace(p, mapping.entry(p.first).iteration);
  }
  state.growth *= 2;
  return added;
}

// --- Driver ----------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

class PhaseTimer {
 public:
  PhaseTimer(PhaseProfile& profile, const char* phase)
      : profile_(profile), phase_(phase), start_(Clock::now()) {}
  ~PhaseTimer() {
    profile_[phase_] += std::chrono::duration<double>(Clock::now() - start_).count();
  }
  PhaseTimer(const PhaseTimer&) = delete;
  PhaseTimer& operator=(const PhaseTimer&) = delete;

 private:
  PhaseProfile& profile_;
  const char* phase_;
  Clock::time_point start_;
};

Mapping pinned_mapping(const AttributedGraph& g1, const AttributedGraph& g2,
                       const AlignmentState& state) {
  Mapping mu(g1.num_vertices(), g2.num_vertices());
  for (const auto& p : state.anchors) {
    mu.assign(p.first, p.second, 1.0, state.found_in.at(p), true);
  }
  return mu;
}

// Anchors of `extra` whose endpoints are both free in `anchors`.
std::vector<VertexPair> non_conflicting(std::span<const VertexPair> anchors,
                                        std::span<const VertexPair> extra) {
  std::set<VertexId> left;
  std::set<VertexId> right;
  for (const auto& p : anchors) {
    left.insert(p.first);
    right.insert(p.second);
  }
  std::vector<VertexPair> out;
  for (const auto& p : extra) {
    if (left.contains(p.first) || right.contains(p.second)) continue;
    left.insert(p.first);
    right.insert(p.second);
    out.push_back(p);
  }
  return out;
}

std::vector<VertexId> anchor_side(std::span<const VertexPair> anchors, Side side) {
  std::vector<VertexId> out;
  out.reserve(anchors.size());
  for (const auto& p : anchors) out.push_back(side == Side::kFirst ? p.first : p.second);
  return out;
}

void ensure_anchor_rows(const AttributedGraph& g1, const AttributedGraph& g2,
                        std::span<const VertexPair> anchors, DistanceTable& d,
                        unsigned threads) {
  d.ensure_rows(Side::kFirst, g1, anchor_side(anchors, Side::kFirst), threads);
  d.ensure_rows(Side::kSecond, g2, anchor_side(anchors, Side::kSecond), threads);
}

}  // namespace

AnchorEmbedding embed_anchors(const AttributedGraph& g1, const AttributedGraph& g2,
                              std::span<const VertexPair> anchors, DistanceTable& d,
                              const AlignerConfig& config) {
  ensure_anchor_rows(g1, g2, anchors, d, config.threads);
  auto firsts = anchor_side(anchors, Side::kFirst);
  std::sort(firsts.begin(), firsts.end());

  AnchorEmbedding out;
  auto central =
      find_central_anchors(g1, firsts, d, config.central_threshold, config.central_log_base);
  out.central_anchors = central.size();
  std::sort(central.begin(), central.end());
  std::vector<VertexId> rest;
  std::set_difference(firsts.begin(), firsts.end(), central.begin(), central.end(),
                      std::back_inserter(rest));
  const auto vantage = find_vantage_anchors(rest, central, d);
  out.vantage_anchors = vantage.anchors.size();
  out.degenerate = vantage.degenerate;
  out.pairs = pair_and_order(vantage.anchors, d);

  std::vector<VertexId> counterpart(g1.num_vertices(), kNoVertex);
  for (const auto& [u, v] : anchors) counterpart[u] = v;
  const auto rows1 = resolve_pair_rows(Side::kFirst, out.pairs, counterpart, d);
  const auto rows2 = resolve_pair_rows(Side::kSecond, out.pairs, counterpart, d);
  const UnitCirclePlacement placement(out.pairs.size());
  out.positions =
      compute_positions(Side::kFirst, g1.num_vertices(), rows1, placement, config.threads);
  auto second =
      compute_positions(Side::kSecond, g2.num_vertices(), rows2, placement, config.threads);
  normalize_positions(out.positions, second);
  out.positions.insert(out.positions.end(), second.begin(), second.end());
  return out;
}

AlignResult align(const SimilarityContext& sim, const std::optional<AnchorMap>& anchors,
                  const AlignerConfig& config) {
  config.validate();
  const auto& g1 = sim.first();
  const auto& g2 = sim.second();
  AlignResult result;
  auto& report = result.report;
  auto& profile = result.profile;
  report.config = config;
  report.components = sim.components();
  report.close_epsilon = sim.config().close_epsilon;
  report.external_similarity = sim.config().external != nullptr;
  report.first_vertices = g1.num_vertices();
  report.second_vertices = g2.num_vertices();
  if (config.record_scopes) {
    for (VertexId u = 0; u < g1.num_vertices(); ++u) {
      result.scopes.first_ids.push_back(g1.external_id(u));
    }
    for (VertexId v = 0; v < g2.num_vertices(); ++v) {
      result.scopes.second_ids.push_back(g2.external_id(v));
    }
  }

  auto scorer = [&](VertexId u, VertexId v) { return sim.total(u, v, nullptr); };
  std::optional<AnchorMap> bootstrapped;
  auto bootstrap = [&]() -> const AnchorMap& {
    if (!bootstrapped) {
      PhaseTimer timer(profile, "bootstrap");
      bootstrapped = bootstrap_anchors(g1, g2, scorer, config.bootstrap_log_base);
    }
    return *bootstrapped;
  };

  std::vector<VertexPair> initial;
  if (anchors && !anchors->empty()) {
    check_injective(anchors->pairs);
    initial = anchors->pairs;
  } else {
    initial = bootstrap().pairs;
    report.bootstrapped = true;
  }
  report.initial_anchors = initial.size();

  AlignmentState state(initial);
  DistanceTable d;
  Mapping mu = pinned_mapping(g1, g2, state);
  std::set<VertexId> held_first;
  std::set<VertexId> held_second;
  auto note_held = [&] {
    for (const auto& p : state.anchors) {
      held_first.insert(p.first);
      held_second.insert(p.second);
    }
  };

  auto finish = [&](std::string stop) {
    report.stop_reason = std::move(stop);
    report.distinct_anchors_first = held_first.size();
    report.distinct_anchors_second = held_second.size();
    report.bfs_runs = d.bfs_runs();
    report.mapping_size = mu.size();
    result.mapping = std::move(mu);
    return std::move(result);
  };

  if (initial.empty()) {
    report.abort_reason = "no initial anchors could be found";
    spdlog::error("{}", *report.abort_reason);
    return finish("aborted");
  }

  std::size_t previous_size = 0;
  const double total_pairs =
      static_cast<double>(g1.num_vertices()) * static_cast<double>(g2.num_vertices());
  std::string stop = "iterations";
  for (std::uint32_t iteration = 1; iteration <= config.max_iterations; ++iteration) {
    if (previous_size > 0 && static_cast<double>(mu.size()) /
                                     static_cast<double>(previous_size) <=
                                 config.convergence_ratio) {
      stop = "converged";
      break;
    }
    previous_size = mu.size();
    IterationReport it;
    it.iteration = iteration;

    AnchorEmbedding embedding;
    for (bool retried = false;;) {
      {
        PhaseTimer timer(profile, "bfs");
        ensure_anchor_rows(g1, g2, state.anchors, d, config.threads);
      }
      note_held();
      try {
        PhaseTimer timer(profile, "embedding");
        embedding = embed_anchors(g1, g2, state.anchors, d, config);
        break;
      } catch (const InsufficientVantageAnchors& e) {
        if (retried || report.bootstrap_fallback) {
          report.abort_reason = std::string("vantage selection failed: ") + e.what();
          spdlog::error("iteration {}: {}", iteration, *report.abort_reason);
          return finish("aborted");
        }
        retried = true;
        report.bootstrap_fallback = true;
        const auto extra = non_conflicting(state.anchors, bootstrap().pairs);
        spdlog::warn("iteration {}: {}; merging {} bootstrapped anchors", iteration, e.what(),
                     extra.size());
        for (const auto& p : extra) {
          state.initial.push_back(p);
          state.anchors.push_back(p);
          state.found_in.emplace(p, 0);
          mu.assign(p.first, p.second, 1.0, 0, true);
        }
      }
    }
    if (embedding.degenerate) {
      spdlog::warn("iteration {}: a central anchor has no assignees; degenerate vantage set",
                   iteration);
    }
    it.anchors = state.anchors.size();
    it.central_anchors = embedding.central_anchors;
    it.vantage_anchors = embedding.vantage_anchors;
    it.vantage_pairs = embedding.pairs.size();
    it.degenerate_vantage = embedding.degenerate;
    it.unpositioned = static_cast<std::size_t>(
        std::count_if(embedding.positions.begin(), embedding.positions.end(),
                      [](const VertexPosition& p) { return !p.positioned(); }));

    const AnchorIndex index(g1, g2, state.anchors);
    BucketTree tree;
    {
      PhaseTimer timer(profile, "quadtree");
      tree = BucketTree::build(embedding.positions, config.bucket_capacity);
    }
    it.leaves = tree.leaf_count();

    CandidateScan scan;
    {
      PhaseTimer timer(profile, "candidates");
      scan = top_similars(tree, sim, index, config.top_k, config.scan_neighbors, config.threads);
    }
    it.compared = scan.compared;
    it.gain = total_pairs > 0 ? 1.0 - static_cast<double>(scan.compared) / total_pairs : 1.0;
    report.compared_total += scan.compared;

    Mapping next = pinned_mapping(g1, g2, state);
    {
      PhaseTimer timer(profile, "matching");
      greedy_map(scan.lists, next, iteration);
    }
    it.mapping_size = next.size();
    it.carried_mapping_size = next.size();
    for (const auto& [u, v] : mu.pairs()) {
      if (next.image(u) == kNoVertex && next.preimage(v) == kNoVertex) ++it.carried_mapping_size;
    }
    mu = std::move(next);

    if (config.record_scopes) {
      IterationScope scope;
      scope.iteration = iteration;
      scope.leaf_of_first.assign(g1.num_vertices(), 0);
      scope.leaf_of_second.assign(g2.num_vertices(), 0);
      for (LeafId l = 0; l < tree.leaf_count(); ++l) {
        for (const auto& e : tree.entries(l)) {
          (e.side == Side::kFirst ? scope.leaf_of_first : scope.leaf_of_second)[e.vertex] = l;
        }
      }
      scope.scopes = std::move(scan.scopes);
      scope.compared = scan.compared;
      scope.mapping = mu.pairs();
      result.scopes.iterations.push_back(std::move(scope));
    }

    {
      PhaseTimer timer(profile, "growth");
      it.new_anchors = grow_anchors(state, mu, config.anchor_cap).size();
      it.anchor_reset = state.reset;
    }
    it.bfs_rows_first = d.row_count(Side::kFirst);
    it.bfs_rows_second = d.row_count(Side::kSecond);
    spdlog::info("iteration {}: anchors={} pairs={} leaves={} compared={} mapped={}", iteration,
                 it.anchors, it.vantage_pairs, it.leaves, it.compared, it.mapping_size);
    report.iterations.push_back(it);
  }
  return finish(stop);
}

// --- Output ----------------------------------------------------------------

void write_mapping(std::ostream& out, const Mapping& mapping, const AttributedGraph& g1,
                   const AttributedGraph& g2) {
  const auto precision = out.precision(17);
  for (const auto& [u, v] : mapping.pairs()) {
    const auto& e = mapping.entry(u);
    out << g1.external_id(u) << '\t' << g2.external_id(v) << '\t' << e.score << '\t'
        << e.iteration << '\n';
  }
  out.precision(precision);
}

std::vector<MappingRow> read_mapping(std::istream& in, const std::string& name) {
  std::vector<MappingRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!text::is_content_line(line)) continue;
    const auto f = text::split_fields(line);
    if (f.size() != 2 && f.size() != 4) {
      throw InputError(name, line_no, "expected 'ext_u TAB ext_v [TAB score TAB iteration]'");
    }
    MappingRow row{std::string(f[0]), std::string(f[1]), 0.0, 0};
    if (f.size() == 4) {
      try {
        row.score = text::parse_double(f[2]);
        row.iteration = static_cast<std::uint32_t>(text::parse_double(f[3]));
      } catch (const std::invalid_argument&) {
        throw InputError(name, line_no, "score or iteration is not a number");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_run_report(std::ostream& out, const RunReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  const auto& c = r.config;
  j["config"] = {
      {"bucket_size", c.bucket_capacity},
      {"top_k", c.top_k},
      {"max_iterations", c.max_iterations},
      {"convergence_ratio", c.convergence_ratio},
      {"anchor_cap", c.anchor_cap},
      {"central_threshold", c.central_threshold},
      {"scan_neighbors", c.scan_neighbors},
      {"bootstrap_log_base", c.bootstrap_log_base},
      {"central_log_base", c.central_log_base},
      {"close_epsilon", r.close_epsilon},
      {"external_similarity", r.external_similarity},
      {"components",
       {{"neighbor_vertex_types", r.components.neighbor_vertex_types},
        {"neighbor_edge_types", r.components.neighbor_edge_types},
        {"vertex_attrs", r.components.vertex_attrs},
        {"edge_attrs", r.components.edge_attrs}}},
  };
  j["graphs"] = {{"first_vertices", r.first_vertices}, {"second_vertices", r.second_vertices}};
  j["initial_anchors"] = r.initial_anchors;
  j["bootstrapped"] = r.bootstrapped;
  j["bootstrap_fallback"] = r.bootstrap_fallback;
  auto iterations = ordered_json::array();
  for (const auto& it : r.iterations) {
    iterations.push_back({
        {"iteration", it.iteration},
        {"anchors", it.anchors},
        {"central_anchors", it.central_anchors},
        {"vantage_anchors", it.vantage_anchors},
        {"vantage_pairs", it.vantage_pairs},
        {"degenerate_vantage", it.degenerate_vantage},
        {"unpositioned", it.unpositioned},
        {"leaves", it.leaves},
        {"compared", it.compared},
        {"gain", it.gain},
        {"mapping_size", it.mapping_size},
        {"carried_mapping_size", it.carried_mapping_size},
        {"new_anchors", it.new_anchors},
        {"anchor_reset", it.anchor_reset},
        {"bfs_rows_first", it.bfs_rows_first},
        {"bfs_rows_second", it.bfs_rows_second},
    });
  }
  j["iterations"] = std::move(iterations);
  j["iterations_run"] = r.iterations.size();
  j["stop_reason"] = r.stop_reason;
  j["abort_reason"] = r.abort_reason ? ordered_json(*r.abort_reason) : ordered_json(nullptr);
  j["distinct_anchors_first"] = r.distinct_anchors_first;
  j["distinct_anchors_second"] = r.distinct_anchors_second;
  j["bfs_runs"] = r.bfs_runs;
  j["compared_total"] = r.compared_total;
  j["mapping_size"] = r.mapping_size;
  out << j.dump(2) << '\n';
}

void write_profile(std::ostream& out, const PhaseProfile& profile) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [phase, seconds] : profile) j[phase] = seconds;
  out << j.dump(2) << '\n';
}

// --- Scope log -------------------------------------------------------------
//
//   #gsana-scopes 1
//   N <n1> <n2> <iterations>
//   V1 <ext>            one per graph-1 vertex, dense id order
//   V2 <ext>
//   I <iteration> <leaves> <compared>
//   S <leaf> <scope leaf> ...
//   A <leaf of u=0> <leaf of u=1> ...
//   B <leaf of v=0> ...
//   M <u>:<v> ...       mapping snapshot, dense ids

void write_scope_log(std::ostream& out, const ScopeLog& log) {
  out << "#gsana-scopes 1\n";
  out << "N\t" << log.first_ids.size() << '\t' << log.second_ids.size() << '\t'
      << log.iterations.size() << '\n';
  for (const auto& id : log.first_ids) out << "V1\t" << id << '\n';
  for (const auto& id : log.second_ids) out << "V2\t" << id << '\n';
  auto write_list = [&](char tag, const auto& values) {
    out << tag;
    for (const auto x : values) out << ' ' << x;
    out << '\n';
  };
  for (const auto& it : log.iterations) {
    out << "I\t" << it.iteration << '\t' << it.scopes.size() << '\t' << it.compared << '\n';
    for (std::size_t l = 0; l < it.scopes.size(); ++l) {
      out << "S\t" << l << '\t';
      for (std::size_t i = 0; i < it.scopes[l].size(); ++i) {
        out << (i ? " " : "") << it.scopes[l][i];
      }
      out << '\n';
    }
    write_list('A', it.leaf_of_first);
    write_list('B', it.leaf_of_second);
    out << 'M';
    for (const auto& [u, v] : it.mapping) out << ' ' << u << ':' << v;
    out << '\n';
  }
}

namespace {

std::uint64_t parse_count(std::string_view s, const std::string& name, std::size_t line) {
  std::uint64_t value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw InputError(name, line, "expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return value;
}

std::vector<std::string_view> space_split(std::string_view s) {
  std::vector<std::string_view> out;
  for (const auto part : text::split(s, ' ')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

}  // namespace

ScopeLog read_scope_log(std::istream& in, const std::string& name) {
  ScopeLog log;
  std::string line;
  std::size_t line_no = 0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t expected = 0;
  bool header = false;
  auto fail = [&](const std::string& what) { throw InputError(name, line_no, what); };
  auto check_leaf = [&](std::uint64_t leaf) {
    if (log.iterations.empty() || leaf >= log.iterations.back().scopes.size()) {
      fail("leaf id out of range");
    }
    return static_cast<LeafId>(leaf);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.starts_with("#gsana-scopes")) {
      if (text::trim(std::string_view(line).substr(13)) != "1") fail("unsupported scope log version");
      header = true;
      continue;
    }
    if (line.front() == '#') continue;
    if (!header) fail("missing '#gsana-scopes' header");
    const auto tab = line.find_first_of("\t ");
    const std::string_view tag = std::string_view(line).substr(0, tab);
    const std::string_view rest =
        tab == std::string::npos ? std::string_view{} : std::string_view(line).substr(tab + 1);
    if (tag == "N") {
      const auto f = text::split_fields(rest);
      if (f.size() != 3) fail("expected 'N n1 n2 iterations'");
      n1 = parse_count(f[0], name, line_no);
      n2 = parse_count(f[1], name, line_no);
      expected = parse_count(f[2], name, line_no);
    } else if (tag == "V1") {
      log.first_ids.emplace_back(rest);
    } else if (tag == "V2") {
      log.second_ids.emplace_back(rest);
    } else if (tag == "I") {
      const auto f = text::split_fields(rest);
      if (f.size() != 3) fail("expected 'I iteration leaves compared'");
      IterationScope it;
      it.iteration = static_cast<std::uint32_t>(parse_count(f[0], name, line_no));
      it.scopes.resize(parse_count(f[1], name, line_no));
      it.compared = parse_count(f[2], name, line_no);
      log.iterations.push_back(std::move(it));
    } else if (tag == "S") {
      if (log.iterations.empty()) fail("scope line before any iteration");
      const auto f = text::split(rest, '\t');
      if (f.empty() || f.size() > 2) fail("expected 'S leaf scope...'");
      auto& scope = log.iterations.back().scopes[check_leaf(parse_count(f[0], name, line_no))];
      if (f.size() == 2) {
        for (const auto x : space_split(f[1])) {
          scope.push_back(check_leaf(parse_count(x, name, line_no)));
        }
      }
    } else if (tag == "A" || tag == "B") {
      if (log.iterations.empty()) fail("leaf line before any iteration");
      auto& target = tag == "A" ? log.iterations.back().leaf_of_first
                                : log.iterations.back().leaf_of_second;
      for (const auto x : space_split(rest)) {
        target.push_back(check_leaf(parse_count(x, name, line_no)));
      }
      if (target.size() != (tag == "A" ? n1 : n2)) fail("leaf list length mismatch");
    } else if (tag == "M") {
      if (log.iterations.empty()) fail("mapping line before any iteration");
      for (const auto x : space_split(rest)) {
        const auto colon = x.find(':');
        if (colon == std::string_view::npos) fail("expected 'u:v' mapping entries");
        const auto u = parse_count(x.substr(0, colon), name, line_no);
        const auto v = parse_count(x.substr(colon + 1), name, line_no);
        if (u >= n1 || v >= n2) fail("mapping entry out of range");
        log.iterations.back().mapping.push_back(
            {static_cast<VertexId>(u), static_cast<VertexId>(v)});
      }
    } else {
      fail("unknown record '" + std::string(tag) + "'");
    }
  }
  if (!header) throw InputError(name, 0, "missing '#gsana-scopes' header");
  if (log.first_ids.size() != n1 || log.second_ids.size() != n2 ||
      log.iterations.size() != expected) {
    throw InputError(name, 0, "scope log is truncated");
  }
  return log;
}

}  // namespace gsana
