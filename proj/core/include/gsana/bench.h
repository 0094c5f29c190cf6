#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsana/aligner.h"
#include "gsana/graph.h"
#include "gsana/similarity.h"

namespace gsana {

// --- Evaluation ------------------------------------------------------------

struct EvalIteration {
  std::uint32_t iteration = 0;
  double recall = 0.0;     // of that iteration's mapping
  double hit_count = 0.0;  // cumulative up to that iteration
  double gain = 0.0;       // cumulative up to that iteration
};

struct EvalReport {
  std::size_t truth_size = 0;
  std::size_t correct = 0;
  double recall = 0.0;
  // Available only with a scope log.
  std::optional<double> hit_count;
  std::optional<double> gain;
  std::optional<std::uint64_t> distinct_compared;
  std::vector<EvalIteration> per_iteration;
};

// A ground-truth pair counts as a hit once the two vertices fell into the
// same comparison scope in some iteration, or were mapped to each other.
// Gain is the fraction of all |V1||V2| pairs that were never in a common
// scope. Dense ids throughout. Throws std::invalid_argument on empty truth.
EvalReport evaluate(std::span<const VertexPair> mapping, const ScopeLog* scopes,
                    std::span<const VertexPair> truth, VertexId first_count,
                    VertexId second_count);

// Same, on external ids. Without a scope log only recall is computed.
EvalReport evaluate_external(std::span<const MappingRow> mapping,
                             std::span<const std::pair<std::string, std::string>> truth,
                             const ScopeLog* scopes);

std::vector<std::pair<std::string, std::string>> read_external_pairs(
    std::istream& in, const std::string& name = "<pairs>");

void write_eval_report(std::ostream& out, const EvalReport& report);

// --- Perturbation ----------------------------------------------------------

struct PerturbationSpec {
  double remove_edges = 0.0;  // p_e
  double add_vertices = 0.0;  // p_v
  double add_edges = 0.0;     // p_a
  double attr_noise = 0.0;    // p_attr, applied to vertex tokens
  std::uint64_t seed = 0;

  void validate() const;
};

struct Perturbed {
  AttributedGraph graph;
  GroundTruth truth;  // (original vertex, its relabeled copy)
};

// Relabels vertices by a seeded permutation (new external ids "n<id>"),
// removes floor(p_e |E|) uniformly chosen edges, adds floor(p_v |V|) vertices
// and floor(p_a |E|) edges, then applies vertex token noise. Edge removals
// for a smaller p_e are a subset of those for a larger one under one seed.
Perturbed perturb(const AttributedGraph& g, const PerturbationSpec& spec);

// Rewrites floor(fraction * nnz) uniformly chosen entries to fresh values in
// (0, 1]. Nested in `fraction` under one seed.
ExternalSimilarity perturb_external(const ExternalSimilarity& table, double fraction,
                                    std::uint64_t seed);

// Replaces floor(fraction * total tokens) uniformly chosen vertex attribute
// tokens with tokens drawn from the graph's token pool.
AttributedGraph perturb_vertex_tokens(const AttributedGraph& g, double fraction,
                                      std::uint64_t seed);

// Drops floor(fraction * |E|) uniformly chosen edges, keeping ids and
// attributes. Nested in `fraction` under one seed; used to add independent
// structural noise to the first graph of a pair.
AttributedGraph remove_edges(const AttributedGraph& g, double fraction, std::uint64_t seed);

// --- Synthetic scenarios ---------------------------------------------------

struct SyntheticSpec {
  VertexId vertices = 1000;
  double average_degree = 8.0;
  std::size_t vertex_types = 64;
  std::size_t token_pool = 2000;
  std::size_t min_tokens = 3;
  std::size_t max_tokens = 6;
  std::uint64_t seed = 1;
};

// G(n, m) random graph with m = round(n * d / 2), patched connected by
// bridging edges between components; random types and token sets.
AttributedGraph erdos_renyi(const SyntheticSpec& spec);

struct Scenario {
  std::string name;
  AttributedGraph first;
  AttributedGraph second;
  GroundTruth truth;
  AnchorMap anchors;
  std::shared_ptr<const ExternalSimilarity> external;
};

// Random true pairs used as the given anchors.
AnchorMap sample_anchors(const GroundTruth& truth, std::size_t count, std::uint64_t seed);

// Prior table with the true pair at a high value and `decoys` random wrong
// pairs at lower values for every ground-truth vertex.
ExternalSimilarity make_prior_table(const GroundTruth& truth, VertexId second_count,
                                    std::size_t decoys, std::uint64_t seed);

Scenario make_scenario(std::string name, const SyntheticSpec& graph,
                       const PerturbationSpec& noise, std::size_t anchor_count);

// --- Sweeps ----------------------------------------------------------------

struct SweepCell {
  std::string scenario;
  std::size_t bucket_size = 0;
  EvalReport eval;
  std::size_t iterations = 0;
  std::uint64_t compared_total = 0;
  double seconds = 0.0;
};

std::vector<SweepCell> sweep(std::span<const Scenario> scenarios,
                             std::span<const std::size_t> bucket_sizes,
                             const AlignerConfig& base, const SimilarityConfig& similarity);

// CSV `scenario,bucket_size,recall,hit_count,gain,iterations,seconds`.
void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells);

}  // namespace gsana
