#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsana/anchors.h"
#include "gsana/embedding.h"
#include "gsana/graph.h"
#include "gsana/similarity.h"

namespace gsana {

struct AlignerConfig {
  std::size_t bucket_capacity = 500;
  std::size_t top_k = 3;
  std::size_t max_iterations = 20;
  double convergence_ratio = 1.02;  // keep going while |mu| / |mu_prev| exceeds this
  std::size_t anchor_cap = 1000;
  std::uint32_t central_threshold = 1;
  bool scan_neighbors = true;
  double bootstrap_log_base = kNaturalLogBase;
  double central_log_base = 2.0;
  unsigned threads = 1;
  bool record_scopes = true;

  // Throws std::invalid_argument naming the first bad tunable.
  void validate() const;
};

// Injective partial map V1 -> V2 with the score and iteration of each pair.
// Pinned pairs (anchors) are never displaced.
class Mapping {
 public:
  struct Entry {
    VertexId target = kNoVertex;
    double score = 0.0;
    std::uint32_t iteration = 0;
    bool pinned = false;
  };

  Mapping() = default;
  Mapping(VertexId first_count, VertexId second_count);

  // Maps u to v, unmapping whatever u and v were paired with before.
  void assign(VertexId u, VertexId v, double score, std::uint32_t iteration,
              bool pinned = false);
  void unassign(VertexId u);

  VertexId image(VertexId u) const { return entries_[u].target; }
  VertexId preimage(VertexId v) const { return preimage_[v]; }
  const Entry& entry(VertexId u) const { return entries_[u]; }
  std::size_t size() const { return size_; }
  VertexId first_count() const { return static_cast<VertexId>(entries_.size()); }
  VertexId second_count() const { return static_cast<VertexId>(preimage_.size()); }
  // Mapped pairs ordered by u.
  std::vector<VertexPair> pairs() const;

 private:
  std::vector<Entry> entries_;
  std::vector<VertexId> preimage_;
  std::size_t size_ = 0;
};

struct Candidate {
  VertexId vertex = kNoVertex;
  double score = 0.0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Per graph-2 vertex, the k best graph-1 candidates: score descending, ties
// to the lower id.
class CandidateLists {
 public:
  CandidateLists() = default;
  CandidateLists(VertexId second_count, std::size_t k);

  void offer(VertexId v, VertexId u, double score);
  std::span<const Candidate> list(VertexId v) const {
    return {slots_.data() + v * k_, sizes_[v]};
  }
  std::size_t k() const { return k_; }
  VertexId second_count() const { return static_cast<VertexId>(sizes_.size()); }

 private:
  std::size_t k_ = 0;
  std::vector<Candidate> slots_;
  std::vector<std::uint32_t> sizes_;
};

// Which leaves each vertex could be compared against in one iteration.
struct IterationScope {
  std::uint32_t iteration = 0;
  std::vector<LeafId> leaf_of_first;
  std::vector<LeafId> leaf_of_second;
  // Per leaf: the leaf itself plus the leaves scanned with it, ascending.
  std::vector<std::vector<LeafId>> scopes;
  std::uint64_t compared = 0;
  std::vector<VertexPair> mapping;  // snapshot after matching
};

struct ScopeLog {
  std::vector<std::string> first_ids;   // external ids by dense graph-1 id
  std::vector<std::string> second_ids;  // external ids by dense graph-2 id
  std::vector<IterationScope> iterations;
};

void write_scope_log(std::ostream& out, const ScopeLog& log);
ScopeLog read_scope_log(std::istream& in, const std::string& name = "<scopes>");

struct CandidateScan {
  CandidateLists lists;
  // Sum over leaves of |B n V2| * |(B u scanned leaves) n V1|.
  std::uint64_t compared = 0;
  std::vector<std::vector<LeafId>> scopes;  // per leaf, as in IterationScope
};

// Scores every graph-2 vertex of a leaf against the graph-1 vertices of the
// leaf and, optionally, of its neighboring leaves, keeping the top k per
// vertex. Anchors (pinned on either side) are neither scored nor listed.
CandidateScan top_similars(const BucketTree& tree, const SimilarityContext& sim,
                           const AnchorIndex& anchors, std::size_t k, bool scan_neighbors,
                           unsigned threads = 1);

// Sweeps over unmatched graph-2 vertices, each popping its next candidate per
// sweep; u accepts v when unmapped or when v scores above u's current pair.
// Runs until a sweep pops nothing. Only positive scores are accepted.
void greedy_map(const CandidateLists& lists, Mapping& mapping, std::uint32_t iteration);

// Anchor set S and its growth schedule.
struct AlignmentState {
  std::vector<VertexPair> initial;
  std::vector<VertexPair> anchors;
  std::map<VertexPair, std::uint32_t> found_in;  // iteration each anchor pair was found
  std::size_t growth = 0;                        // a
  bool reset = false;                            // last grow_anchors hit the cap

  explicit AlignmentState(std::vector<VertexPair> initial_anchors = {});
};

// Resets to the initial anchors when a exceeds `cap`, then promotes up to a
// mapped non-anchor pairs with the highest scores (ties to the lower graph-1
// id) and doubles a. Returns the promoted pairs.
std::vector<VertexPair> grow_anchors(AlignmentState& state, const Mapping& mapping,
                                     std::size_t cap);

// Vantage pairs and positions for one anchor set, as built in one iteration.
struct AnchorEmbedding {
  std::size_t central_anchors = 0;
  std::size_t vantage_anchors = 0;
  bool degenerate = false;
  VantagePairList pairs;
  std::vector<VertexPosition> positions;  // graph-1 vertices, then graph-2
};

// Computes missing BFS rows for the anchors, selects vantage pairs and places
// every vertex. Throws InsufficientVantageAnchors when no pair can be formed.
AnchorEmbedding embed_anchors(const AttributedGraph& g1, const AttributedGraph& g2,
                              std::span<const VertexPair> anchors, DistanceTable& d,
                              const AlignerConfig& config);

struct IterationReport {
  std::uint32_t iteration = 0;
  std::size_t anchors = 0;
  std::size_t central_anchors = 0;
  std::size_t vantage_anchors = 0;
  std::size_t vantage_pairs = 0;
  bool degenerate_vantage = false;
  std::size_t unpositioned = 0;
  std::size_t leaves = 0;
  std::uint64_t compared = 0;
  double gain = 0.0;
  std::size_t mapping_size = 0;
  // Size had the previous iteration's non-conflicting pairs been carried over.
  std::size_t carried_mapping_size = 0;
  std::size_t new_anchors = 0;
  bool anchor_reset = false;
  std::size_t bfs_rows_first = 0;
  std::size_t bfs_rows_second = 0;
};

struct RunReport {
  AlignerConfig config;
  ComponentMask components;
  double close_epsilon = 1.0;
  bool external_similarity = false;
  std::size_t first_vertices = 0;
  std::size_t second_vertices = 0;
  std::size_t initial_anchors = 0;
  bool bootstrapped = false;
  bool bootstrap_fallback = false;
  std::vector<IterationReport> iterations;
  std::string stop_reason;  // "iterations", "converged" or "aborted"
  std::optional<std::string> abort_reason;
  // Distinct anchors embedded in some iteration; pairs promoted by the last
  // growth step are never embedded.
  std::size_t distinct_anchors_first = 0;
  std::size_t distinct_anchors_second = 0;
  std::size_t bfs_runs = 0;
  std::uint64_t compared_total = 0;
  std::size_t mapping_size = 0;
};

void write_run_report(std::ostream& out, const RunReport& report);

// Wall-clock seconds per phase; kept apart from the report so reports stay
// reproducible byte for byte.
using PhaseProfile = std::map<std::string, double>;
void write_profile(std::ostream& out, const PhaseProfile& profile);

struct AlignResult {
  Mapping mapping;
  RunReport report;
  ScopeLog scopes;
  PhaseProfile profile;

  bool aborted() const { return report.abort_reason.has_value(); }
};

// Runs the iterative aligner. Without `anchors` an initial set is
// bootstrapped from high-degree vertices. An abort (no usable vantage
// anchors) is reported in the result, with the mapping built so far.
AlignResult align(const SimilarityContext& sim, const std::optional<AnchorMap>& anchors,
                  const AlignerConfig& config = {});

// `ext_u TAB ext_v TAB score TAB iteration_found`, ordered by graph-1 id.
void write_mapping(std::ostream& out, const Mapping& mapping, const AttributedGraph& g1,
                   const AttributedGraph& g2);

struct MappingRow {
  std::string first;
  std::string second;
  double score = 0.0;
  std::uint32_t iteration = 0;
};
std::vector<MappingRow> read_mapping(std::istream& in, const std::string& name = "<mapping>");

}  // namespace gsana
