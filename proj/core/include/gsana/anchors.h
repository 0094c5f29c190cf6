#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "gsana/graph.h"

namespace gsana {

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

// Hop distances from `source` to every vertex of `g`; kUnreachable where no
// path exists.
std::vector<std::uint32_t> bfs_distances(const AttributedGraph& g, VertexId source);

// Cache of BFS rows keyed by (graph side, source vertex). A row is computed at
// most once for the lifetime of the table. Rows for distinct sources may be
// computed concurrently; reads are safe once ensure_rows has returned.
class DistanceTable {
 public:
  // Computes rows for the sources not cached yet and returns how many BFS runs
  // that took.
  std::size_t ensure_rows(Side side, const AttributedGraph& g,
                          std::span<const VertexId> sources, unsigned threads = 1);

  bool has_row(Side side, VertexId source) const;
  std::span<const std::uint32_t> row(Side side, VertexId source) const;
  std::uint32_t distance(Side side, VertexId source, VertexId target) const {
    return row(side, source)[target];
  }

  std::size_t row_count(Side side) const;
  std::size_t bfs_runs() const { return bfs_runs_; }

 private:
  std::array<std::unordered_map<VertexId, std::vector<std::uint32_t>>, 2> rows_;
  std::size_t bfs_runs_ = 0;
  mutable std::mutex mutex_;
};

inline constexpr double kNaturalLogBase = std::numbers::e;

double log_in_base(double x, double base);

// Target anchor count when bootstrapping: ceil(4 log(max(n1, n2))), at least 1.
std::size_t bootstrap_target_size(std::size_t n1, std::size_t n2,
                                  double log_base = kNaturalLogBase);

using PairScorer = std::function<double(VertexId, VertexId)>;

// Picks the 2|S| highest-degree vertices of each graph, scores every cross
// pair with `score` and keeps the best |S| mutually-best pairs (greedy in
// descending score). Pairs scoring 0 are never taken.
AnchorMap bootstrap_anchors(const AttributedGraph& g1, const AttributedGraph& g2,
                            const PairScorer& score, double log_base = kNaturalLogBase);

// Number of central anchors for an anchor set of the given size:
// ceil(log(|S|)), at least 1.
std::size_t central_anchor_limit(std::size_t anchor_count, double log_base = 2.0);

// High-degree anchors that are pairwise more than `threshold` hops apart.
// Anchors are scanned in ascending id order; all need graph-1 rows in `d`.
std::vector<VertexId> find_central_anchors(const AttributedGraph& g,
                                           std::span<const VertexId> anchors,
                                           const DistanceTable& d, std::uint32_t threshold,
                                           double log_base = 2.0);

struct VantageSelection {
  std::vector<VertexId> anchors;  // ascending id
  // Some central anchor received no assignee, so only one anchor per
  // non-empty central anchor was kept.
  bool degenerate = false;
};

// Assigns each non-central anchor to its nearest central anchor and keeps, for
// every central anchor, the `a` farthest assignees where `a` is the smallest
// assignment list size.
VantageSelection find_vantage_anchors(std::span<const VertexId> non_central,
                                      std::span<const VertexId> central,
                                      const DistanceTable& d);

struct VantagePairList {
  std::vector<std::array<VertexId, 2>> pairs;  // graph-1 ids

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

class InsufficientVantageAnchors : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pairs every vantage anchor with its farthest remaining partner, then orders
// the pairs so each first element is nearest to the previous pair's first
// element. Throws InsufficientVantageAnchors when no pair can be formed.
VantagePairList pair_and_order(std::span<const VertexId> vantage, const DistanceTable& d);

}  // namespace gsana
