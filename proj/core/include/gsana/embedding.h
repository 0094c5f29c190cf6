#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gsana/anchors.h"
#include "gsana/types.h"

namespace gsana {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

Point rotate(Point p, double angle);

// Vantage pair i sits at angle i * step on the unit circle, step = pi / pairs.
// Pair 0 occupies (1, 0) and (-1, 0).
class UnitCirclePlacement {
 public:
  explicit UnitCirclePlacement(std::size_t pair_count);

  std::size_t pair_count() const { return pair_count_; }
  double step() const { return step_; }
  double angle(std::size_t pair) const { return static_cast<double>(pair) * step_; }
  std::array<Point, 2> endpoints(std::size_t pair) const;

 private:
  std::size_t pair_count_;
  double step_;
};

// Distance rows of one vantage pair as seen from one graph.
struct PairRows {
  std::span<const std::uint32_t> to_first;
  std::span<const std::uint32_t> to_second;
  std::uint32_t between = kUnreachable;
};

// Resolves the rows used to position vertices of `side`. Graph-2 vertices use
// the rows of the anchors' counterparts, looked up in `counterpart` (indexed
// by graph-1 id).
std::vector<PairRows> resolve_pair_rows(Side side, const VantagePairList& pairs,
                                        std::span<const VertexId> counterpart,
                                        const DistanceTable& d);

// Position of a vertex relative to a single vantage pair laid out on (1, 0) -
// (-1, 0), before rotation. Distances are rescaled so the pair is 2 apart.
// Returns nullopt if a distance is unreachable or the pair collapses.
std::optional<Point> triangle_point(std::uint32_t to_first, std::uint32_t to_second,
                                    std::uint32_t between);

struct VertexPosition {
  Side side = Side::kFirst;
  VertexId vertex = kNoVertex;
  Point point;
  std::uint32_t valid_pairs = 0;

  bool positioned() const { return valid_pairs > 0; }
};

// Centroid of the rotated per-pair points of u. Unusable pairs are skipped;
// with none left the result is unpositioned (valid_pairs == 0).
VertexPosition compute_position(Side side, VertexId u, std::span<const PairRows> rows,
                                const UnitCirclePlacement& placement);

std::vector<VertexPosition> compute_positions(Side side, VertexId vertex_count,
                                              std::span<const PairRows> rows,
                                              const UnitCirclePlacement& placement,
                                              unsigned threads = 1);

// Divides every positioned point by max(1, largest |coordinate|) so all
// positions fall inside [-1, 1]^2. Returns the divisor.
double normalize_positions(std::span<VertexPosition> first,
                           std::span<VertexPosition> second);

// Closed axis-aligned square [min_x, min_x + size] x [min_y, min_y + size].
struct Region {
  double min_x = -1.0;
  double min_y = -1.0;
  double size = 2.0;

  double max_x() const { return min_x + size; }
  double max_y() const { return min_y + size; }
  bool touches(const Region& other) const;
  bool contains(Point p) const;

  friend bool operator==(const Region&, const Region&) = default;
};

struct BucketEntry {
  Side side = Side::kFirst;
  VertexId vertex = kNoVertex;
  Point point;
};

using LeafId = std::uint32_t;

// Point-region quadtree over [-1, 1]^2 whose leaves (buckets) hold at most
// `capacity` entries of both graphs. A leaf is not split further when all its
// points coincide or it reaches kMaxDepth. Unpositioned vertices go to a
// separate overflow leaf that has no spatial neighbors.
class BucketTree {
 public:
  // Depth at which every quadrant boundary is still exact in binary64.
  static constexpr std::uint32_t kMaxDepth = 50;

  struct Leaf {
    Region region;
    std::uint32_t depth = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
    bool overflow = false;

    std::size_t size() const { return end - begin; }
  };

  struct Node {
    Region region;
    std::int64_t first_child = -1;  // four consecutive nodes: SW, SE, NW, NE
    std::int64_t leaf = -1;

    bool is_leaf() const { return first_child < 0; }
  };

  static BucketTree build(std::span<const VertexPosition> positions, std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t leaf_count() const { return leaves_.size(); }
  const Leaf& leaf(LeafId id) const { return leaves_[id]; }
  std::span<const BucketEntry> entries(LeafId id) const;
  std::optional<LeafId> overflow_leaf() const { return overflow_; }
  std::span<const Node> nodes() const { return nodes_; }
  std::size_t entry_count() const { return entries_.size(); }

  // Leaves whose closed region shares at least one point with the leaf's,
  // excluding itself, ordered by (min_x, min_y).
  std::vector<LeafId> neighbor_buckets(LeafId id) const;

 private:
  void build_node(std::size_t index, std::size_t begin, std::size_t end,
                  std::uint32_t depth);

  std::size_t capacity_ = 0;
  std::vector<BucketEntry> entries_;
  std::vector<Node> nodes_;
  std::vector<Leaf> leaves_;
  std::optional<LeafId> overflow_;
};

// Uniform-grid vertex counts over [-1, 1]^2 for each graph.
struct DensityGrid {
  std::size_t bins = 0;
  double cell = 0.0;
  std::array<std::vector<std::uint64_t>, 2> counts;

  std::uint64_t count(Side side, std::size_t x_bin, std::size_t y_bin) const {
    return counts[side_index(side)][x_bin * bins + y_bin];
  }
};

// Bins positioned vertices into cells of the given edge length. Throws
// std::invalid_argument when cell <= 0.
DensityGrid export_density_grid(std::span<const VertexPosition> positions, double cell);

// CSV `x_bin,y_bin,count_g1,count_g2`, x_bin-major, bins counted from the
// (-1, -1) corner.
void write_density_csv(const DensityGrid& grid, std::ostream& out);

}  // namespace gsana
