#include "gsana/embedding.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "gsana/parallel.h"

namespace gsana {

Point rotate(Point p, double angle) {
  if (angle == 0.0) return p;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {p.x * c - p.y * s, p.x * s + p.y * c};
}

UnitCirclePlacement::UnitCirclePlacement(std::size_t pair_count)
    : pair_count_(pair_count),
      step_(pair_count == 0 ? 0.0 : std::numbers::pi / static_cast<double>(pair_count)) {}

std::array<Point, 2> UnitCirclePlacement::endpoints(std::size_t pair) const {
  const auto first = rotate({1.0, 0.0}, angle(pair));
  return {first, Point{-first.x, -first.y}};
}

std::vector<PairRows> resolve_pair_rows(Side side, const VantagePairList& pairs,
                                        std::span<const VertexId> counterpart,
                                        const DistanceTable& d) {
  std::vector<PairRows> rows;
  rows.reserve(pairs.size());
  for (const auto& p : pairs.pairs) {
    VertexId a = p[0];
    VertexId b = p[1];
    if (side == Side::kSecond) {
      a = counterpart[a];
      b = counterpart[b];
      if (a == kNoVertex || b == kNoVertex) {
        throw std::invalid_argument("vantage anchor without a graph-2 counterpart");
      }
    }
    const auto to_first = d.row(side, a);
    rows.push_back({to_first, d.row(side, b), to_first[b]});
  }
  return rows;
}

std::optional<Point> triangle_point(std::uint32_t to_first, std::uint32_t to_second,
                                    std::uint32_t between) {
  if (to_first == kUnreachable || to_second == kUnreachable || between == kUnreachable ||
      between == 0) {
    return std::nullopt;
  }
  if (to_first == 0) return Point{1.0, 0.0};
  const double c = between;
  const double a = 2.0 * to_first / c;
  const double b = 2.0 * to_second / c;
  const double cos_alpha = std::clamp((a * a + 4.0 - b * b) / (4.0 * a), -1.0, 1.0);
  const double alpha = std::acos(cos_alpha);
  return Point{1.0 - a * std::cos(alpha), a * std::sin(alpha)};
}

VertexPosition compute_position(Side side, VertexId u, std::span<const PairRows> rows,
                                const UnitCirclePlacement& placement) {
  VertexPosition out{side, u, {}, 0};
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto local = triangle_point(rows[i].to_first[u], rows[i].to_second[u],
                                      rows[i].between);
    if (!local) continue;
    const auto p = rotate(*local, placement.angle(i));
    sx += p.x;
    sy += p.y;
    ++out.valid_pairs;
  }
  if (out.valid_pairs > 0) {
    out.point = {sx / out.valid_pairs, sy / out.valid_pairs};
  }
  return out;
}

std::vector<VertexPosition> compute_positions(Side side, VertexId vertex_count,
                                              std::span<const PairRows> rows,
                                              const UnitCirclePlacement& placement,
                                              unsigned threads) {
  std::vector<VertexPosition> out(vertex_count);
  parallel_for(vertex_count, threads, [&](std::size_t u) {
    out[u] = compute_position(side, static_cast<VertexId>(u), rows, placement);
  });
  return out;
}

double normalize_positions(std::span<VertexPosition> first,
                           std::span<VertexPosition> second) {
  double extent = 1.0;
  for (const auto* set : {&first, &second}) {
    for (const auto& p : *set) {
      if (!p.positioned()) continue;
      extent = std::max({extent, std::abs(p.point.x), std::abs(p.point.y)});
    }
  }
  if (extent > 1.0) {
    for (auto* set : {&first, &second}) {
      for (auto& p : *set) {
        if (!p.positioned()) continue;
        p.point.x /= extent;
        p.point.y /= extent;
      }
    }
  }
  return extent;
}

// --- Region ----------------------------------------------------------------

bool Region::touches(const Region& other) const {
  return min_x <= other.max_x() && other.min_x <= max_x() && min_y <= other.max_y() &&
         other.min_y <= max_y();
}

bool Region::contains(Point p) const {
  return p.x >= min_x && p.x <= max_x() && p.y >= min_y && p.y <= max_y();
}

// --- BucketTree ------------------------------------------------------------

BucketTree BucketTree::build(std::span<const VertexPosition> positions,
                             std::size_t capacity) {
  if (capacity == 0) throw std::invalid_argument("bucket capacity must be positive");
  BucketTree tree;
  tree.capacity_ = capacity;
  tree.entries_.reserve(positions.size());
  for (const auto& p : positions) {
    if (p.positioned()) tree.entries_.push_back({p.side, p.vertex, p.point});
  }
  const std::size_t spatial = tree.entries_.size();
  for (const auto& p : positions) {
    if (!p.positioned()) tree.entries_.push_back({p.side, p.vertex, p.point});
  }
  tree.nodes_.push_back({Region{}, -1, -1});
  tree.build_node(0, 0, spatial, 0);
  if (spatial < tree.entries_.size()) {
    tree.overflow_ = static_cast<LeafId>(tree.leaves_.size());
    tree.leaves_.push_back({Region{}, 0, spatial, tree.entries_.size(), true});
  }
  return tree;
}

void BucketTree::build_node(std::size_t index, std::size_t begin, std::size_t end,
                            std::uint32_t depth) {
  const Region region = nodes_[index].region;
  const auto first = entries_.begin() + static_cast<std::ptrdiff_t>(begin);
  const auto last = entries_.begin() + static_cast<std::ptrdiff_t>(end);
  const bool coincident = std::all_of(first, last, [&](const BucketEntry& e) {
    return e.point == first->point;
  });
  if (end - begin <= capacity_ || coincident || depth >= kMaxDepth) {
    nodes_[index].leaf = static_cast<std::int64_t>(leaves_.size());
    leaves_.push_back({region, depth, begin, end, false});
    return;
  }

  const double half = region.size / 2.0;
  const double mid_x = region.min_x + half;
  const double mid_y = region.min_y + half;
  auto quadrant = [&](const BucketEntry& e) {
    return (e.point.x >= mid_x ? 1 : 0) + (e.point.y >= mid_y ? 2 : 0);
  };
  // Stable bucketing keeps insertion order inside each child.
  std::array<std::vector<BucketEntry>, 4> parts;
  for (auto it = first; it != last; ++it) parts[quadrant(*it)].push_back(*it);
  std::array<std::size_t, 5> bounds{begin, 0, 0, 0, 0};
  auto out = first;
  for (std::size_t q = 0; q < 4; ++q) {
    out = std::copy(parts[q].begin(), parts[q].end(), out);
    bounds[q + 1] = bounds[q] + parts[q].size();
  }
  parts = {};

  const std::array<Region, 4> child_regions{
      Region{region.min_x, region.min_y, half}, Region{mid_x, region.min_y, half},
      Region{region.min_x, mid_y, half}, Region{mid_x, mid_y, half}};
  const auto children = nodes_.size();
  nodes_[index].first_child = static_cast<std::int64_t>(children);
  for (std::size_t q = 0; q < 4; ++q) nodes_.push_back({child_regions[q], -1, -1});
  for (std::size_t q = 0; q < 4; ++q) {
    build_node(children + q, bounds[q], bounds[q + 1], depth + 1);
  }
}

std::span<const BucketEntry> BucketTree::entries(LeafId id) const {
  const auto& l = leaves_[id];
  return {entries_.data() + l.begin, l.size()};
}

std::vector<LeafId> BucketTree::neighbor_buckets(LeafId id) const {
  std::vector<LeafId> out;
  const auto& query = leaves_[id];
  if (query.overflow || nodes_.empty()) return out;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const auto& node = nodes_[stack.back()];
    stack.pop_back();
    if (!node.region.touches(query.region)) continue;
    if (node.is_leaf()) {
      if (static_cast<LeafId>(node.leaf) != id) out.push_back(static_cast<LeafId>(node.leaf));
      continue;
    }
    for (std::int64_t q = 0; q < 4; ++q) {
      stack.push_back(static_cast<std::size_t>(node.first_child + q));
    }
  }
  std::sort(out.begin(), out.end(), [&](LeafId a, LeafId b) {
    const auto& ra = leaves_[a].region;
    const auto& rb = leaves_[b].region;
    if (ra.min_x != rb.min_x) return ra.min_x < rb.min_x;
    return ra.min_y < rb.min_y;
  });
  return out;
}

// --- Density grid ----------------------------------------------------------

DensityGrid export_density_grid(std::span<const VertexPosition> positions, double cell) {
  if (!(cell > 0.0)) throw std::invalid_argument("cell size must be positive");
  DensityGrid grid;
  grid.cell = cell;
  const double span = 2.0 / cell;
  const double rounded = std::round(span);
  grid.bins = static_cast<std::size_t>(std::abs(span - rounded) < 1e-9 ? rounded
                                                                        : std::ceil(span));
  grid.bins = std::max<std::size_t>(grid.bins, 1);
  for (auto& c : grid.counts) c.assign(grid.bins * grid.bins, 0);
  auto bin_of = [&](double coord) {
    const auto b = static_cast<std::int64_t>(std::floor((coord + 1.0) / cell));
    return static_cast<std::size_t>(
        std::clamp<std::int64_t>(b, 0, static_cast<std::int64_t>(grid.bins) - 1));
  };
  for (const auto& p : positions) {
    if (!p.positioned()) continue;
    ++grid.counts[side_index(p.side)][bin_of(p.point.x) * grid.bins + bin_of(p.point.y)];
  }
  return grid;
}

void write_density_csv(const DensityGrid& grid, std::ostream& out) {
  out << "x_bin,y_bin,count_g1,count_g2\n";
  for (std::size_t x = 0; x < grid.bins; ++x) {
    for (std::size_t y = 0; y < grid.bins; ++y) {
      out << x << ',' << y << ',' << grid.count(Side::kFirst, x, y) << ','
          << grid.count(Side::kSecond, x, y) << '\n';
    }
  }
}

}  // namespace gsana
