#include "gsana/anchors.h"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <unordered_set>

#include "gsana/parallel.h"

namespace gsana {

std::vector<std::uint32_t> bfs_distances(const AttributedGraph& g, VertexId source) {
  std::vector<std::uint32_t> dist(g.num_vertices(), kUnreachable);
  std::vector<VertexId> frontier{source};
  std::vector<VertexId> next;
  dist[source] = 0;
  std::uint32_t level = 0;
  while (!frontier.empty()) {
    ++level;
    next.clear();
    for (const auto u : frontier) {
      for (const auto w : g.neighbors(u)) {
        if (dist[w] != kUnreachable) continue;
        dist[w] = level;
        next.push_back(w);
      }
    }
    frontier.swap(next);
  }
  return dist;
}

// --- DistanceTable ---------------------------------------------------------

std::size_t DistanceTable::ensure_rows(Side side, const AttributedGraph& g,
                                       std::span<const VertexId> sources,
                                       unsigned threads) {
  std::vector<VertexId> missing;
  {
    std::lock_guard lock(mutex_);
    auto& rows = rows_[side_index(side)];
    std::unordered_set<VertexId> seen;
    for (const auto s : sources) {
      if (s >= g.num_vertices()) throw std::out_of_range("BFS source out of range");
      if (!rows.contains(s) && seen.insert(s).second) missing.push_back(s);
    }
  }
  std::vector<std::vector<std::uint32_t>> computed(missing.size());
  parallel_for(missing.size(), threads,
               [&](std::size_t i) { computed[i] = bfs_distances(g, missing[i]); });
  std::lock_guard lock(mutex_);
  auto& rows = rows_[side_index(side)];
  for (std::size_t i = 0; i < missing.size(); ++i) {
    rows.emplace(missing[i], std::move(computed[i]));
  }
  bfs_runs_ += missing.size();
  return missing.size();
}

bool DistanceTable::has_row(Side side, VertexId source) const {
  std::lock_guard lock(mutex_);
  return rows_[side_index(side)].contains(source);
}

std::span<const std::uint32_t> DistanceTable::row(Side side, VertexId source) const {
  const auto& rows = rows_[side_index(side)];
  const auto it = rows.find(source);
  if (it == rows.end()) {
    throw std::out_of_range("no distance row for vertex " + std::to_string(source));
  }
  return it->second;
}

std::size_t DistanceTable::row_count(Side side) const {
  std::lock_guard lock(mutex_);
  return rows_[side_index(side)].size();
}

// --- Anchor selection ------------------------------------------------------

double log_in_base(double x, double base) { return std::log(x) / std::log(base); }

namespace {

// ceil() that ignores floating-point noise just above an integer.
std::size_t ceil_count(double value) {
  const double rounded = std::round(value);
  if (std::abs(value - rounded) < 1e-9) return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(value));
}

std::vector<VertexId> highest_degree(const AttributedGraph& g, std::size_t count) {
  std::vector<VertexId> order(g.num_vertices());
  for (VertexId u = 0; u < g.num_vertices(); ++u) order[u] = u;
  count = std::min(count, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count),
                    order.end(), [&](VertexId a, VertexId b) {
                      if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
                      return a < b;
                    });
  order.resize(count);
  return order;
}

}  // namespace

std::size_t bootstrap_target_size(std::size_t n1, std::size_t n2, double log_base) {
  const auto n = std::max(n1, n2);
  if (n <= 1) return 1;
  return std::max<std::size_t>(1, ceil_count(4.0 * log_in_base(static_cast<double>(n), log_base)));
}

AnchorMap bootstrap_anchors(const AttributedGraph& g1, const AttributedGraph& g2,
                            const PairScorer& score, double log_base) {
  if (g1.num_vertices() == 0 || g2.num_vertices() == 0) {
    throw std::invalid_argument("cannot bootstrap anchors for an empty graph");
  }
  const auto target = bootstrap_target_size(g1.num_vertices(), g2.num_vertices(), log_base);
  const auto left = highest_degree(g1, 2 * target);
  const auto right = highest_degree(g2, 2 * target);

  struct Scored {
    double score;
    VertexId u;
    VertexId v;
  };
  std::vector<Scored> scored;
  scored.reserve(left.size() * right.size());
  for (const auto u : left) {
    for (const auto v : right) {
      const double s = score(u, v);
      if (s > 0.0) scored.push_back({s, u, v});
    }
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    return std::tie(b.score, a.u, a.v) < std::tie(a.score, b.u, b.v);
  });

  // The highest remaining pair is always mutually best among what is left.
  AnchorMap anchors;
  anchors.source = AnchorMap::Source::kBootstrapped;
  std::unordered_set<VertexId> used_left;
  std::unordered_set<VertexId> used_right;
  for (const auto& s : scored) {
    if (anchors.size() >= target) break;
    if (used_left.contains(s.u) || used_right.contains(s.v)) continue;
    used_left.insert(s.u);
    used_right.insert(s.v);
    anchors.pairs.push_back({s.u, s.v});
  }
  return anchors;
}

std::size_t central_anchor_limit(std::size_t anchor_count, double log_base) {
  if (anchor_count <= 1) return 1;
  return std::max<std::size_t>(
      1, ceil_count(log_in_base(static_cast<double>(anchor_count), log_base)));
}

std::vector<VertexId> find_central_anchors(const AttributedGraph& g,
                                           std::span<const VertexId> anchors,
                                           const DistanceTable& d, std::uint32_t threshold,
                                           double log_base) {
  std::vector<VertexId> scan(anchors.begin(), anchors.end());
  std::sort(scan.begin(), scan.end());
  scan.erase(std::unique(scan.begin(), scan.end()), scan.end());

  std::vector<VertexId> spread;
  for (const auto u : scan) {
    const auto row = d.row(Side::kFirst, u);
    const bool far = std::all_of(spread.begin(), spread.end(),
                                 [&](VertexId v) { return row[v] > threshold; });
    if (far) spread.push_back(u);
  }

  const auto limit = std::min(central_anchor_limit(scan.size(), log_base), spread.size());
  std::stable_sort(spread.begin(), spread.end(), [&](VertexId a, VertexId b) {
    return g.degree(a) > g.degree(b);
  });
  spread.resize(limit);
  return spread;
}

VantageSelection find_vantage_anchors(std::span<const VertexId> non_central,
                                      std::span<const VertexId> central,
                                      const DistanceTable& d) {
  VantageSelection out;
  if (central.empty()) return out;

  std::vector<VertexId> centers(central.begin(), central.end());
  std::sort(centers.begin(), centers.end());
  std::vector<std::span<const std::uint32_t>> rows;
  rows.reserve(centers.size());
  for (const auto c : centers) rows.push_back(d.row(Side::kFirst, c));

  std::vector<VertexId> scan(non_central.begin(), non_central.end());
  std::sort(scan.begin(), scan.end());
  scan.erase(std::unique(scan.begin(), scan.end()), scan.end());

  std::vector<std::vector<VertexId>> assigned(centers.size());
  for (const auto u : scan) {
    std::size_t best = centers.size();
    for (std::size_t i = 0; i < centers.size(); ++i) {
      if (centers[i] == u || rows[i][u] == kUnreachable) continue;
      if (best == centers.size() || rows[i][u] < rows[best][u]) best = i;
    }
    if (best != centers.size()) assigned[best].push_back(u);
  }

  std::size_t quota = assigned.front().size();
  for (const auto& list : assigned) quota = std::min(quota, list.size());
  if (quota == 0) {
    out.degenerate = true;
    quota = 1;
  }

  for (std::size_t i = 0; i < centers.size(); ++i) {
    auto& list = assigned[i];
    // Farthest from this center first, then farthest from the other centers.
    auto spread_key = [&](VertexId u) {
      std::uint64_t sum = 0;
      for (std::size_t j = 0; j < centers.size(); ++j) {
        if (j != i) sum += rows[j][u];
      }
      return sum;
    };
    std::sort(list.begin(), list.end(), [&](VertexId a, VertexId b) {
      if (rows[i][a] != rows[i][b]) return rows[i][a] > rows[i][b];
      const auto sa = spread_key(a);
      const auto sb = spread_key(b);
      if (sa != sb) return sa > sb;
      return a < b;
    });
    const auto take = std::min(quota, list.size());
    out.anchors.insert(out.anchors.end(), list.begin(),
                       list.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(out.anchors.begin(), out.anchors.end());
  return out;
}

VantagePairList pair_and_order(std::span<const VertexId> vantage, const DistanceTable& d) {
  if (vantage.size() < 2) {
    throw InsufficientVantageAnchors("need at least two vantage anchors, got " +
                                     std::to_string(vantage.size()));
  }
  std::vector<VertexId> remaining(vantage.begin(), vantage.end());
  std::sort(remaining.begin(), remaining.end());
  remaining.erase(std::unique(remaining.begin(), remaining.end()), remaining.end());

  VantagePairList out;
  while (remaining.size() >= 2) {
    const auto u = remaining.front();
    const auto row = d.row(Side::kFirst, u);
    std::size_t best = 0;
    for (std::size_t j = 1; j < remaining.size(); ++j) {
      const auto dist = row[remaining[j]];
      if (dist == kUnreachable) continue;
      if (best == 0 || dist > row[remaining[best]]) best = j;
    }
    if (best == 0) {
      // No reachable partner left for u.
      remaining.erase(remaining.begin());
      continue;
    }
    out.pairs.push_back({u, remaining[best]});
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    remaining.erase(remaining.begin());
  }
  if (out.pairs.empty()) {
    throw InsufficientVantageAnchors("no two vantage anchors are connected");
  }

  for (std::size_t i = 1; i < out.pairs.size(); ++i) {
    const auto prev = d.row(Side::kFirst, out.pairs[i - 1][0]);
    std::size_t nearest = i;
    for (std::size_t j = i + 1; j < out.pairs.size(); ++j) {
      if (prev[out.pairs[j][0]] < prev[out.pairs[nearest][0]]) nearest = j;
    }
    std::swap(out.pairs[i], out.pairs[nearest]);
  }
  return out;
}

}  // namespace gsana
