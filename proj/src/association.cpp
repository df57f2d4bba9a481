#include "spaceris/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spaceris::assoc {

namespace {
double sq_dist(const Point2& a, const Point2& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1];
  return dx * dx + dy * dy;
}
}  // namespace

HungarianResult hungarian_assign(const std::vector<std::vector<double>>& cost) {
  const int rows = static_cast<int>(cost.size());
  if (rows == 0) throw std::invalid_argument("hungarian: empty cost matrix");
  int cols = 0;
  for (const auto& r : cost) cols = std::max(cols, static_cast<int>(r.size()));
  if (cols == 0) throw std::invalid_argument("hungarian: empty cost matrix");
  double max_abs = 1.0;
  for (const auto& r : cost)
    for (double v : r) {
      if (!std::isfinite(v)) throw std::invalid_argument("hungarian: non-finite cost");
      max_abs = std::max(max_abs, std::fabs(v));
    }
  const int n = std::max(rows, cols);
  const double pad = 1e6 * max_abs;  // sentinel for padded cells

  auto at = [&](int i, int j) -> double {
    if (i < rows && j < static_cast<int>(cost[i].size())) return cost[i][j];
    return pad;
  };

  // Shortest augmenting path formulation (1-indexed potentials).
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = std::numeric_limits<double>::infinity();
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  HungarianResult res;
  res.assignment.assign(rows, -1);
  for (int j = 1; j <= n; ++j) {
    const int i = p[j];
    if (i >= 1 && i <= rows && j <= cols) {
      res.assignment[i - 1] = j - 1;
      res.total_cost += cost[i - 1].size() > static_cast<std::size_t>(j - 1) ? cost[i - 1][j - 1]
                                                                             : pad;
    }
  }
  return res;
}

std::vector<int> balanced_slot_counts(int num_points, int num_clusters) {
  if (num_clusters < 1 || num_points < num_clusters)
    throw std::invalid_argument("balanced_slot_counts: need U >= S >= 1");
  const int base = num_points / num_clusters;
  const int extra = num_points % num_clusters;
  std::vector<int> counts(num_clusters, base);
  for (int i = 0; i < extra; ++i) counts[i] += 1;  // (U mod S) clusters get ceil(U/S)
  return counts;
}

ClusterState bkmc(const std::vector<Point2>& rues, const std::vector<Point2>& sats,
                  int max_iters, double tol) {
  const int num_rues = static_cast<int>(rues.size());
  const int num_clusters = static_cast<int>(sats.size());
  if (num_rues == 0 || num_clusters == 0) throw std::invalid_argument("bkmc: empty inputs");
  if (num_rues < num_clusters) throw std::invalid_argument("bkmc: need U >= S");

  ClusterState st;
  st.centroids.assign(sats.begin(), sats.end());
  st.slots_per_cluster = balanced_slot_counts(num_rues, num_clusters);

  // Slot -> cluster map: cluster 0 slots first, then cluster 1, ...
  std::vector<int> slot_cluster;
  slot_cluster.reserve(num_rues);
  for (int cidx = 0; cidx < num_clusters; ++cidx)
    for (int k = 0; k < st.slots_per_cluster[cidx]; ++k) slot_cluster.push_back(cidx);

  std::vector<std::vector<double>> cost(num_rues, std::vector<double>(num_rues, 0.0));
  for (int it = 0; it < max_iters; ++it) {
    for (int uidx = 0; uidx < num_rues; ++uidx)
      for (int s = 0; s < num_rues; ++s)
        cost[uidx][s] = sq_dist(rues[uidx], st.centroids[slot_cluster[s]]);

    const HungarianResult h = hungarian_assign(cost);
    st.assignment.assign(num_rues, -1);
    for (int uidx = 0; uidx < num_rues; ++uidx) st.assignment[uidx] = slot_cluster[h.assignment[uidx]];

    // Centroid update: mean of assigned RUEs.
    std::vector<Point2> next(num_clusters, Point2{0.0, 0.0});
    std::vector<int> counts(num_clusters, 0);
    for (int uidx = 0; uidx < num_rues; ++uidx) {
      next[st.assignment[uidx]][0] += rues[uidx][0];
      next[st.assignment[uidx]][1] += rues[uidx][1];
      counts[st.assignment[uidx]] += 1;
    }
    double moved = 0.0;
    for (int cidx = 0; cidx < num_clusters; ++cidx) {
      if (counts[cidx] > 0) {
        next[cidx][0] /= counts[cidx];
        next[cidx][1] /= counts[cidx];
      } else {
        next[cidx] = st.centroids[cidx];
      }
      moved = std::max(moved, std::sqrt(sq_dist(next[cidx], st.centroids[cidx])));
    }
    st.centroids = next;
    st.iterations = it + 1;
    if (moved < tol) break;
  }

  st.mse = 0.0;
  for (int uidx = 0; uidx < num_rues; ++uidx)
    st.mse += sq_dist(rues[uidx], st.centroids[st.assignment[uidx]]);
  st.mse /= num_rues;
  return st;
}

BuildResult build_association(const ClusterState& cluster, const std::vector<int>& cluster_sat_ids,
                              const std::vector<geometry::Vec3>& rues,
                              const std::vector<geometry::Vec3>& sats,
                              const std::vector<geometry::Vec3>& gbs,
                              double min_elevation_rad, const geometry::GeoConstants& c) {
  if (cluster_sat_ids.size() != cluster.centroids.size())
    throw std::invalid_argument("build_association: cluster/satellite count mismatch");
  if (gbs.empty()) throw std::invalid_argument("build_association: no GBS");

  BuildResult out;
  out.assoc.num_gbs = static_cast<int>(gbs.size());
  out.assoc.num_rues = static_cast<int>(rues.size());
  out.assoc.num_sats = static_cast<int>(sats.size());
  out.assoc.sat_of_rue.assign(rues.size(), -1);
  out.assoc.gbs_of_rue.assign(rues.size(), -1);

  // Serving GBS per satellite: nearest among those that see it above min_elev;
  // nearest outright if none does.
  std::vector<int> gbs_of_sat(cluster_sat_ids.size(), 0);
  for (std::size_t k = 0; k < cluster_sat_ids.size(); ++k) {
    const auto& sat_pos = sats[cluster_sat_ids[k]];
    int best = -1, best_any = 0;
    double best_d = 0.0, best_any_d = std::numeric_limits<double>::infinity();
    for (int b = 0; b < static_cast<int>(gbs.size()); ++b) {
      const double d = (sat_pos - gbs[b]).norm();
      if (d < best_any_d) {
        best_any_d = d;
        best_any = b;
      }
      if (geometry::elevation_angle(gbs[b], sat_pos, c) >= min_elevation_rad &&
          (best < 0 || d < best_d)) {
        best = b;
        best_d = d;
      }
    }
    gbs_of_sat[k] = best >= 0 ? best : best_any;
  }

  for (std::size_t uidx = 0; uidx < rues.size(); ++uidx) {
    const int cidx = cluster.assignment[uidx];
    const int sat = cluster_sat_ids[cidx];
    const double elev = geometry::elevation_angle(rues[uidx], sats[sat], c);
    if (elev < min_elevation_rad) {
      out.feasible = false;
      out.infeasible.uncovered_rues.push_back(static_cast<int>(uidx));
      continue;
    }
    out.assoc.sat_of_rue[uidx] = sat;
    out.assoc.gbs_of_rue[uidx] = gbs_of_sat[cidx];
  }
  return out;
}

}  // namespace spaceris::assoc
