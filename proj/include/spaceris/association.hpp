#pragma once

#include <array>
#include <vector>

#include "spaceris/geometry.hpp"

namespace spaceris::assoc {

using Point2 = std::array<double, 2>;

struct HungarianResult {
  std::vector<int> assignment;  // row -> column
  double total_cost = 0.0;
};

/// Minimum-cost perfect assignment (Kuhn-Munkres with potentials, O(n^3)).
/// Rectangular inputs are padded with a large sentinel cost; the returned
/// assignment only covers the original rows. Throws on non-finite entries.
HungarianResult hungarian_assign(const std::vector<std::vector<double>>& cost);

struct ClusterState {
  std::vector<Point2> centroids;
  std::vector<int> slots_per_cluster;  // (U mod S) clusters of ceil(U/S), rest floor
  std::vector<int> assignment;         // RUE -> cluster
  double mse = 0.0;                    // mean squared RUE-to-centroid distance
  int iterations = 0;
};

/// Balanced K-means: pre-allocated per-cluster slots, the selection step is
/// a Hungarian assignment over the U x U slot-expanded squared-distance
/// matrix, centroids update as cluster means. Stops when centroids move less
/// than `tol` or after `max_iters`.
ClusterState bkmc(const std::vector<Point2>& rue_positions,
                  const std::vector<Point2>& sat_positions_initial, int max_iters = 100,
                  double tol = 1e-9);

/// Slot counts for balanced clusters of U points into S clusters.
std::vector<int> balanced_slot_counts(int num_points, int num_clusters);

/// Binary association tensor v[b][u][s]; each served RUE has exactly one
/// (b, s) pair, so storage is per-RUE.
struct AssociationMatrix {
  int num_gbs = 0;
  int num_rues = 0;
  int num_sats = 0;
  std::vector<int> sat_of_rue;  // satellite id serving each RUE
  std::vector<int> gbs_of_rue;  // GBS feeding that satellite

  int v(int b, int u, int s) const {
    return (sat_of_rue[u] == s && gbs_of_rue[u] == b) ? 1 : 0;
  }
};

struct InfeasibleAssociation {
  std::vector<int> uncovered_rues;  // below min elevation for every candidate
};

struct BuildResult {
  AssociationMatrix assoc;
  bool feasible = true;
  InfeasibleAssociation infeasible;
};

/// Turns a cluster solution into the association matrix. `cluster_sat_ids`
/// maps cluster index -> satellite id; the serving GBS per satellite is the
/// nearest one with elevation >= min_elev. RUEs whose cluster satellite sits
/// below min_elev are reported as infeasible.
BuildResult build_association(const ClusterState& cluster, const std::vector<int>& cluster_sat_ids,
                              const std::vector<geometry::Vec3>& rue_positions,
                              const std::vector<geometry::Vec3>& sat_positions,
                              const std::vector<geometry::Vec3>& gbs_positions,
                              double min_elevation_rad, const geometry::GeoConstants& c);

}  // namespace spaceris::assoc
