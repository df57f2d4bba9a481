#pragma once

#include <array>
#include <vector>

#include "spaceris/association.hpp"
#include "spaceris/geometry.hpp"
#include "spaceris/rng.hpp"

namespace spaceris::netsim {

struct TrafficConfig {
  double arrival_rate_per_slot = 1.0;
  long packet_size_bits = 1000000;
  double psi_max_s = 0.05;  // constraint (9f) delay budget
  int max_packets = 8;      // observation padding P_max
};

struct Packet {
  long id = -1;
  int source_gbs = 0;
  int dest_rue = 0;
  long size_bits = 0;
  enum class Where { AtSat, Delivered, Dropped } where = Where::AtSat;
  int sat = -1;                       // current satellite when in flight
  std::vector<int> hop_sats;          // satellites visited, source entry first
  std::vector<double> hop_dist_m;     // per-hop distances incl. uplink and final downlink
  std::vector<double> hop_rate_bps;   // 0 means infinite (no serialization delay)
  long created_slot = 0;
  long delivered_slot = -1;
  double latency_s = 0.0;             // accumulated propagation + serialization
};

/// Routing action indices; 0..3 mirror geometry::IslDirection.
enum RouteAction {
  kActFore = 0,
  kActAft = 1,
  kActLeft = 2,
  kActRight = 3,
  kActDeliver = 4,
  kNumActions = 5
};

struct StepOutcome {
  enum PacketStatus { kFlying = 0, kDelivered = 1, kDropped = 2 };
  std::vector<double> remaining_m;  // per acted packet, post-move residual distance
  std::vector<int> status;          // per acted packet
  std::vector<long> delivered_ids;
  std::vector<long> dropped_ids;
};

/// Propagation + serialization latency over a recorded hop trace.
double measure_latency(const std::vector<double>& hop_dist_m,
                       const std::vector<double>& hop_rate_bps, long size_bits,
                       const geometry::GeoConstants& c);

/// Discrete-time packet world over the constellation graph. One hop per slot;
/// delay is accounted analytically from hop distances and rates.
class NetEnv {
 public:
  NetEnv(geometry::Constellation constellation, assoc::AssociationMatrix assoc,
         std::vector<geometry::Vec3> rue_positions, std::vector<geometry::Vec3> gbs_positions,
         TrafficConfig traffic, double min_elevation_rad, bool freeze_motion = false);

  void reset(long slot0 = 0);

  /// Poisson arrivals this slot; every packet uplinks immediately to the
  /// satellite nearest (best elevation) to its source GBS. Returns the count.
  int spawn_packets(Rng& rng);

  /// Deterministic injection for controlled episodes; returns the packet id.
  long inject_packet(int source_gbs, int dest_rue, long size_bits);

  /// One action per in-flight packet, ordered by ascending packet id.
  /// Throws on an action the current mask forbids.
  StepOutcome step(const std::vector<int>& actions);

  std::array<bool, kNumActions> legal_actions(const Packet& p) const;
  bool covers(int sat, int rue) const;
  double remaining_m(const Packet& p) const;

  std::vector<const Packet*> in_flight() const;
  const std::vector<Packet>& packets() const { return packets_; }
  const geometry::ConstellationState& state() const { return state_; }
  const geometry::Constellation& constellation() const { return con_; }
  const std::vector<geometry::Vec3>& rue_positions() const { return rues_; }
  const std::vector<geometry::Vec3>& gbs_positions() const { return gbs_; }
  long slot() const { return slot_; }
  long spawned_count() const { return spawned_; }
  long delivered_count() const { return delivered_; }
  long dropped_count() const { return dropped_; }
  const TrafficConfig& traffic() const { return traffic_; }
  double min_elevation_rad() const { return min_elev_; }

  void set_rue_rates(std::vector<double> rates_bps) { rue_rates_ = std::move(rates_bps); }
  void set_isl_rate(double bps) { isl_rate_bps_ = bps; }

  /// Entry satellite for a GBS: best elevation, ties to the lowest id.
  int entry_satellite(int gbs) const;

  /// Oracle: minimum env steps (ISL moves + the deliver action) from
  /// `from_sat` to delivery at `dest_rue` on the current graph; -1 if the
  /// destination is uncovered.
  int bfs_steps(int from_sat, int dest_rue) const;

 private:
  void refresh_state();
  void move_packet(Packet& p, int action);

  geometry::Constellation con_;
  assoc::AssociationMatrix assoc_;
  std::vector<geometry::Vec3> rues_;
  std::vector<geometry::Vec3> gbs_;
  TrafficConfig traffic_;
  double min_elev_;
  bool freeze_motion_;

  geometry::ConstellationState state_;
  std::vector<Packet> packets_;
  std::vector<double> rue_rates_;  // bps at delivery; 0 = infinite
  double isl_rate_bps_ = 0.0;      // 0 = infinite
  long slot_ = 0;
  long next_id_ = 0;
  long spawned_ = 0, delivered_ = 0, dropped_ = 0;
};

}  // namespace spaceris::netsim
