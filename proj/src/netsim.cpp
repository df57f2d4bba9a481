#include "spaceris/netsim.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace spaceris::netsim {

double measure_latency(const std::vector<double>& hop_dist_m,
                       const std::vector<double>& hop_rate_bps, long size_bits,
                       const geometry::GeoConstants& c) {
  if (hop_rate_bps.size() != hop_dist_m.size())
    throw std::invalid_argument("measure_latency: trace size mismatch");
  double t = 0.0;
  for (std::size_t i = 0; i < hop_dist_m.size(); ++i) {
    t += hop_dist_m[i] / c.light_speed_m_s;
    if (hop_rate_bps[i] > 0.0 && size_bits > 0)
      t += static_cast<double>(size_bits) / hop_rate_bps[i];
  }
  return t;
}

NetEnv::NetEnv(geometry::Constellation constellation, assoc::AssociationMatrix assoc,
               std::vector<geometry::Vec3> rue_positions, std::vector<geometry::Vec3> gbs_positions,
               TrafficConfig traffic, double min_elevation_rad, bool freeze_motion)
    : con_(std::move(constellation)),
      assoc_(std::move(assoc)),
      rues_(std::move(rue_positions)),
      gbs_(std::move(gbs_positions)),
      traffic_(traffic),
      min_elev_(min_elevation_rad),
      freeze_motion_(freeze_motion) {
  if (rues_.empty() || gbs_.empty()) throw std::invalid_argument("NetEnv: empty ground sets");
  reset(0);
}

void NetEnv::reset(long slot0) {
  slot_ = slot0;
  packets_.clear();
  next_id_ = 0;
  spawned_ = delivered_ = dropped_ = 0;
  refresh_state();
}

void NetEnv::refresh_state() {
  state_ = geometry::propagate(con_, freeze_motion_ ? 0 : slot_);
  state_.epoch_slot = slot_;
}

bool NetEnv::covers(int sat, int rue) const {
  return geometry::elevation_angle(rues_[rue], state_.positions[sat], con_.consts) >= min_elev_;
}

int NetEnv::entry_satellite(int gbs) const {
  int best = 0;
  double best_elev = -M_PI;
  for (int s = 0; s < static_cast<int>(state_.positions.size()); ++s) {
    const double e = geometry::elevation_angle(gbs_[gbs], state_.positions[s], con_.consts);
    if (e > best_elev) {
      best_elev = e;
      best = s;
    }
  }
  return best;
}

long NetEnv::inject_packet(int source_gbs, int dest_rue, long size_bits) {
  if (source_gbs < 0 || source_gbs >= static_cast<int>(gbs_.size()))
    throw std::invalid_argument("inject_packet: bad GBS id");
  if (dest_rue < 0 || dest_rue >= static_cast<int>(rues_.size()))
    throw std::invalid_argument("inject_packet: bad RUE id");
  Packet p;
  p.id = next_id_++;
  p.source_gbs = source_gbs;
  p.dest_rue = dest_rue;
  p.size_bits = size_bits;
  p.created_slot = slot_;
  p.sat = entry_satellite(source_gbs);
  p.where = Packet::Where::AtSat;
  p.hop_sats.push_back(p.sat);
  const double d = (state_.positions[p.sat] - gbs_[source_gbs]).norm();
  p.hop_dist_m.push_back(d);
  p.hop_rate_bps.push_back(isl_rate_bps_);
  p.latency_s = measure_latency({d}, {isl_rate_bps_}, size_bits, con_.consts);
  spawned_ += 1;
  packets_.push_back(std::move(p));
  return packets_.back().id;
}

int NetEnv::spawn_packets(Rng& rng) {
  if (traffic_.arrival_rate_per_slot < 0.0)
    throw std::invalid_argument("spawn_packets: negative arrival rate");
  const int count = rng.poisson(traffic_.arrival_rate_per_slot);
  for (int k = 0; k < count; ++k) {
    const int b = rng.uniform_int(static_cast<int>(gbs_.size()));
    const int u = rng.uniform_int(static_cast<int>(rues_.size()));
    inject_packet(b, u, traffic_.packet_size_bits);
  }
  return count;
}

std::array<bool, kNumActions> NetEnv::legal_actions(const Packet& p) const {
  std::array<bool, kNumActions> mask{false, false, false, false, false};
  if (p.where != Packet::Where::AtSat) return mask;
  const auto& nb = state_.neighbors[p.sat];
  for (int d = 0; d < 4; ++d) mask[d] = nb[d] >= 0;
  mask[kActDeliver] = covers(p.sat, p.dest_rue);
  return mask;
}

double NetEnv::remaining_m(const Packet& p) const {
  if (p.where != Packet::Where::AtSat) return 0.0;
  return (state_.positions[p.sat] - rues_[p.dest_rue]).norm();
}

std::vector<const Packet*> NetEnv::in_flight() const {
  std::vector<const Packet*> v;
  for (const auto& p : packets_)
    if (p.where == Packet::Where::AtSat) v.push_back(&p);
  return v;
}

void NetEnv::move_packet(Packet& p, int action) {
  if (action == kActDeliver) {
    const double d = (state_.positions[p.sat] - rues_[p.dest_rue]).norm();
    const double rate =
        p.dest_rue < static_cast<int>(rue_rates_.size()) ? rue_rates_[p.dest_rue] : 0.0;
    p.hop_dist_m.push_back(d);
    p.hop_rate_bps.push_back(rate);
    p.latency_s += measure_latency({d}, {rate}, p.size_bits, con_.consts);
    p.where = Packet::Where::Delivered;
    p.delivered_slot = slot_ + 1;
    delivered_ += 1;
    return;
  }
  const int next = state_.neighbors[p.sat][action];
  const double d = (state_.positions[p.sat] - state_.positions[next]).norm();
  p.hop_dist_m.push_back(d);
  p.hop_rate_bps.push_back(isl_rate_bps_);
  p.latency_s += measure_latency({d}, {isl_rate_bps_}, p.size_bits, con_.consts);
  p.sat = next;
  p.hop_sats.push_back(next);
}

StepOutcome NetEnv::step(const std::vector<int>& actions) {
  std::vector<Packet*> flying;
  for (auto& p : packets_)
    if (p.where == Packet::Where::AtSat) flying.push_back(&p);
  if (actions.size() != flying.size())
    throw std::invalid_argument("step: need exactly one action per in-flight packet");

  StepOutcome out;
  for (std::size_t i = 0; i < flying.size(); ++i) {
    Packet& p = *flying[i];
    const int a = actions[i];
    if (a < 0 || a >= kNumActions || !legal_actions(p)[a])
      throw std::invalid_argument("step: illegal action " + std::to_string(a) + " for packet " +
                                  std::to_string(p.id));
    move_packet(p, a);
    if (p.where == Packet::Where::AtSat && p.latency_s > traffic_.psi_max_s) {
      p.where = Packet::Where::Dropped;
      dropped_ += 1;
      out.dropped_ids.push_back(p.id);
      out.status.push_back(StepOutcome::kDropped);
    } else if (p.where == Packet::Where::Delivered) {
      out.delivered_ids.push_back(p.id);
      out.status.push_back(StepOutcome::kDelivered);
    } else {
      out.status.push_back(StepOutcome::kFlying);
    }
    out.remaining_m.push_back(remaining_m(p));
  }
  slot_ += 1;
  refresh_state();
  return out;
}

int NetEnv::bfs_steps(int from_sat, int dest_rue) const {
  const int n = static_cast<int>(state_.positions.size());
  std::vector<int> dist(n, -1);
  std::deque<int> q;
  dist[from_sat] = 0;
  q.push_back(from_sat);
  while (!q.empty()) {
    const int s = q.front();
    q.pop_front();
    if (covers(s, dest_rue)) return dist[s] + 1;  // +1 for the deliver action
    for (int d = 0; d < 4; ++d) {
      const int nb = state_.neighbors[s][d];
      if (nb >= 0 && dist[nb] < 0) {
        dist[nb] = dist[s] + 1;
        q.push_back(nb);
      }
    }
  }
  return -1;
}

}  // namespace spaceris::netsim
