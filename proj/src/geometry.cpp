#include "spaceris/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spaceris::geometry {

double orbital_period_s(double altitude_m, const GeoConstants& c) {
  const double a = altitude_m + c.earth_radius_m;
  return 2.0 * M_PI * std::pow(a, 1.5) / std::sqrt(c.mu());
}

int slots_per_revolution(const OrbitalPlane& plane, const GeoConstants& c) {
  if (c.slot_seconds <= 0.0) throw std::invalid_argument("slot_seconds must be positive");
  const double slots = orbital_period_s(plane.altitude_m, c) / c.slot_seconds;
  return std::max(1, static_cast<int>(std::lround(slots)));
}

double initial_anomaly(const OrbitalPlane& plane, int sat_index) {
  return plane.anomaly_offset_rad + 2.0 * M_PI * sat_index / plane.sats;
}

Vec3 position_at_anomaly(const OrbitalPlane& plane, double chi, const GeoConstants& c) {
  const double a = plane.altitude_m + c.earth_radius_m;
  const double cc = std::cos(chi), sc = std::sin(chi);
  const double cw = std::cos(plane.raan_rad), sw = std::sin(plane.raan_rad);
  const double ci = std::cos(plane.inclination_rad), si = std::sin(plane.inclination_rad);
  return {a * (cc * cw - sc * ci * sw),
          a * (cc * sw + sc * ci * cw),
          a * (sc * si)};
}

Vec3 sat_position(const OrbitalPlane& plane, int sat_index, long slot, const GeoConstants& c) {
  if (sat_index < 0 || sat_index >= plane.sats) throw std::invalid_argument("sat_index out of range");
  if (slot < 0) throw std::invalid_argument("slot must be non-negative");
  const int ts = slots_per_revolution(plane, c);
  const double chi = initial_anomaly(plane, sat_index) + 2.0 * M_PI * static_cast<double>(slot) / ts;
  return position_at_anomaly(plane, chi, c);
}

double slant_range(double elevation_rad, double altitude_m, const GeoConstants& c) {
  const double r = c.earth_radius_m;
  const double h = altitude_m;
  const double s = std::sin(elevation_rad);
  return std::sqrt(r * r * s * s + h * h + 2.0 * h * r) - r * s;
}

double sat_sat_distance(double central_angle_rad, double alt_a_m, double alt_b_m,
                        const GeoConstants& c) {
  const double ra = c.earth_radius_m + alt_a_m;
  const double rb = c.earth_radius_m + alt_b_m;
  const double d2 = ra * ra + rb * rb - 2.0 * ra * rb * std::cos(central_angle_rad);
  return std::sqrt(std::max(0.0, d2));
}

LinkDistance link_distance(const Vec3& a, const Vec3& b) {
  const double d = (a - b).norm();
  return {d, d == 0.0};
}

double elevation_angle(const Vec3& ground, const Vec3& sat, const GeoConstants& c) {
  const double r = c.earth_radius_m;
  const double d = (sat - ground).norm();
  if (d <= 0.0) throw std::domain_error("elevation_angle: coincident points");
  const double orbit_r = sat.norm();
  double arg = (r * r + d * d - orbit_r * orbit_r) / (2.0 * r * d);
  if (arg < -1.0 - 1e-12 || arg > 1.0 + 1e-12)
    throw std::domain_error("elevation_angle: inconsistent geometry (arccos argument " +
                            std::to_string(arg) + ")");
  arg = std::clamp(arg, -1.0, 1.0);
  return std::acos(arg) - M_PI / 2.0;
}

Coverage coverage(const OrbitalPlane& plane, double min_elevation_rad, const GeoConstants& c) {
  const double r = c.earth_radius_m;
  const double beta =
      std::acos(r / (r + plane.altitude_m) * std::cos(min_elevation_rad)) - min_elevation_rad;
  const double area = 2.0 * M_PI * r * r * (1.0 - std::cos(beta));
  return {beta, area};
}

double propagation_delay(double d_bs_m, double d_ss_m, double d_su_m, const GeoConstants& c) {
  if (d_bs_m < 0.0 || d_ss_m < 0.0 || d_su_m < 0.0)
    throw std::invalid_argument("propagation_delay: negative distance");
  return (d_bs_m + d_ss_m + d_su_m) / c.light_speed_m_s;
}

Vec3 ground_point(double lat_rad, double lon_rad, const GeoConstants& c) {
  const double r = c.earth_radius_m;
  return {r * std::cos(lat_rad) * std::cos(lon_rad),
          r * std::cos(lat_rad) * std::sin(lon_rad),
          r * std::sin(lat_rad)};
}

std::array<double, 2> project_to_plane(const Vec3& p, const Vec3& center, const GeoConstants& c) {
  const double r = c.earth_radius_m;
  const double pn = p.norm(), cn = center.norm();
  if (pn == 0.0 || cn == 0.0) throw std::invalid_argument("project_to_plane: zero vector");
  const Vec3 up = center * (1.0 / cn);
  // East axis: up x z-pole, falling back near the poles.
  Vec3 east{-up.y, up.x, 0.0};
  if (east.norm() < 1e-9) east = {1.0, 0.0, 0.0};
  east = east * (1.0 / east.norm());
  const Vec3 north{up.y * east.z - up.z * east.y, up.z * east.x - up.x * east.z,
                   up.x * east.y - up.y * east.x};
  const Vec3 q = p * (1.0 / pn);  // radial projection onto the unit sphere
  const double ce = std::clamp(q.dot(up), -1.0, 1.0);
  const double ang = std::acos(ce);  // great-circle angle from center
  const double ex = q.dot(east), nx = q.dot(north);
  const double t = std::hypot(ex, nx);
  if (t < 1e-15) return {0.0, 0.0};
  // Azimuthal equidistant: arc length preserved along great circles.
  return {r * ang * ex / t, r * ang * nx / t};
}

int Constellation::total_sats() const {
  int n = 0;
  for (const auto& p : planes) n += p.sats;
  return n;
}

Constellation Constellation::walker(int num_planes, int sats, double altitude_m,
                                    double inclination_rad, const GeoConstants& c,
                                    double raan_spread_rad, double phase_step_rad) {
  if (num_planes < 1 || sats < 1) throw std::invalid_argument("walker: empty constellation");
  Constellation con;
  con.consts = c;
  con.planes.reserve(num_planes);
  for (int m = 0; m < num_planes; ++m) {
    OrbitalPlane p;
    p.inclination_rad = inclination_rad;
    p.raan_rad = raan_spread_rad * m / num_planes;
    p.sats = sats;
    p.altitude_m = altitude_m;
    p.anomaly_offset_rad = phase_step_rad * m;
    con.planes.push_back(p);
  }
  return con;
}

ConstellationState propagate(const Constellation& con, long slot) {
  ConstellationState st;
  st.epoch_slot = slot;
  const int n = con.total_sats();
  st.positions.reserve(n);
  st.anomalies_rad.reserve(n);
  st.neighbors.reserve(n);
  const int per = con.sats_per_plane();
  const int planes = static_cast<int>(con.planes.size());
  for (int m = 0; m < planes; ++m) {
    const auto& plane = con.planes[m];
    const int ts = slots_per_revolution(plane, con.consts);
    for (int j = 0; j < plane.sats; ++j) {
      const double chi =
          initial_anomaly(plane, j) + 2.0 * M_PI * static_cast<double>(slot) / ts;
      st.anomalies_rad.push_back(std::fmod(chi, 2.0 * M_PI));
      st.positions.push_back(position_at_anomaly(plane, chi, con.consts));
      std::array<int, 4> nb{-1, -1, -1, -1};
      if (plane.sats > 1) {
        nb[kFore] = con.sat_id(m, (j + 1) % plane.sats);
        nb[kAft] = con.sat_id(m, (j - 1 + plane.sats) % plane.sats);
      }
      if (m > 0) nb[kLeft] = con.sat_id(m - 1, std::min(j, con.planes[m - 1].sats - 1));
      if (m + 1 < planes) nb[kRight] = con.sat_id(m + 1, std::min(j, con.planes[m + 1].sats - 1));
      // A 2-satellite ring would make fore == aft; keep one link.
      if (nb[kFore] == nb[kAft]) nb[kAft] = -1;
      st.neighbors.push_back(nb);
    }
    (void)per;
  }
  return st;
}

std::vector<Violation> validate_constellation(const ConstellationState& now,
                                              const ConstellationState& next,
                                              double d_min_m, double v_max_m_s,
                                              double elev_lb_rad, double elev_ub_rad,
                                              const std::vector<Vec3>& ground_points,
                                              const GeoConstants& c) {
  std::vector<Violation> out;
  const int n = static_cast<int>(now.positions.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = (now.positions[i] - now.positions[j]).norm();
      if (d < d_min_m) out.push_back({"min-distance", i, j, d});
    }
  }
  if (static_cast<int>(next.positions.size()) == n) {
    for (int i = 0; i < n; ++i) {
      const double v = (next.positions[i] - now.positions[i]).norm() / c.slot_seconds;
      if (v > v_max_m_s) out.push_back({"max-speed", i, -1, v});
    }
  }
  for (int g = 0; g < static_cast<int>(ground_points.size()); ++g) {
    double best = -M_PI;
    for (int i = 0; i < n; ++i)
      best = std::max(best, elevation_angle(ground_points[g], now.positions[i], c));
    if (best < elev_lb_rad || best > elev_ub_rad) out.push_back({"elevation", g, -1, best});
  }
  return out;
}

}  // namespace spaceris::geometry
