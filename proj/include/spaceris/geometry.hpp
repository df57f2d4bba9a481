#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace spaceris::geometry {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

/// Physical constants of the simulation frame (Table-I values as defaults).
struct GeoConstants {
  double earth_radius_m = 6378100.0;
  double grav_const = 6.6743e-11;        // m^3 kg^-1 s^-2
  double earth_mass_kg = 5.9722e24;
  double light_speed_m_s = 299792458.0;
  double slot_seconds = 10.0;

  double mu() const { return grav_const * earth_mass_kg; }
};

/// One circular orbital plane: inclination i, ascending-node angle omega,
/// equally spaced satellites at altitude h_s. anomaly_offset_rad shifts the
/// whole plane's initial anomalies (inter-plane phasing).
struct OrbitalPlane {
  double inclination_rad = 53.0 * M_PI / 180.0;
  double raan_rad = 0.0;
  int sats = 22;
  double altitude_m = 500e3;
  double anomaly_offset_rad = 0.0;
};

/// Number of slots for one full revolution: round(2*pi*a^{3/2} / (dt*sqrt(mu))).
int slots_per_revolution(const OrbitalPlane& plane, const GeoConstants& c);

/// Orbital period in seconds, Kepler's third law for a circular orbit.
double orbital_period_s(double altitude_m, const GeoConstants& c);

/// Initial anomaly of satellite `sat_index` in the plane (equal spacing).
double initial_anomaly(const OrbitalPlane& plane, int sat_index);

/// Cartesian position at anomaly chi (Earth-centered frame).
Vec3 position_at_anomaly(const OrbitalPlane& plane, double chi, const GeoConstants& c);

/// Position of a satellite at the given slot; the anomaly advances by
/// 2*pi/T_s per slot so the motion stays on the orbital sphere.
Vec3 sat_position(const OrbitalPlane& plane, int sat_index, long slot, const GeoConstants& c);

/// Slant range from a ground terminal seeing the satellite at elevation
/// `alpha`: sqrt(R^2 sin^2 a + h^2 + 2hR) - R sin a. Valid for gbs-sat and
/// sat-rue links alike.
double slant_range(double elevation_rad, double altitude_m, const GeoConstants& c);

/// Inter-satellite distance from the Earth-central angle between them
/// (law of cosines on the orbital radii).
double sat_sat_distance(double central_angle_rad, double alt_a_m, double alt_b_m,
                        const GeoConstants& c);

struct LinkDistance {
  double meters = 0.0;
  bool degenerate = false;  // identical endpoints
};

/// Euclidean link distance between two points; degenerate pairs are flagged
/// rather than treated as an error.
LinkDistance link_distance(const Vec3& a, const Vec3& b);

/// Elevation of `sat` as seen from `ground` (ground on the R_e sphere):
/// arccos((R^2 + d^2 - (R+h)^2) / (2 R d)) - pi/2.
/// Throws if the arccos argument leaves [-1,1] by more than 1e-12.
double elevation_angle(const Vec3& ground, const Vec3& sat, const GeoConstants& c);

struct Coverage {
  double beta_rad = 0.0;  // angular radius of the coverage circle
  double area_m2 = 0.0;
};

/// beta = arccos(R/(R+h) * cos a_min) - a_min;  A = 2*pi*R^2*(1 - cos beta).
Coverage coverage(const OrbitalPlane& plane, double min_elevation_rad, const GeoConstants& c);

/// End-to-end propagation delay (d_bs + d_ss' + d_su) / c.
double propagation_delay(double d_bs_m, double d_ss_m, double d_su_m, const GeoConstants& c);

/// Ground point on the Earth sphere at geodetic-style lat/lon (spherical Earth).
Vec3 ground_point(double lat_rad, double lon_rad, const GeoConstants& c);

/// Great-circle-projected 2-D coordinates of `p` in the tangent frame at
/// `center` (both on or above the sphere; p is first radially projected onto
/// the sphere). Used as the clustering plane for RUEs and satellite subpoints.
std::array<double, 2> project_to_plane(const Vec3& p, const Vec3& center, const GeoConstants& c);

/// A multi-plane constellation. Satellite ids are plane-major:
/// id = plane * sats_per_plane + index.
struct Constellation {
  std::vector<OrbitalPlane> planes;
  GeoConstants consts;

  int sats_per_plane() const { return planes.empty() ? 0 : planes.front().sats; }
  int total_sats() const;
  int sat_id(int plane, int index) const { return plane * sats_per_plane() + index; }
  int plane_of(int sat_id) const { return sat_id / sats_per_plane(); }
  int index_of(int sat_id) const { return sat_id % sats_per_plane(); }

  /// Evenly spaced planes: raan = raan_spread * m / M, anomaly offset
  /// phase_step * m, all sharing inclination/altitude/count.
  static Constellation walker(int num_planes, int sats_per_plane, double altitude_m,
                              double inclination_rad, const GeoConstants& c,
                              double raan_spread_rad = 2.0 * M_PI,
                              double phase_step_rad = 0.0);
};

/// Neighbor slots in the +grid ISL topology; -1 where absent.
/// Order matches the routing action indices.
enum IslDirection { kFore = 0, kAft = 1, kLeft = 2, kRight = 3 };

struct ConstellationState {
  long epoch_slot = 0;
  std::vector<Vec3> positions;                  // by satellite id
  std::vector<double> anomalies_rad;            // by satellite id
  std::vector<std::array<int, 4>> neighbors;    // fore/aft intra-plane, left/right inter-plane
};

/// Positions, anomalies and the ISL neighbor graph at `slot`.
/// Intra-plane links wrap (the orbit is a ring); inter-plane links connect
/// equal indices of adjacent planes without wrap.
ConstellationState propagate(const Constellation& con, long slot);

struct Violation {
  std::string constraint;  // "min-distance", "max-speed", "elevation"
  int a = -1;              // satellite / ground-point id
  int b = -1;              // second satellite for pair constraints
  double value = 0.0;
};

/// Feasibility of a constellation step: pairwise distance >= d_min,
/// per-slot speed <= v_max (t_mov taken as the slot length), and, for each
/// ground point given, at least one satellite with elevation inside
/// [elev_lb, elev_ub]. Empty result means feasible.
std::vector<Violation> validate_constellation(const ConstellationState& now,
                                              const ConstellationState& next,
                                              double d_min_m, double v_max_m_s,
                                              double elev_lb_rad, double elev_ub_rad,
                                              const std::vector<Vec3>& ground_points,
                                              const GeoConstants& c);

}  // namespace spaceris::geometry
