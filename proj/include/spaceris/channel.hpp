#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "spaceris/geometry.hpp"
#include "spaceris/rng.hpp"

namespace spaceris::channel {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct RainConfig {
  double phi_r = 0.8;       // ITU-R P.838 coefficient
  double mu_r = 0.7;        // ITU-R P.838 exponent
  double rate_mm_h = 0.0;   // R_0.01
  double path_km = 2.0;     // effective path length L_E
};

struct CloudConfig {
  double xi_c = 0.4;         // dB/km per g/m^3
  double chi_c_g_m3 = 0.0;   // fluid water density
  double path_km = 2.0;
};

struct PlasmaConfig {
  double n_e_per_m3 = 0.0;     // ionospheric electron density
  double f_col_hz = 1e4;       // collision frequency (config input, no closed form)
  double b_avg_tesla = 45e-6;  // mean geomagnetic field
  double wave_number = 0.0;    // k; 0 means derive 2*pi*f_c/c
};

struct LossConfig {
  double fc_hz = 0.1e12;
  double kappa_abs_per_m = 1e-5;  // molecular absorption (config input)
  RainConfig rain;
  CloudConfig cloud;
  PlasmaConfig plasma;
  double temperature_k = 1000.0;
  double pressure_pa = 101325.0;
};

/// Eq.-4 style decomposition of one GBS -> RIS chain -> RUE link.
/// total_db == spread+abs+rain+cloud+plasma - gains_db - array_db by
/// construction, so the dB identity is exact.
struct LinkBudget {
  double spread_db = 0.0;
  double abs_db = 0.0;
  double rain_db = 0.0;
  double cloud_db = 0.0;
  double plasma_db = 0.0;
  double gains_db = 0.0;        // G_b * G_u * d_x * d_y * A^2
  double array_db = 0.0;        // |sum_n sqrt(F_n) / prod(hop distances)|^2
  double nrp_product = 0.0;     // F_tot of the first element (all five factors)
  double faraday_rad = 0.0;     // depolarization over the path; reported only
  double total_db = 0.0;
  double total_linear = 1.0;
  double d_bs_m = 0.0;
  double d_ss_m = 0.0;          // sum of inter-satellite legs (0 if none)
  double d_su_m = 0.0;
};

/// Passive reflecting panel; amplitude is 1 by the lossless assumption.
struct RisPanel {
  int num_elements = 16;
  double amplitude = 1.0;
  double element_dx_m = 0.0015;  // half wavelength at 0.1 THz
  double element_dy_m = 0.0015;
  std::vector<double> phases_rad;  // size num_elements, each in [0, 2*pi)

  static RisPanel uniform(int n, double phase = 0.0, double dx = 0.0015, double dy = 0.0015);
};

/// 20*log10(4*pi*d*f/c).
double spreading_loss_db(double f_hz, double d_m, const geometry::GeoConstants& c);

/// 10*log10(e^{kappa d}) = 4.3429448...*kappa*d.
double absorption_loss_db(double kappa_per_m, double d_m);

struct WeatherLoss {
  double rain_db = 0.0;
  double cloud_db = 0.0;
};

/// rain = phi_R * R_0.01^mu_R * L_E;  cloud = xi_C * chi_C * L_E (dB).
WeatherLoss weather_loss_db(const LossConfig& cfg);

struct PlasmaMetrics {
  double f_plasma_hz = 0.0;
  double faraday_rad_per_m = 0.0;
  double atten_per_m = 0.0;  // nepers/m; folded into the budget as exp(atten*d)
};

PlasmaMetrics plasma_metrics(const LossConfig& cfg);

/// Element radiation pattern: cos^3(alpha) on [0, pi/2], 0 behind the panel.
double nrp(double elev_rad, double azim_rad);

/// Full link budget over a hop chain. `hop_distances_m` is
/// (d_bs, [d_ss'...], d_su), at least two entries; `f_tot_per_element`
/// holds the per-element NRP products (size 1 broadcasts).
/// Throws on a zero hop distance ("degenerate-link").
LinkBudget total_loss(const LossConfig& cfg, const std::vector<double>& hop_distances_m,
                      double gain_gbs, double gain_rue, const RisPanel& panel,
                      const std::vector<double>& f_tot_per_element,
                      const geometry::GeoConstants& c);

/// Rician mixture sqrt(K/(K+1))*los + sqrt(1/(K+1))*scatter,
/// scatter entries i.i.d. CN(0,1).
CMat sample_rician(int rows, int cols, double k_factor, const CMat& los, Rng& rng);

/// diag(A e^{j theta_1}, ..., A e^{j theta_N}).
CMat phase_matrix(const RisPanel& panel);

/// Multi-hop cascade: hops[0] is N_1 x K (GBS side), hops[r] is
/// N_{r+1} x N_r; `terminal` is the last-RIS -> RUE vector.
struct CascadeChannel {
  std::vector<CMat> hops;
  CVec terminal;
  double rician_k_h = 10.0;
  double rician_k_g = 10.0;
  CMat beamformer;      // K x U, matched filter with unit-norm columns
  double noise_psd = 0.0;  // the N_o value Eq. (8) divides by (caller scales by bandwidth)
};

/// Row vector g^T * Phi_R H_R * ... * Phi_1 H_1 (1 x K).
Eigen::RowVectorXcd cascade_row(const CascadeChannel& cascade, const std::vector<RisPanel>& panels);

/// Eq. (8): p * |v * g^T prod(Phi_r H_r) w|^2 / (N_o * L_tot).
/// v=0 yields 0 by definition.
double snr(const CascadeChannel& cascade, const std::vector<RisPanel>& panels,
           const LinkBudget& budget, double power_w, int assoc, int beam_column = 0);

/// B_u * log2(1 + gamma).
double rate(double bandwidth_hz, double gamma);

/// Upper bound of |g^T prod(Phi H) w| over all unit-modulus phase choices:
/// the absolute-value chain |g|^T |H_R| ... |H_1| |w|. Achieved exactly on
/// rank-one LoS cascades by conjugate alignment.
double coherent_amplitude_bound(const CascadeChannel& cascade, double amplitude, int beam_column = 0);

/// Phases that align a rank-one LoS cascade hop by hop (the analytic
/// coherent configuration; used as the trained-policy oracle and by sweeps).
std::vector<RisPanel> align_phases_rank_one(const CascadeChannel& cascade, const RisPanel& proto,
                                            int beam_column = 0);

/// Deterministic LoS steering matrix for one hop: entry (n, k) carries phase
/// 2*pi*(d + n*pitch*sin(elev_n) + k*pitch_tx*sin(elev_k))/lambda. Unit modulus.
CMat los_steering(int rows, int cols, double hop_distance_m, double lambda_m,
                  double rx_pitch_m, double tx_pitch_m, double rx_angle_rad,
                  double tx_angle_rad);

/// Matched-filter beamformer for a set of effective per-RUE channels
/// (rows of `effective`, one per RUE): w_u = h_u^H / |h_u|, columns
/// scaled so tr(W^H diag(p) W) <= p_total.
CMat matched_beamformer(const CMat& effective_rows, const Eigen::VectorXd& power_w,
                        double p_total_w);

}  // namespace spaceris::channel
