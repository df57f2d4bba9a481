#include "spaceris/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace spaceris::channel {

namespace {
constexpr double kElectronCharge = 1.6021e-19;   // C (Table I)
constexpr double kElectronMass = 9.109e-31;      // kg
constexpr double kVacuumPermittivity = 8.854e-12;  // F/m
constexpr double kDbPerNeper = 10.0 / M_LN10;      // 4.342944...

double to_db(double linear) { return 10.0 * std::log10(linear); }
}  // namespace

RisPanel RisPanel::uniform(int n, double phase, double dx, double dy) {
  RisPanel p;
  p.num_elements = n;
  p.element_dx_m = dx;
  p.element_dy_m = dy;
  p.phases_rad.assign(n, phase);
  return p;
}

double spreading_loss_db(double f_hz, double d_m, const geometry::GeoConstants& c) {
  if (f_hz <= 0.0 || d_m <= 0.0) throw std::invalid_argument("spreading_loss: f, d must be positive");
  return 20.0 * std::log10(4.0 * M_PI * d_m * f_hz / c.light_speed_m_s);
}

double absorption_loss_db(double kappa_per_m, double d_m) {
  if (kappa_per_m < 0.0) throw std::invalid_argument("absorption_loss: negative kappa");
  return kDbPerNeper * kappa_per_m * d_m;
}

WeatherLoss weather_loss_db(const LossConfig& cfg) {
  if (cfg.rain.rate_mm_h < 0.0 || cfg.cloud.chi_c_g_m3 < 0.0)
    throw std::invalid_argument("weather_loss: negative rate/density");
  WeatherLoss w;
  w.rain_db = cfg.rain.rate_mm_h > 0.0
                  ? cfg.rain.phi_r * std::pow(cfg.rain.rate_mm_h, cfg.rain.mu_r) * cfg.rain.path_km
                  : 0.0;
  w.cloud_db = cfg.cloud.xi_c * cfg.cloud.chi_c_g_m3 * cfg.cloud.path_km;
  return w;
}

PlasmaMetrics plasma_metrics(const LossConfig& cfg) {
  PlasmaMetrics m;
  if (cfg.plasma.n_e_per_m3 <= 0.0) return m;
  m.f_plasma_hz = kElectronCharge / (2.0 * M_PI) *
                  std::sqrt(cfg.plasma.n_e_per_m3 / (kVacuumPermittivity * kElectronMass));
  m.faraday_rad_per_m =
      2.36e4 * cfg.plasma.b_avg_tesla * cfg.plasma.n_e_per_m3 / (cfg.fc_hz * cfg.fc_hz);
  const double k = cfg.plasma.wave_number > 0.0
                       ? cfg.plasma.wave_number
                       : 2.0 * M_PI * cfg.fc_hz / 299792458.0;
  const double ratio = m.f_plasma_hz / cfg.fc_hz;
  m.atten_per_m = 0.5 * k * ratio * ratio * (cfg.plasma.f_col_hz / cfg.fc_hz) * (1.0 + 0.5 * ratio);
  return m;
}

double nrp(double elev_rad, double azim_rad) {
  (void)azim_rad;  // pattern is azimuth-symmetric
  if (elev_rad < 0.0 || elev_rad > M_PI) throw std::invalid_argument("nrp: elevation outside [0, pi]");
  if (elev_rad > M_PI / 2.0) return 0.0;
  const double c = std::cos(elev_rad);
  return c * c * c;
}

LinkBudget total_loss(const LossConfig& cfg, const std::vector<double>& hops,
                      double gain_gbs, double gain_rue, const RisPanel& panel,
                      const std::vector<double>& f_tot, const geometry::GeoConstants& c) {
  if (hops.size() < 2) throw std::invalid_argument("total_loss: need at least GBS and RUE hops");
  if (f_tot.empty()) throw std::invalid_argument("total_loss: empty NRP factors");
  double d_total = 0.0, d_prod = 1.0;
  for (double d : hops) {
    if (d <= 0.0) throw std::invalid_argument("degenerate-link: zero hop distance");
    d_total += d;
    d_prod *= d;
  }

  LinkBudget b;
  b.d_bs_m = hops.front();
  b.d_su_m = hops.back();
  for (std::size_t i = 1; i + 1 < hops.size(); ++i) b.d_ss_m += hops[i];

  b.spread_db = spreading_loss_db(cfg.fc_hz, d_total, c);
  b.abs_db = absorption_loss_db(cfg.kappa_abs_per_m, d_total);
  const WeatherLoss w = weather_loss_db(cfg);
  b.rain_db = w.rain_db;
  b.cloud_db = w.cloud_db;
  const PlasmaMetrics pm = plasma_metrics(cfg);
  b.plasma_db = kDbPerNeper * pm.atten_per_m * d_total;
  b.faraday_rad = pm.faraday_rad_per_m * d_total;

  double array_sum = 0.0;
  for (int n = 0; n < panel.num_elements; ++n) {
    const double f = f_tot[f_tot.size() == 1 ? 0 : n];
    if (f < 0.0) throw std::invalid_argument("total_loss: negative NRP product");
    array_sum += std::sqrt(f);
  }
  b.nrp_product = f_tot.front();
  const double array_factor = array_sum / d_prod;  // |sum sqrt(F)/(d1 d2 ... )|
  if (array_factor <= 0.0) throw std::invalid_argument("total_loss: zero array factor");
  b.array_db = to_db(array_factor * array_factor);

  const double a2 = panel.amplitude * panel.amplitude;
  b.gains_db = to_db(gain_gbs * gain_rue * panel.element_dx_m * panel.element_dy_m * a2);

  b.total_db = b.spread_db + b.abs_db + b.rain_db + b.cloud_db + b.plasma_db - b.gains_db - b.array_db;
  b.total_linear = std::pow(10.0, b.total_db / 10.0);
  return b;
}

CMat sample_rician(int rows, int cols, double k_factor, const CMat& los, Rng& rng) {
  if (k_factor < 0.0) throw std::invalid_argument("sample_rician: negative K");
  if (los.rows() != rows || los.cols() != cols)
    throw std::invalid_argument("sample_rician: LoS shape mismatch");
  const double w_los = std::sqrt(k_factor / (k_factor + 1.0));
  const double w_nlos = std::sqrt(1.0 / (k_factor + 1.0));
  CMat out(rows, cols);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const Cplx scatter(rng.normal() * inv_sqrt2, rng.normal() * inv_sqrt2);
      out(i, j) = w_los * los(i, j) + w_nlos * scatter;
    }
  return out;
}

CMat phase_matrix(const RisPanel& panel) {
  if (static_cast<int>(panel.phases_rad.size()) != panel.num_elements)
    throw std::invalid_argument("phase_matrix: phase vector size mismatch");
  CMat m = CMat::Zero(panel.num_elements, panel.num_elements);
  for (int n = 0; n < panel.num_elements; ++n)
    m(n, n) = panel.amplitude * std::exp(Cplx(0.0, panel.phases_rad[n]));
  return m;
}

Eigen::RowVectorXcd cascade_row(const CascadeChannel& cascade, const std::vector<RisPanel>& panels) {
  const std::size_t r = cascade.hops.size();
  if (panels.size() != r) throw std::invalid_argument("cascade_row: panel count != hop count");
  if (cascade.terminal.size() != cascade.hops.back().rows())
    throw std::invalid_argument("cascade_row: terminal size mismatch");
  Eigen::RowVectorXcd row = cascade.terminal.transpose();
  for (std::size_t i = r; i-- > 0;) {
    row = row * phase_matrix(panels[i]);
    row = row * cascade.hops[i];
  }
  return row;
}

double snr(const CascadeChannel& cascade, const std::vector<RisPanel>& panels,
           const LinkBudget& budget, double power_w, int assoc, int beam_column) {
  if (assoc == 0) return 0.0;
  if (cascade.noise_psd <= 0.0) throw std::invalid_argument("snr: noise must be positive");
  const Eigen::RowVectorXcd row = cascade_row(cascade, panels);
  const Cplx s = row * cascade.beamformer.col(beam_column);
  return power_w * std::norm(s) / (cascade.noise_psd * budget.total_linear);
}

double rate(double bandwidth_hz, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("rate: negative SNR");
  return bandwidth_hz * std::log2(1.0 + gamma);
}

double coherent_amplitude_bound(const CascadeChannel& cascade, double amplitude, int beam_column) {
  Eigen::VectorXd v = cascade.beamformer.col(beam_column).cwiseAbs();
  for (const auto& h : cascade.hops) v = amplitude * (h.cwiseAbs() * v);
  return cascade.terminal.cwiseAbs().dot(v);
}

std::vector<RisPanel> align_phases_rank_one(const CascadeChannel& cascade, const RisPanel& proto,
                                            int beam_column) {
  std::vector<RisPanel> panels;
  panels.reserve(cascade.hops.size());
  CVec e = cascade.beamformer.col(beam_column);
  for (std::size_t r = 0; r < cascade.hops.size(); ++r) {
    CVec y = cascade.hops[r] * e;
    RisPanel p = proto;
    p.num_elements = static_cast<int>(y.size());
    p.phases_rad.resize(p.num_elements);
    const bool last = (r + 1 == cascade.hops.size());
    for (int n = 0; n < p.num_elements; ++n) {
      const Cplx target = last ? Cplx(cascade.terminal(n) * y(n)) : y(n);
      double th = -std::arg(target);
      if (th < 0.0) th += 2.0 * M_PI;
      p.phases_rad[n] = th;
    }
    panels.push_back(p);
    e = phase_matrix(panels.back()) * y;
  }
  return panels;
}

CMat los_steering(int rows, int cols, double hop_distance_m, double lambda_m,
                  double rx_pitch_m, double tx_pitch_m, double rx_angle_rad,
                  double tx_angle_rad) {
  if (lambda_m <= 0.0) throw std::invalid_argument("los_steering: lambda must be positive");
  CMat m(rows, cols);
  const double base = 2.0 * M_PI * hop_distance_m / lambda_m;
  const double krx = 2.0 * M_PI * rx_pitch_m * std::sin(rx_angle_rad) / lambda_m;
  const double ktx = 2.0 * M_PI * tx_pitch_m * std::sin(tx_angle_rad) / lambda_m;
  for (int n = 0; n < rows; ++n)
    for (int k = 0; k < cols; ++k) m(n, k) = std::exp(Cplx(0.0, base + n * krx + k * ktx));
  return m;
}

CMat matched_beamformer(const CMat& effective_rows, const Eigen::VectorXd& power_w,
                        double p_total_w) {
  const int users = static_cast<int>(effective_rows.rows());
  const int antennas = static_cast<int>(effective_rows.cols());
  if (power_w.size() != users) throw std::invalid_argument("matched_beamformer: power size mismatch");
  CMat w(antennas, users);
  for (int u = 0; u < users; ++u) {
    CVec h = effective_rows.row(u).conjugate().transpose();
    const double n = h.norm();
    w.col(u) = n > 0.0 ? CVec(h / n) : CVec::Zero(antennas);
  }
  // tr(W^H diag(p) W): with unit-norm columns this is sum(p); rescale if over budget.
  double tr = 0.0;
  for (int u = 0; u < users; ++u) tr += power_w(u) * w.col(u).squaredNorm();
  if (tr > p_total_w && tr > 0.0) w *= std::sqrt(p_total_w / tr);
  return w;
}

}  // namespace spaceris::channel
