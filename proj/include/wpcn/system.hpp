// SPDX-License-Identifier: Apache-2.0
//
// System configuration, Rician channel generation, uplink zero-forcing
// processing, and rate/energy bookkeeping for the two-user MISO network.

#ifndef WPCN_SYSTEM_HPP
#define WPCN_SYSTEM_HPP

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "wpcn/eh_model.hpp"

namespace wpcn {

inline constexpr double kSpeedOfLight = 299792458.0;

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

/// Small deterministic RNG (splitmix64 core) so channel realizations are
/// reproducible across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double gaussian();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Deterministic stream split: child seed for a (label, index) pair.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

struct SystemConfig {
  int n_antennas = 4;                          // N_t >= 2
  double carrier_hz = 868e6;                   // f_c
  std::array<double, 2> distances_m = {10.0, 10.0};
  double noise_w = dbm_to_watts(-110.0);       // sigma^2
  double ricean_k = 1.0;
  double t_frame_s = 1.0;
  std::array<double, 2> q_init_j = {0.0, 0.0};
  std::array<double, 2> r_req = {1.0, 1.0};    // bits/s/Hz
  EhCircuitParams eh{2.5e-7, 1.85, 2.2e3, 2e-4};

  // Solver knobs carried alongside the physical setup.
  std::uint64_t seed = 1;
  int n_realizations = 100;
  double eps_sca = 1e-4;
  double eps_tau = 0.1;

  void validate() const;
};

struct ChannelRealization {
  Eigen::MatrixXcd h;            // N_t x 2, columns h_1, h_2
  Eigen::MatrixXcd zf_rows;      // 2 x N_t, rows f_k of (H^H H)^-1 H^H
  std::array<double, 2> eff_noise_w;  // sigma_tilde_k^2 = ||f_k||^2 sigma^2

  Eigen::VectorXcd user(int k) const { return h.col(k); }
};

struct EnergyState {
  std::array<double, 2> harvested_avg_w;  // p^d_k
  std::array<double, 2> available_j;      // E_k = q_k + p^d_k T_f
};

/// Free-space power gain (c / (4 pi d f))^2 for the given user.
double path_loss(const SystemConfig& cfg, int user);

/// Rician channel draw: sqrt(PL) (sqrt(K/(K+1)) a + sqrt(1/(K+1)) g) with a
/// half-wavelength ULA steering vector at a uniform random angle and g
/// i.i.d. circular complex Gaussian. Deterministic given the seed;
/// resamples (bounded) on an ill-conditioned H.
ChannelRealization sample_channel(const SystemConfig& cfg, std::uint64_t seed);

/// Zero-forcing rows and per-user effective noise from a full-rank H.
void zf_process(ChannelRealization& ch, double noise_w);

/// (1 - tau_bar) log2(1 + p_u / eff_noise).
double uplink_rate(double p_u, double eff_noise, double tau_bar);

struct BeamSlot {
  double beta;            // fraction of the downlink phase
  Eigen::VectorXcd w;     // beamforming vector
};

/// Average harvested power per user: tau_bar * sum_n beta_n phi(|h_k^H w_n|^2).
std::array<double, 2> harvested_power(const ChannelRealization& ch,
                                      const std::vector<BeamSlot>& slots,
                                      double tau_bar, const EhCircuitParams& eh);

EnergyState energy_state(const ChannelRealization& ch, const std::vector<BeamSlot>& slots,
                         double tau_bar, const SystemConfig& cfg);

/// Flat key-value configuration file ("key = value", '#' comments).
/// Two-user fields accept a comma-separated pair or a single shared value.
SystemConfig load_config(const std::string& path);
SystemConfig parse_config(const std::string& text);

}  // namespace wpcn

#endif
