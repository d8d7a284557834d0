// SPDX-License-Identifier: Apache-2.0

#include "wpcn/system.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace wpcn {

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  have_spare_ = true;
  spare_ = r * std::sin(2.0 * M_PI * u2);
  return r * std::cos(2.0 * M_PI * u2);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  Rng mix(master ^ (0xA0761D6478BD642FULL * (stream + 1)) ^ (0xE7037ED1A0B428DBULL * (index + 1)));
  return mix.next_u64();
}

void SystemConfig::validate() const {
  if (n_antennas < 2) throw std::invalid_argument("SystemConfig: n_antennas must be >= 2");
  if (!(carrier_hz > 0 && noise_w > 0 && t_frame_s > 0 && ricean_k >= 0)) {
    throw std::invalid_argument("SystemConfig: non-positive physical quantity");
  }
  for (int k = 0; k < 2; ++k) {
    if (!(distances_m[k] > 0)) throw std::invalid_argument("SystemConfig: distance must be > 0");
    if (!(q_init_j[k] >= 0)) throw std::invalid_argument("SystemConfig: q_init_j must be >= 0");
    if (!(r_req[k] >= 0)) throw std::invalid_argument("SystemConfig: r_req must be >= 0");
  }
  eh.validate();
}

double path_loss(const SystemConfig& cfg, int user) {
  const double d = cfg.distances_m.at(static_cast<std::size_t>(user));
  const double g = kSpeedOfLight / (4.0 * M_PI * d * cfg.carrier_hz);
  return g * g;
}

ChannelRealization sample_channel(const SystemConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const int nt = cfg.n_antennas;
  Rng rng(seed);

  const double kf = cfg.ricean_k;
  const double los = std::sqrt(kf / (kf + 1.0));
  const double nlos = std::sqrt(1.0 / (kf + 1.0));

  for (int attempt = 0; attempt < 64; ++attempt) {
    ChannelRealization ch;
    ch.h.resize(nt, 2);
    for (int k = 0; k < 2; ++k) {
      const double pl = std::sqrt(path_loss(cfg, k));
      const double angle = (rng.uniform() - 0.5) * M_PI;  // uniform in (-pi/2, pi/2)
      const double spatial = M_PI * std::sin(angle);      // half-wavelength ULA
      for (int j = 0; j < nt; ++j) {
        const std::complex<double> steer(std::cos(spatial * j), std::sin(spatial * j));
        const std::complex<double> scatter(rng.gaussian() * M_SQRT1_2,
                                           rng.gaussian() * M_SQRT1_2);
        ch.h(j, k) = pl * (los * steer + nlos * scatter);
      }
    }
    const Eigen::Matrix2cd gram = ch.h.adjoint() * ch.h;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(gram);
    const double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(1);
    if (lmin > 0.0 && std::sqrt(lmax / lmin) < 1e8) {
      zf_process(ch, cfg.noise_w);
      return ch;
    }
  }
  throw std::runtime_error("sample_channel: persistent rank-deficient realization");
}

void zf_process(ChannelRealization& ch, double noise_w) {
  const Eigen::Matrix2cd gram = ch.h.adjoint() * ch.h;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(gram);
  if (!(es.eigenvalues()(0) > 0.0) ||
      std::sqrt(es.eigenvalues()(1) / es.eigenvalues()(0)) >= 1e8) {
    throw std::runtime_error("zf_process: ill-conditioned channel matrix");
  }
  ch.zf_rows = gram.inverse() * ch.h.adjoint();
  for (int k = 0; k < 2; ++k) {
    ch.eff_noise_w[static_cast<std::size_t>(k)] = ch.zf_rows.row(k).squaredNorm() * noise_w;
  }
}

double uplink_rate(double p_u, double eff_noise, double tau_bar) {
  if (!(p_u >= 0.0) || !(tau_bar >= 0.0 && tau_bar < 1.0)) {
    throw std::domain_error("uplink_rate: invalid arguments");
  }
  return (1.0 - tau_bar) * std::log2(1.0 + p_u / eff_noise);
}

std::array<double, 2> harvested_power(const ChannelRealization& ch,
                                      const std::vector<BeamSlot>& slots,
                                      double tau_bar, const EhCircuitParams& eh) {
  std::array<double, 2> p = {0.0, 0.0};
  for (const auto& slot : slots) {
    for (int k = 0; k < 2; ++k) {
      const std::complex<double> g = ch.h.col(k).adjoint() * slot.w;
      p[static_cast<std::size_t>(k)] += slot.beta * phi(std::norm(g), eh);
    }
  }
  for (auto& v : p) v *= tau_bar;
  return p;
}

EnergyState energy_state(const ChannelRealization& ch, const std::vector<BeamSlot>& slots,
                         double tau_bar, const SystemConfig& cfg) {
  EnergyState es;
  es.harvested_avg_w = harvested_power(ch, slots, tau_bar, cfg.eh);
  for (int k = 0; k < 2; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    es.available_j[ku] = cfg.q_init_j[ku] + es.harvested_avg_w[ku] * cfg.t_frame_s;
  }
  return es;
}

namespace {

std::array<double, 2> parse_pair(const std::string& v, const std::string& key) {
  const auto comma = v.find(',');
  if (comma == std::string::npos) {
    const double x = std::stod(v);
    return {x, x};
  }
  try {
    return {std::stod(v.substr(0, comma)), std::stod(v.substr(comma + 1))};
  } catch (const std::exception&) {
    throw std::invalid_argument("config: malformed pair for key " + key);
  }
}

}  // namespace

SystemConfig parse_config(const std::string& text) {
  SystemConfig cfg;
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!key.empty() && !val.empty()) kv[key] = val;
  }

  for (const auto& [key, val] : kv) {
    if (key == "n_antennas") cfg.n_antennas = std::stoi(val);
    else if (key == "carrier_hz") cfg.carrier_hz = std::stod(val);
    else if (key == "distance_m") cfg.distances_m = parse_pair(val, key);
    else if (key == "noise_dbm") cfg.noise_w = dbm_to_watts(std::stod(val));
    else if (key == "ricean_k") cfg.ricean_k = std::stod(val);
    else if (key == "t_frame_s") cfg.t_frame_s = std::stod(val);
    else if (key == "q_init_j") cfg.q_init_j = parse_pair(val, key);
    else if (key == "r_req_bits") cfg.r_req = parse_pair(val, key);
    else if (key == "eh.mu") cfg.eh.mu = std::stod(val);
    else if (key == "eh.nu") cfg.eh.nu = std::stod(val);
    else if (key == "eh.lambda") cfg.eh.lambda = std::stod(val);
    else if (key == "eh.a_s_sq") cfg.eh.a_s_sq = std::stod(val);
    else if (key == "seed") cfg.seed = std::stoull(val);
    else if (key == "n_realizations") cfg.n_realizations = std::stoi(val);
    else if (key == "eps_sca") cfg.eps_sca = std::stod(val);
    else if (key == "eps_tau") cfg.eps_tau = std::stod(val);
    else throw std::invalid_argument("config: unknown key " + key);
  }
  cfg.validate();
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace wpcn
