// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: EH-curve dumps, feasibility reports, single-shot
// allocation, and Monte-Carlo sweeps.

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "wpcn/allocator.hpp"
#include "wpcn/baselines.hpp"
#include "wpcn/experiments.hpp"
#include "wpcn/feasibility.hpp"

namespace {

using namespace wpcn;

ChannelRealization channel_from_file(const std::string& path, const SystemConfig& cfg) {
  // Format: first line N_t, then one line per user with N_t "re im" pairs.
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open channel file: " + path);
  int nt = 0;
  in >> nt;
  if (nt != cfg.n_antennas) throw std::runtime_error("channel file antenna count mismatch");
  ChannelRealization ch;
  ch.h.resize(nt, 2);
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < nt; ++j) {
      double re, im;
      if (!(in >> re >> im)) throw std::runtime_error("channel file truncated");
      ch.h(j, k) = {re, im};
    }
  }
  zf_process(ch, cfg.noise_w);
  return ch;
}

void print_allocation(const ResourceAllocation& a, const ChannelRealization& ch) {
  std::cout << "{\n  \"tau_bar\": " << a.tau_bar << ",\n  \"p_dl_w\": " << a.p_dl
            << ",\n  \"p_dl_dbm\": " << (a.p_dl > 0 ? watts_to_dbm(a.p_dl) : -999.0)
            << ",\n  \"p_u_w\": [" << a.p_u[0] << ", " << a.p_u[1] << "],\n  \"rates\": ["
            << a.achieved_rates[0] << ", " << a.achieved_rates[1] << "],\n  \"slots\": [\n";
  for (std::size_t n = 0; n < a.slots.size(); ++n) {
    const auto& slot = a.slots[n];
    std::cout << "    {\"beta\": " << slot.beta << ", \"power_w\": " << slot.w.squaredNorm()
              << ", \"received_w\": [";
    for (int k = 0; k < 2; ++k) {
      const std::complex<double> g = ch.h.col(k).adjoint() * slot.w;
      std::cout << std::norm(g) << (k == 0 ? ", " : "");
    }
    std::cout << "]}" << (n + 1 < a.slots.size() ? "," : "") << "\n";
  }
  std::cout << "  ],\n  \"sca_iterations\": " << a.diagnostics.sca_iterations << "\n}\n";
}

int cmd_eval_eh(const SystemConfig& cfg, const std::string& out_path, int points) {
  const SurrogateFit fit = fit_surrogates(cfg.eh);
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot write " + out_path);
    os = &file;
  }
  *os << "x_w,phi_w,phi_prime,sigmoid_w,linear_w\n";
  (*os) << std::setprecision(12);
  for (int i = 0; i <= points; ++i) {
    const double x = cfg.eh.a_s_sq * 1.2 * i / points;
    const double d = (x > 0 && x < cfg.eh.a_s_sq) ? phi_prime(x, cfg.eh) : 0.0;
    *os << x << ',' << phi(x, cfg.eh) << ',' << d << ',' << sigmoid_eval(x, fit.sigmoid) << ','
        << fit.linear.eta * x << '\n';
  }
  return 0;
}

int cmd_feasibility(const SystemConfig& cfg, std::uint64_t seed, int samples) {
  const ChannelRealization ch = sample_channel(cfg, seed);
  const auto verdict = check_feasibility(cfg, ch);
  std::cout << "effective_noise_w: " << ch.eff_noise_w[0] << ' ' << ch.eff_noise_w[1] << '\n';
  switch (verdict.status) {
    case FeasibilityStatus::Infeasible:
      std::cout << "verdict: infeasible\n";
      break;
    case FeasibilityStatus::TrivialSolution:
      std::cout << "verdict: trivial\np_u_w: " << (*verdict.trivial_powers)[0] << ' '
                << (*verdict.trivial_powers)[1] << '\n';
      break;
    case FeasibilityStatus::NonTrivial: {
      const auto& iv = *verdict.interval;
      std::cout << "verdict: non-trivial\ntau_min: " << iv.tau_min << "\ntau_max: " << iv.tau_max
                << "\ntau_min_k: " << iv.tau_min_k[0] << ' ' << iv.tau_min_k[1]
                << "\ntau_max_k: " << iv.tau_max_k[0] << ' ' << iv.tau_max_k[1] << '\n';
      break;
    }
  }
  std::cout << "tau_bar,f_1_w,f_2_w\n" << std::setprecision(12);
  for (int i = 1; i < samples; ++i) {
    const double tau = static_cast<double>(i) / samples;
    std::cout << tau << ',' << demand_f(tau, 0, cfg, ch.eff_noise_w[0]) << ','
              << demand_f(tau, 1, cfg, ch.eff_noise_w[1]) << '\n';
  }
  return 0;
}

int cmd_allocate(const SystemConfig& cfg, std::uint64_t seed, const std::string& channel_file,
                 const std::string& scheme, const std::string& curve_path) {
  const ChannelRealization ch =
      channel_file.empty() ? sample_channel(cfg, seed) : channel_from_file(channel_file, cfg);

  AllocateStatus status;
  std::optional<ResourceAllocation> alloc;
  std::vector<std::pair<double, double>> curve;
  if (scheme == "proposed") {
    auto res = allocate(ch, cfg, cfg.eps_tau, cfg.eps_sca);
    status = res.status;
    alloc = res.allocation;
    curve = res.pdl_curve;
    if (status == AllocateStatus::AllGridPointsFailed) std::cerr << res.diagnostic;
  } else {
    const BaselineContext ctx(cfg);
    auto res = baseline_allocate(ch, ctx, scheme == "sigmoid" ? BaselineModel::Sigmoid
                                                              : BaselineModel::Linear,
                                 cfg.eps_tau);
    status = res.status;
    alloc = res.allocation;
  }

  switch (status) {
    case AllocateStatus::Ok:
    case AllocateStatus::Trivial:
      print_allocation(*alloc, ch);
      break;
    case AllocateStatus::Infeasible:
      std::cout << "{\"status\": \"infeasible\"}\n";
      return 2;
    case AllocateStatus::AllGridPointsFailed:
      std::cout << "{\"status\": \"solver_error\"}\n";
      return 3;
  }
  if (!curve_path.empty() && !curve.empty()) {
    std::ofstream f(curve_path);
    f << "tau_bar,p_dl_w\n" << std::setprecision(12);
    for (const auto& [tau, pdl] : curve) f << tau << ',' << pdl << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-user wireless-powered network resource allocation"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "configuration file")->required();

  auto* eval = app.add_subcommand("eval-eh", "dump the harvest law and surrogates as CSV");
  std::string eval_out;
  int eval_points = 200;
  eval->add_option("--out", eval_out, "output CSV (default stdout)");
  eval->add_option("--points", eval_points, "grid points");

  auto* feas = app.add_subcommand("feasibility", "feasibility verdict and demand curves");
  std::uint64_t feas_seed = 0;
  int feas_samples = 100;
  feas->add_option("--seed", feas_seed, "channel seed (default: config seed)");
  feas->add_option("--samples", feas_samples, "demand-curve sample count");

  auto* alloc = app.add_subcommand("allocate", "solve one realization");
  std::uint64_t alloc_seed = 0;
  std::string channel_file, scheme = "proposed", curve_path;
  alloc->add_option("--seed", alloc_seed, "channel seed (default: config seed)");
  alloc->add_option("--channel", channel_file, "explicit channel file");
  alloc->add_option("--scheme", scheme, "proposed|sigmoid|linear")
      ->check(CLI::IsMember({"proposed", "sigmoid", "linear"}));
  alloc->add_option("--curve", curve_path, "write the per-tau P_DL curve to CSV");

  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep to records.csv/summary.csv");
  std::string out_dir = ".";
  std::vector<int> nts;
  std::vector<double> rsums;
  std::vector<std::string> schemes = {"proposed", "sigmoid", "linear"};
  std::uint64_t sweep_seed = 0;
  int jobs = 1, sweep_realizations = 0;
  sweep->add_option("--out", out_dir, "output directory")->required();
  sweep->add_option("--nt", nts, "antenna counts");
  sweep->add_option("--rsum", rsums, "sum-rate targets, bits/s/Hz");
  sweep->add_option("--schemes", schemes, "schemes to run");
  sweep->add_option("--seed", sweep_seed, "master seed (default: config seed)");
  sweep->add_option("--realizations", sweep_realizations, "realizations (default: config)");
  sweep->add_option("--jobs", jobs, "parallel workers");

  CLI11_PARSE(app, argc, argv);

  try {
    const wpcn::SystemConfig cfg = wpcn::load_config(config_path);
    if (eval->parsed()) return cmd_eval_eh(cfg, eval_out, eval_points);
    if (feas->parsed()) return cmd_feasibility(cfg, feas_seed ? feas_seed : cfg.seed, feas_samples);
    if (alloc->parsed()) {
      return cmd_allocate(cfg, alloc_seed ? alloc_seed : cfg.seed, channel_file, scheme,
                          curve_path);
    }
    if (sweep->parsed()) {
      wpcn::SweepPlan plan;
      plan.n_antennas = nts.empty() ? std::vector<int>{cfg.n_antennas} : nts;
      plan.r_sum = rsums.empty() ? std::vector<double>{cfg.r_req[0] + cfg.r_req[1]} : rsums;
      plan.schemes = schemes;
      plan.realizations = sweep_realizations > 0 ? sweep_realizations : cfg.n_realizations;
      plan.master_seed = sweep_seed ? sweep_seed : cfg.seed;
      const auto records = wpcn::run_sweep(plan, cfg, jobs);
      wpcn::write_records_csv(records, out_dir + "/records.csv");
      wpcn::write_summary_csv(wpcn::aggregate(records), out_dir + "/summary.csv");
      int errored = 0;
      for (const auto& rec : records)
        if (rec.status == "solver_error") ++errored;
      std::cout << "records: " << records.size() << " (solver_error: " << errored << ")\n";
      return errored == static_cast<int>(records.size()) ? 1 : 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
