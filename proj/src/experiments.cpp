// SPDX-License-Identifier: Apache-2.0

#include "wpcn/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wpcn/allocator.hpp"
#include "wpcn/baselines.hpp"

namespace wpcn {

void SweepPlan::validate() const {
  if (n_antennas.empty() || r_sum.empty() || schemes.empty()) {
    throw std::invalid_argument("SweepPlan: empty sweep axis");
  }
  if (realizations < 1) throw std::invalid_argument("SweepPlan: realizations < 1");
  for (const auto& s : schemes) {
    if (s != "proposed" && s != "sigmoid" && s != "linear") {
      throw std::invalid_argument("SweepPlan: unknown scheme " + s);
    }
  }
}

namespace {

ExperimentRecord run_one(const SystemConfig& cfg, const BaselineContext& ctx,
                         const ChannelRealization& ch, const std::string& scheme) {
  ExperimentRecord rec;
  rec.scheme = scheme;
  const auto t0 = std::chrono::steady_clock::now();

  auto fill_alloc = [&](const AllocateStatus status, const std::optional<ResourceAllocation>& a) {
    switch (status) {
      case AllocateStatus::Ok: rec.status = "ok"; break;
      case AllocateStatus::Trivial: rec.status = "trivial"; break;
      case AllocateStatus::Infeasible: rec.status = "infeasible"; break;
      case AllocateStatus::AllGridPointsFailed: rec.status = "solver_error"; break;
    }
    if (a) {
      rec.tau_bar = a->tau_bar;
      rec.p_dl_w = a->p_dl;
      rec.p_u1_w = a->p_u[0];
      rec.p_u2_w = a->p_u[1];
      for (const auto& slot : a->slots) {
        rec.n_active_slots += slot.w.squaredNorm() > 0.0;
      }
      rec.sca_iterations = a->diagnostics.sca_iterations;
    }
  };

  try {
    if (scheme == "proposed") {
      const auto res = allocate(ch, cfg, cfg.eps_tau, cfg.eps_sca);
      fill_alloc(res.status, res.allocation);
    } else {
      const auto model = scheme == "sigmoid" ? BaselineModel::Sigmoid : BaselineModel::Linear;
      const auto res = baseline_allocate(ch, ctx, model, cfg.eps_tau);
      fill_alloc(res.status, res.allocation);
    }
  } catch (const std::exception&) {
    rec.status = "solver_error";
  }

  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace

std::vector<ExperimentRecord> run_sweep(const SweepPlan& plan, const SystemConfig& base_cfg,
                                        int jobs) {
  plan.validate();
  base_cfg.validate();

  struct Task {
    int nt;
    int realization;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t ni = 0; ni < plan.n_antennas.size(); ++ni) {
    for (int r = 0; r < plan.realizations; ++r) {
      const std::uint64_t seed = derive_seed(plan.master_seed, ni, static_cast<std::uint64_t>(r));
      tasks.push_back({plan.n_antennas[ni], r, seed});
    }
  }

  // The surrogate fit depends only on the circuit parameters.
  const SurrogateFit shared_fit = fit_surrogates(base_cfg.eh);

  auto run_task = [&](const Task& task) {
    std::vector<ExperimentRecord> out;
    SystemConfig cfg = base_cfg;
    cfg.n_antennas = task.nt;
    const ChannelRealization ch = sample_channel(cfg, task.seed);
    for (double rsum : plan.r_sum) {
      SystemConfig c = cfg;
      c.r_req = {rsum / 2.0, rsum / 2.0};  // equal per-user split
      const BaselineContext ctx(c, shared_fit);
      for (const auto& scheme : plan.schemes) {
        ExperimentRecord rec = run_one(c, ctx, ch, scheme);
        rec.seed = task.seed;
        rec.realization_id = task.realization;
        rec.n_antennas = task.nt;
        rec.r_sum_bits = rsum;
        out.push_back(std::move(rec));
      }
    }
    return out;
  };

  std::vector<ExperimentRecord> records;
  if (jobs <= 1) {
    for (const auto& task : tasks) {
      auto part = run_task(task);
      records.insert(records.end(), part.begin(), part.end());
    }
  } else {
    std::vector<std::future<std::vector<ExperimentRecord>>> futures;
    std::size_t next = 0;
    while (next < tasks.size() || !futures.empty()) {
      while (static_cast<int>(futures.size()) < jobs && next < tasks.size()) {
        futures.push_back(std::async(std::launch::async, run_task, tasks[next++]));
      }
      auto part = futures.front().get();
      futures.erase(futures.begin());
      records.insert(records.end(), part.begin(), part.end());
    }
  }

  // Deterministic emission order regardless of execution order.
  auto scheme_rank = [&](const std::string& s) {
    for (std::size_t i = 0; i < plan.schemes.size(); ++i)
      if (plan.schemes[i] == s) return i;
    return plan.schemes.size();
  };
  std::sort(records.begin(), records.end(), [&](const auto& a, const auto& b) {
    return std::tuple(a.n_antennas, a.realization_id, a.r_sum_bits, scheme_rank(a.scheme)) <
           std::tuple(b.n_antennas, b.realization_id, b.r_sum_bits, scheme_rank(b.scheme));
  });
  return records;
}

std::vector<SummaryRow> aggregate(const std::vector<ExperimentRecord>& records) {
  std::map<std::tuple<int, double, std::string>, SummaryRow> cells;
  for (const auto& rec : records) {
    auto& row = cells[{rec.n_antennas, rec.r_sum_bits, rec.scheme}];
    row.n_antennas = rec.n_antennas;
    row.r_sum_bits = rec.r_sum_bits;
    row.scheme = rec.scheme;
    row.n_records += 1;
    if (rec.status == "ok") {
      row.n_ok += 1;
      row.mean_p_dl_w += rec.p_dl_w;
      row.mean_iterations += rec.sca_iterations;
    }
    if (rec.status == "ok" || rec.status == "trivial") row.feasible_fraction += 1.0;
  }
  std::vector<SummaryRow> out;
  for (auto& [key, row] : cells) {
    if (row.n_ok > 0) {
      row.mean_p_dl_w /= row.n_ok;
      row.mean_iterations /= row.n_ok;
    }
    row.feasible_fraction /= row.n_records;
    out.push_back(row);
  }
  return out;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string records_csv_header() {
  return "seed,realization_id,n_antennas,r_sum_bits,scheme,status,tau_bar,"
         "p_dl_w,p_u1_w,p_u2_w,n_active_slots,sca_iterations,wall_ms";
}

std::string to_csv(const ExperimentRecord& r) {
  std::ostringstream os;
  os << r.seed << ',' << r.realization_id << ',' << r.n_antennas << ',' << fmt(r.r_sum_bits)
     << ',' << r.scheme << ',' << r.status << ',' << fmt(r.tau_bar) << ',' << fmt(r.p_dl_w) << ','
     << fmt(r.p_u1_w) << ',' << fmt(r.p_u2_w) << ',' << r.n_active_slots << ','
     << r.sca_iterations << ',' << fmt(r.wall_ms);
  return os.str();
}

void write_records_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << records_csv_header() << '\n';
  for (const auto& rec : records) out << to_csv(rec) << '\n';
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "n_antennas,r_sum_bits,scheme,n_records,n_ok,mean_p_dl_w,feasible_fraction,"
         "mean_iterations\n";
  for (const auto& row : rows) {
    out << row.n_antennas << ',' << fmt(row.r_sum_bits) << ',' << row.scheme << ','
        << row.n_records << ',' << row.n_ok << ','
        << (row.n_ok > 0 ? fmt(row.mean_p_dl_w) : std::string())  // absent when nothing solved
        << ',' << fmt(row.feasible_fraction) << ',' << fmt(row.mean_iterations) << '\n';
  }
}

}  // namespace wpcn
