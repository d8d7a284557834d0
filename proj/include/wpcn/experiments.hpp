// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo experiment driver: seeded realization sweeps over antenna
// counts, sum-rate targets, and schemes, with CSV persistence.

#ifndef WPCN_EXPERIMENTS_HPP
#define WPCN_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "wpcn/system.hpp"

namespace wpcn {

struct ExperimentRecord {
  std::uint64_t seed = 0;       // channel seed of the realization
  int realization_id = 0;
  int n_antennas = 0;
  double r_sum_bits = 0.0;
  std::string scheme;           // proposed | sigmoid | linear
  std::string status;           // ok | infeasible | trivial | solver_error
  double tau_bar = 0.0;
  double p_dl_w = 0.0;
  double p_u1_w = 0.0;
  double p_u2_w = 0.0;
  int n_active_slots = 0;
  int sca_iterations = 0;
  double wall_ms = 0.0;
};

struct SweepPlan {
  std::vector<int> n_antennas;
  std::vector<double> r_sum;     // split equally across the two users
  std::vector<std::string> schemes = {"proposed", "sigmoid", "linear"};
  int realizations = 100;
  std::uint64_t master_seed = 1;

  void validate() const;
};

/// Runs the sweep. One channel per (n_antennas, realization), reused across
/// rate points and schemes so comparisons are paired. Records come back
/// sorted by a deterministic key; identical plan and seed give identical
/// records apart from wall_ms.
std::vector<ExperimentRecord> run_sweep(const SweepPlan& plan, const SystemConfig& base_cfg,
                                        int jobs = 1);

struct SummaryRow {
  int n_antennas = 0;
  double r_sum_bits = 0.0;
  std::string scheme;
  int n_records = 0;
  int n_ok = 0;
  double mean_p_dl_w = 0.0;      // over ok records; meaningless when n_ok == 0
  double feasible_fraction = 0.0;  // (ok + trivial) / total
  double mean_iterations = 0.0;
};

std::vector<SummaryRow> aggregate(const std::vector<ExperimentRecord>& records);

std::string records_csv_header();
std::string to_csv(const ExperimentRecord& rec);
void write_records_csv(const std::vector<ExperimentRecord>& records, const std::string& path);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);

}  // namespace wpcn

#endif
