#pragma once

#include "algnn/config.hpp"
#include "algnn/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace algnn {

/// One trial of a stability experiment. The scalar columns of layer and
/// network rows hold per-layer maxima; exact per-layer values live in
/// `constituents` ("layer:c:b:delta:l0:l1:supT:supDT:q" records joined by
/// ';', with an optional trailing ":degenerate" marker when the delta
/// pairing hit a degenerate eigenvalue cluster), from which total_bound is
/// recomputable to 1e-12.
struct TrialRow {
  int trial = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int degree = 0;
  double epsilon = 0.0;
  double t1_norm = 0.0;
  double delta = 0.0;
  double l0 = 0.0;
  double l1 = 0.0;
  double sup_t_norm = 0.0;
  double sup_dt_norm = 0.0;
  double lhs = 0.0;
  double first_order_bound = 0.0;
  double remainder_budget = 0.0;
  double total_bound = 0.0;
  double ratio = 0.0;
  bool passed = false;
  std::string constituents;
  bool numerical_failure = false;
  std::string error;
};

struct StabilityReport {
  std::string experiment;
  std::vector<TrialRow> rows;
  double pass_rate = 0.0;
  double max_ratio = 0.0;
  double max_delta = 0.0;
  bool any_failure = false;
  bool any_numerical_failure = false;
  std::vector<std::string> notes;
};

// splitmix64-style mixing; per-trial seeds are mix_seed(base, trial).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

StabilityReport run_filter_stability(const ExperimentConfig& cfg);
StabilityReport run_layer_stability(const ExperimentConfig& cfg);
StabilityReport run_network_stability(const ExperimentConfig& cfg);

struct ResponseSummary {
  double top_l0 = 0.0;
  double top_l1 = 0.0;
  double bottom_l0 = 0.0;
  double bottom_l1 = 0.0;
  double l1_ratio = 0.0;           // bottom_l1 / top_l1
  double passband_response = 0.0;  // |p_top(center)|
  double edge_response = 0.0;      // |p_top(spectrum edge)|
  double selectivity_ratio = 0.0;  // passband_response / edge_response
  bool constraints_met = false;
};

// Writes response.svg and response.txt into cfg.out_dir.
ResponseSummary run_response_plot(const ExperimentConfig& cfg);

struct SweepResult {
  std::string parameter;
  std::vector<double> values;
  std::vector<StabilityReport> reports;  // one per value, same order
};

SweepResult run_sweep(const ExperimentConfig& cfg);

void write_report_csv(const std::string& path, const StabilityReport& report,
                      bool timestamp);
void write_summary(const std::string& path, const StabilityReport& report);
void write_sweep_csv(const std::string& path, const SweepResult& sweep, bool timestamp);
void write_sweep_svg(const std::string& path, const SweepResult& sweep);
void write_sweep_summary(const std::string& path, const SweepResult& sweep);

// Full config-driven entry point used by the CLI: runs the configured
// experiment, writes outputs under cfg.out_dir, and returns the process
// exit code (0 pass, 2 bound violation, 3 config error, 4 numerical).
int run_experiment(const ExperimentConfig& cfg);

}  // namespace algnn
