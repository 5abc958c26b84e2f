#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mastlab {

enum class ExperimentKind {
  mast_scaling,
  cascade_stats,
  coupling_check,
  audit_suite,
  bounds_suite,
};

std::string_view to_string(ExperimentKind k);
ExperimentKind parse_kind(std::string_view name);

inline constexpr int kConfigSchema = 1;

struct ExperimentConfig {
  int schema = kConfigSchema;
  ExperimentKind kind = ExperimentKind::mast_scaling;
  std::vector<int> grid;  // n values, or depths k for cascade/audit runs
  std::size_t replicates = 1;
  std::uint64_t seed = 0;
  double epsilon = 0.2;
  double alpha = 0.05;
  double delta = 0.1;
  std::size_t threads = 0;  // 0 = hardware concurrency
  std::size_t grid_size = 1u << 14;  // excursion grid per piece
  std::size_t bootstrap = 200;
  std::optional<double> budget_cells;  // MAST DP cells; refuse above
  // bounds-suite sizes
  int tail_m = 20;
  std::size_t subset_n = 10000;
  std::size_t subset_m = 1000;
  std::size_t subset_m2 = 1000;
  std::size_t pairs_per_tree = 50;
  std::string output;

  // Replicates >= 1, grid non-empty and strictly increasing, per-kind ranges.
  void validate() const;
};

// Parses a JSON document; unknown fields and schema mismatches are errors.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);

struct ExperimentRow {
  std::string experiment;
  std::map<std::string, double> params;
  std::string statistic;
  double value = 0;
  double standard_error = 0;
  std::size_t replicates = 0;
  double wall_seconds = 0;
  std::uint64_t seed = 0;
  std::uint64_t substream = 0;  // grid index; replicate r uses derive_seed(derive_seed(seed, substream), r)
};

struct ScalingFit {
  double beta = 0;
  double intercept = 0;
  double band_low = 0;   // 2.5% bootstrap quantile of the slope
  double band_high = 0;  // 97.5%
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::optional<ScalingFit> fit;
};

ExperimentResult run_mast_scaling(const ExperimentConfig& cfg);
ExperimentResult run_cascade_stats(const ExperimentConfig& cfg);
ExperimentResult run_coupling_check(const ExperimentConfig& cfg);
ExperimentResult run_audit_suite(const ExperimentConfig& cfg);
ExperimentResult run_bounds_suite(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Total DP cells a scaling run would touch.
double mast_scaling_cost(const ExperimentConfig& cfg);

void write_jsonl(const ExperimentResult& r, std::ostream& out);
void write_csv(const ExperimentResult& r, std::ostream& out);

}  // namespace mastlab
