#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stablefields/excursion.hpp"
#include "stablefields/fields.hpp"
#include "stablefields/theory.hpp"

// Experiment orchestration: config parsing, replicated Monte Carlo with
// deterministic per-replicate streams, theory comparison, CSV/JSON reports.

namespace stablefields {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class FieldKind { gaussian, subgaussian, harmonisable, concatenated };

struct ExperimentConfig {
  FieldKind kind = FieldKind::gaussian;
  double alpha = 0.0;
  double sigma = 1.0;
  double lambda2 = 1.0;  // gaussian/subgaussian isotropic second spectral moment
  SpectralMeasure measure;  // harmonisable/concatenated
  int n_prime = 1;
  int truncation = 1000;

  Rectangle rectangle;
  std::vector<int> resolution;

  std::vector<double> levels;
  int replications = 1;
  std::uint64_t master_seed = 0;
  int threads = 1;

  bool measure_ec = true;
  bool measure_lk = false;
  bool measure_upcrossings = false;
  bool target_exact = true;
  bool target_asymptotic = true;
  bool target_conditional = true;
};

// Parses the key-value config format (declarative TOML subset: [section],
// key = number | string | bool | array).  Throws ConfigError with
// "file:line: message" anchoring.
ExperimentConfig parse_config(std::istream& in, const std::string& filename);
ExperimentConfig parse_config_file(const std::string& path);

struct ReportRow {
  double u = 0.0;
  double mean_ec = 0.0;
  double stderr_ec = 0.0;
  long long n = 0;
  std::optional<double> pred_exact;
  std::optional<double> pred_asymp;  // constant * u^{-alpha}
  std::optional<double> ratio;       // mean / preferred prediction
  std::optional<double> ratio_se;
  std::vector<double> mean_lk;  // when lk measurement requested
  std::optional<double> mean_upcrossings;  // N = 1 with upcrossing measurement
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReportRow> rows;
  std::optional<AsymptoticPrediction> asymptote;
  long long failed_replicates = 0;
  double wall_seconds = 0.0;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

struct ConvergenceRow {
  double u = 0.0;
  double ratio = 0.0;  // u^alpha * mean / constant
  double se = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  int plateau_begin = -1;  // largest u-window with ratio spread < 10%
  int plateau_end = -1;    // half-open [begin, end)
};

ConvergenceTable convergence_table(const ExperimentReport& report, double alpha);

// CSV with header u,mean_ec,stderr,n,pred_exact,pred_asymp,ratio,ratio_se;
// missing predictions are empty fields.  Deterministic byte-for-byte.
void write_report_csv(const ExperimentReport& report, std::ostream& out);

// Versioned JSON summary with config echo and truncation sensitivity.
void write_report_json(const ExperimentReport& report, std::ostream& out);

}  // namespace stablefields
