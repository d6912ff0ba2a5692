#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fraclab {

enum class Verdict { pass, fail, skip };
std::string to_string(Verdict v);

struct ExperimentConfig {
  std::string name;
  std::vector<double> s_values;  // empty selects the experiment's default grid
  std::string domain;            // "a,b;c,d", experiment-dependent meaning
  double half_length = 0.0;      // 0 selects defaults
  int points = 0;
  double h_max = 0.0;
  int J = 16;
  std::uint64_t seed = 42;
  int trials = 0;                // 0 selects defaults
  bool quick = false;
  bool near_threshold = false;   // admit s in (1.45, 1.5) for the polarization branch
  std::map<std::string, double> tolerances;
  std::map<std::string, std::string> extra;

  double tol(const std::string& key, double fallback) const;
  std::vector<double> list(const std::string& key, std::vector<double> fallback) const;
};

// Parse line-based "key = value" text; '#' starts a comment.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> load_config_file(const std::string& path);
// Apply entries; "<experiment>.<key>" overrides "<key>" for that experiment.
void apply_config(ExperimentConfig& cfg, const std::map<std::string, std::string>& entries);

struct TrialRecord {
  std::string experiment;
  int trial = 0;
  std::string inputs_digest;
  std::vector<std::pair<std::string, double>> inputs;
  std::vector<std::pair<std::string, double>> measured;
  std::vector<std::pair<std::string, std::string>> labels;
  // Signed so that >= 0 means the claim held.
  std::vector<std::pair<std::string, double>> margins;
  Verdict verdict = Verdict::skip;
  std::string note;
};

std::string inputs_digest(const std::string& canonical);

std::vector<TrialRecord> run_polarization(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_truncation_probe(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_polya_szego(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_two_ball(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_faber_krahn(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_max_principle(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_appendix(const ExperimentConfig& cfg);

const std::vector<std::string>& experiment_names();
std::vector<TrialRecord> run_experiment(const std::string& name, const ExperimentConfig& cfg);

struct SummaryRow {
  std::string experiment;
  int trials = 0;
  int passes = 0;
  int fails = 0;
  int skips = 0;
  double min_margin = 0.0;
};

SummaryRow summarize(const std::string& experiment, const std::vector<TrialRecord>& records);

struct RunAllResult {
  std::vector<SummaryRow> rows;
  std::map<std::string, std::vector<TrialRecord>> records;
  bool ok() const;
};

RunAllResult run_all(const ExperimentConfig& base,
                     const std::map<std::string, std::string>& config_entries = {});

}  // namespace fraclab
