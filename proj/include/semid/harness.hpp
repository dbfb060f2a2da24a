#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semid/corpus.hpp"
#include "semid/evaluation.hpp"
#include "semid/neural.hpp"
#include "semid/sessions.hpp"

namespace semid {

enum class AttackMethod { kPairwise, kNeural, kBaseline };

std::string attack_name(AttackMethod attack);
AttackMethod attack_from_name(const std::string& name);

struct TrainSettings {
  double learning_rate = 0.01;
  int epochs = 200;
  int batch_size = 32;
  int hidden_units = 100;

  bool operator==(const TrainSettings&) const = default;
};

// Full protocol description. Every random decision downstream derives from
// master_seed, so a config pins the whole experiment.
struct ExperimentConfig {
  // where the corpus came from; informational echo in reports
  std::string corpus_file;
  std::optional<SynthConfig> synthetic;

  PartitionConfig partition;
  std::vector<int> sample_sizes{300, 500, 750, 1000};
  int trials = 25;
  std::vector<AttackMethod> attacks{AttackMethod::kPairwise, AttackMethod::kNeural,
                                    AttackMethod::kBaseline};
  std::optional<int> defense_p;
  // users reserved for classifier training, disjoint from every evaluation
  // sample; 0 picks the default (100, or 50 under the homepage strategy)
  int train_users = 0;
  std::uint64_t master_seed = 0;
  double epsilon = kDefaultEpsilon;
  TrainSettings train;

  bool operator==(const ExperimentConfig&) const = default;
};

struct AttackTrialResult {
  AttackMethod attack = AttackMethod::kPairwise;
  MetricsPoint best;  // the trial's best-F1 operating point
  PrCurve curve;

  bool operator==(const AttackTrialResult&) const = default;
};

struct TrialReport {
  int trial_index = 0;
  std::vector<int> sampled_users;   // evaluation users, ascending
  std::vector<int> training_users;  // ascending; empty when no classifier ran
  std::vector<AttackTrialResult> attacks;

  bool operator==(const TrialReport&) const = default;
};

// Mean of per-trial best-F1 points; reach becomes fractional under averaging.
struct AggregateMetrics {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double reach = 0.0;

  bool operator==(const AggregateMetrics&) const = default;
};

struct AttackSummary {
  AttackMethod attack = AttackMethod::kPairwise;
  AggregateMetrics mean;
  MetricsPoint best;                     // point of the best-F1 trial
  int best_trial = 0;
  std::vector<MetricsPoint> trial_best;  // one point per trial

  bool operator==(const AttackSummary&) const = default;
};

struct SampleSizeResult {
  int sample_size = 0;
  std::vector<AttackSummary> attacks;

  bool operator==(const SampleSizeResult&) const = default;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SampleSizeResult> results;

  bool operator==(const ExperimentReport&) const = default;
};

struct CurveKey {
  AttackMethod attack = AttackMethod::kPairwise;
  int sample_size = 0;
  int trial = 0;

  bool operator==(const CurveKey&) const = default;
};

struct ExperimentOutput {
  ExperimentReport report;
  std::vector<std::pair<CurveKey, PrCurve>> curves;
};

// Balanced labeled pairs for classifier training: every same-user pair plus
// an equal number of different-user pairs sampled uniformly without
// replacement.
std::vector<LabeledPair> build_training_pairs(const SessionSet& set, Rng& rng);

class Experiment {
 public:
  Experiment(const Corpus& corpus, ExperimentConfig config);

  // One sampled trial: evaluation users drawn without replacement, training
  // users (when the neural attack runs) drawn disjointly, optional defense,
  // every configured attack scored and swept.
  TrialReport run_trial(int sample_size, int trial_index) const;

  // All sample sizes x trials, aggregated into mean and best-trial rows.
  // Under the homepage strategy the full eligible user set is evaluated
  // instead of sampling.
  ExperimentOutput run() const;

  const ExperimentConfig& config() const { return config_; }
  const SessionSet& full_set() const { return full_set_; }
  // users surviving the >=2-session filter, available for sampling
  const std::vector<int>& eligible_users() const { return full_set_.users; }
  int effective_train_users() const;

 private:
  bool full_set_mode() const {
    return config_.partition.strategy == PartitionStrategy::kHomepage;
  }
  bool neural_enabled() const;
  SessionSet sessions_of(const std::vector<int>& users) const;

  ExperimentConfig config_;
  SessionSet full_set_;
};

std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);

std::string experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

// Writes dir/report.json plus one dir/{attack}_{size}_{trial}.csv per curve.
// Deterministic: rerunning overwrites byte-identically.
void export_report(const ExperimentOutput& output, const std::string& dir);
ExperimentReport load_report(const std::string& path);

}  // namespace semid
