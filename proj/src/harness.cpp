#include "semid/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "semid/defense.hpp"
#include "semid/pairwise.hpp"

namespace semid {
namespace {

using nlohmann::json;

json point_to_json(const MetricsPoint& p) {
  return json{{"threshold", p.threshold},
              {"precision", p.precision},
              {"recall", p.recall},
              {"f1", p.f1},
              {"reach", p.reach}};
}

MetricsPoint point_from_json(const json& j) {
  MetricsPoint p;
  p.threshold = j.at("threshold").get<double>();
  p.precision = j.at("precision").get<double>();
  p.recall = j.at("recall").get<double>();
  p.f1 = j.at("f1").get<double>();
  p.reach = j.at("reach").get<int>();
  return p;
}

json aggregate_to_json(const AggregateMetrics& m) {
  return json{{"threshold", m.threshold},
              {"precision", m.precision},
              {"recall", m.recall},
              {"f1", m.f1},
              {"reach", m.reach}};
}

AggregateMetrics aggregate_from_json(const json& j) {
  AggregateMetrics m;
  m.threshold = j.at("threshold").get<double>();
  m.precision = j.at("precision").get<double>();
  m.recall = j.at("recall").get<double>();
  m.f1 = j.at("f1").get<double>();
  m.reach = j.at("reach").get<double>();
  return m;
}

json synth_to_json(const SynthConfig& c) {
  return json{{"n_users", c.n_users},
              {"dirichlet_alpha", c.dirichlet_alpha},
              {"trace_len_mean", c.trace_len_mean},
              {"trace_len_min", c.trace_len_min},
              {"seed", c.seed}};
}

SynthConfig synth_from_json(const json& j) {
  SynthConfig c;
  c.n_users = j.at("n_users").get<int>();
  c.dirichlet_alpha = j.at("dirichlet_alpha").get<double>();
  c.trace_len_mean = j.at("trace_len_mean").get<int>();
  c.trace_len_min = j.at("trace_len_min").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

std::string attack_name(AttackMethod attack) {
  switch (attack) {
    case AttackMethod::kPairwise: return "pairwise";
    case AttackMethod::kNeural: return "neural";
    case AttackMethod::kBaseline: return "baseline";
  }
  throw std::logic_error("unknown attack");
}

AttackMethod attack_from_name(const std::string& name) {
  if (name == "pairwise") return AttackMethod::kPairwise;
  if (name == "neural") return AttackMethod::kNeural;
  if (name == "baseline") return AttackMethod::kBaseline;
  throw std::invalid_argument("unknown attack method: " + name);
}

std::vector<LabeledPair> build_training_pairs(const SessionSet& set, Rng& rng) {
  const std::size_t n = set.sessions.size();
  std::vector<Fingerprint> prints;
  prints.reserve(n);
  for (const auto& session : set.sessions) prints.push_back(fingerprint(session));

  std::vector<LabeledPair> positives;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> negative_pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (set.sessions[i].user_id == set.sessions[j].user_id) {
        positives.push_back({pair_features(prints[i], prints[j]), true});
      } else {
        negative_pairs.emplace_back(static_cast<std::uint32_t>(i),
                                    static_cast<std::uint32_t>(j));
      }
    }
  }

  // equal number of negatives, uniform without replacement
  const std::size_t want = std::min(positives.size(), negative_pairs.size());
  for (std::size_t t = 0; t < want; ++t) {
    const std::size_t r = t + rng.below(negative_pairs.size() - t);
    std::swap(negative_pairs[t], negative_pairs[r]);
  }

  std::vector<LabeledPair> result = std::move(positives);
  for (std::size_t t = 0; t < want; ++t) {
    const auto [i, j] = negative_pairs[t];
    result.push_back({pair_features(prints[i], prints[j]), false});
  }
  return result;
}

Experiment::Experiment(const Corpus& corpus, ExperimentConfig config)
    : config_(std::move(config)) {
  if (config_.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (config_.attacks.empty()) throw std::invalid_argument("no attacks configured");
  full_set_ = build_session_set(corpus, config_.partition);
}

bool Experiment::neural_enabled() const {
  return std::find(config_.attacks.begin(), config_.attacks.end(),
                   AttackMethod::kNeural) != config_.attacks.end();
}

int Experiment::effective_train_users() const {
  if (config_.train_users > 0) return config_.train_users;
  return full_set_mode() ? 50 : 100;
}

SessionSet Experiment::sessions_of(const std::vector<int>& users) const {
  std::unordered_set<int> wanted(users.begin(), users.end());
  SessionSet subset;
  subset.users.assign(users.begin(), users.end());
  std::sort(subset.users.begin(), subset.users.end());
  int next_id = 0;
  for (const auto& session : full_set_.sessions) {
    if (!wanted.contains(session.user_id)) continue;
    Session copy = session;
    copy.session_id = next_id++;
    subset.sessions.push_back(std::move(copy));
  }
  return subset;
}

TrialReport Experiment::run_trial(int sample_size, int trial_index) const {
  const auto& eligible = full_set_.users;
  const bool need_training = neural_enabled();
  const int train_count = need_training ? effective_train_users() : 0;
  const std::uint64_t size_key =
      full_set_mode() ? 0 : static_cast<std::uint64_t>(sample_size);

  std::vector<int> shuffled = eligible;
  Rng sample_rng = Rng::derive(
      config_.master_seed,
      {stream::kSample, size_key, static_cast<std::uint64_t>(trial_index)});

  std::vector<int> eval_users;
  std::vector<int> train_users;
  if (full_set_mode()) {
    // complete eligible set, minus the users reserved for training
    if (train_count >= static_cast<int>(shuffled.size())) {
      throw std::runtime_error("insufficient eligible users for training split");
    }
    for (int t = 0; t < train_count; ++t) {
      const std::size_t r = t + sample_rng.below(shuffled.size() - t);
      std::swap(shuffled[t], shuffled[r]);
    }
    train_users.assign(shuffled.begin(), shuffled.begin() + train_count);
    eval_users.assign(shuffled.begin() + train_count, shuffled.end());
  } else {
    if (sample_size < 1) throw std::invalid_argument("sample size must be >= 1");
    if (sample_size + train_count > static_cast<int>(shuffled.size())) {
      throw std::runtime_error(
          "insufficient eligible users: need " +
          std::to_string(sample_size + train_count) + ", have " +
          std::to_string(shuffled.size()));
    }
    // evaluation sample first so it does not depend on the attack list
    for (int t = 0; t < sample_size + train_count; ++t) {
      const std::size_t r = t + sample_rng.below(shuffled.size() - t);
      std::swap(shuffled[t], shuffled[r]);
    }
    eval_users.assign(shuffled.begin(), shuffled.begin() + sample_size);
    train_users.assign(shuffled.begin() + sample_size,
                       shuffled.begin() + sample_size + train_count);
  }

  SessionSet eval_set = sessions_of(eval_users);
  if (config_.defense_p) {
    eval_set = apply_defense(
        eval_set, DefenseConfig{*config_.defense_p,
                                derive_seed(config_.master_seed,
                                            {stream::kDefense, size_key,
                                             static_cast<std::uint64_t>(trial_index), 0})});
  }
  const GroundTruth truth = ground_truth_pairs(eval_set);

  TrialReport report;
  report.trial_index = trial_index;
  report.sampled_users = eval_set.users;

  report.training_users = train_users;
  std::sort(report.training_users.begin(), report.training_users.end());

  std::optional<MlpParams> model;
  if (need_training) {
    SessionSet train_set = sessions_of(train_users);
    if (config_.defense_p) {
      train_set = apply_defense(
          train_set,
          DefenseConfig{*config_.defense_p,
                        derive_seed(config_.master_seed,
                                    {stream::kDefense, size_key,
                                     static_cast<std::uint64_t>(trial_index), 1})});
    }
    Rng negatives_rng = Rng::derive(
        config_.master_seed,
        {stream::kNegativePairs, size_key, static_cast<std::uint64_t>(trial_index)});
    const auto pairs = build_training_pairs(train_set, negatives_rng);

    TrainConfig tc;
    tc.learning_rate = config_.train.learning_rate;
    tc.epochs = config_.train.epochs;
    tc.batch_size = config_.train.batch_size;
    tc.hidden_units = config_.train.hidden_units;
    tc.seed = derive_seed(config_.master_seed, {stream::kTrain, size_key,
                                                static_cast<std::uint64_t>(trial_index)});
    model = train(pairs, tc).params;
  }

  for (AttackMethod attack : config_.attacks) {
    ScoredPairs scores;
    switch (attack) {
      case AttackMethod::kPairwise:
        scores = score_all_pairs(eval_set, config_.epsilon);
        break;
      case AttackMethod::kNeural:
        scores = score_all_pairs_nn(*model, eval_set);
        break;
      case AttackMethod::kBaseline:
        scores = baseline_scores(
            eval_set, derive_seed(config_.master_seed,
                                  {stream::kBaseline, size_key,
                                   static_cast<std::uint64_t>(trial_index)}));
        break;
    }
    AttackTrialResult result;
    result.attack = attack;
    result.curve = pr_sweep(scores, truth);
    result.best = best_f1(result.curve);
    report.attacks.push_back(std::move(result));
  }
  return report;
}

ExperimentOutput Experiment::run() const {
  ExperimentOutput output;
  output.report.config = config_;

  std::vector<int> sizes = config_.sample_sizes;
  if (full_set_mode()) {
    const int train_count = neural_enabled() ? effective_train_users() : 0;
    sizes = {static_cast<int>(full_set_.users.size()) - train_count};
  }

  for (int size : sizes) {
    SampleSizeResult size_result;
    size_result.sample_size = size;

    std::vector<TrialReport> trials;
    trials.reserve(config_.trials);
    for (int trial = 0; trial < config_.trials; ++trial) {
      trials.push_back(run_trial(size, trial));
      for (const auto& attack_result : trials.back().attacks) {
        output.curves.push_back(
            {CurveKey{attack_result.attack, size, trial}, attack_result.curve});
      }
    }

    for (std::size_t a = 0; a < config_.attacks.size(); ++a) {
      AttackSummary summary;
      summary.attack = config_.attacks[a];
      for (const auto& trial : trials) {
        const MetricsPoint& p = trial.attacks[a].best;
        summary.trial_best.push_back(p);
        summary.mean.threshold += p.threshold;
        summary.mean.precision += p.precision;
        summary.mean.recall += p.recall;
        summary.mean.f1 += p.f1;
        summary.mean.reach += p.reach;
      }
      const double inv = 1.0 / static_cast<double>(config_.trials);
      summary.mean.threshold *= inv;
      summary.mean.precision *= inv;
      summary.mean.recall *= inv;
      summary.mean.f1 *= inv;
      summary.mean.reach *= inv;

      summary.best_trial = 0;
      for (int trial = 1; trial < config_.trials; ++trial) {
        if (summary.trial_best[trial].f1 > summary.trial_best[summary.best_trial].f1) {
          summary.best_trial = trial;
        }
      }
      summary.best = summary.trial_best[summary.best_trial];
      size_result.attacks.push_back(std::move(summary));
    }
    output.report.results.push_back(std::move(size_result));
  }
  return output;
}

std::string experiment_config_to_json(const ExperimentConfig& c) {
  json j;
  j["corpus_file"] = c.corpus_file;
  j["synthetic"] = c.synthetic ? synth_to_json(*c.synthetic) : json(nullptr);
  j["partition"] = {
      {"strategy",
       c.partition.strategy == PartitionStrategy::kHomepage ? "homepage" : "random"},
      {"k", c.partition.k},
      {"seed", c.partition.seed},
      {"homepage_category", c.partition.homepage_category}};
  j["sample_sizes"] = c.sample_sizes;
  j["trials"] = c.trials;
  auto& attacks = j["attacks"] = json::array();
  for (AttackMethod attack : c.attacks) attacks.push_back(attack_name(attack));
  j["defense_p"] = c.defense_p ? json(*c.defense_p) : json(nullptr);
  j["train_users"] = c.train_users;
  j["master_seed"] = c.master_seed;
  j["epsilon"] = c.epsilon;
  j["train"] = {{"learning_rate", c.train.learning_rate},
                {"epochs", c.train.epochs},
                {"batch_size", c.train.batch_size},
                {"hidden_units", c.train.hidden_units}};
  return j.dump(2) + "\n";
}

namespace {

ExperimentConfig config_from_json_obj(const json& j) {
  ExperimentConfig c;
  c.corpus_file = j.value("corpus_file", std::string{});
  if (j.contains("synthetic") && !j.at("synthetic").is_null()) {
    c.synthetic = synth_from_json(j.at("synthetic"));
  }
  if (j.contains("partition")) {
    const auto& p = j.at("partition");
    const auto strategy = p.value("strategy", std::string("random"));
    if (strategy == "homepage") {
      c.partition.strategy = PartitionStrategy::kHomepage;
    } else if (strategy == "random") {
      c.partition.strategy = PartitionStrategy::kRandom;
    } else {
      throw std::invalid_argument("unknown partition strategy: " + strategy);
    }
    c.partition.k = p.value("k", 1);
    c.partition.seed = p.value("seed", std::uint64_t{0});
    c.partition.homepage_category = p.value("homepage_category", 1);
  }
  if (j.contains("sample_sizes")) c.sample_sizes = j.at("sample_sizes").get<std::vector<int>>();
  c.trials = j.value("trials", 25);
  if (j.contains("attacks")) {
    c.attacks.clear();
    for (const auto& name : j.at("attacks")) {
      c.attacks.push_back(attack_from_name(name.get<std::string>()));
    }
  }
  if (j.contains("defense_p") && !j.at("defense_p").is_null()) {
    c.defense_p = j.at("defense_p").get<int>();
  }
  c.train_users = j.value("train_users", 0);
  c.master_seed = j.value("master_seed", std::uint64_t{0});
  c.epsilon = j.value("epsilon", kDefaultEpsilon);
  if (j.contains("train")) {
    const auto& t = j.at("train");
    c.train.learning_rate = t.value("learning_rate", 0.01);
    c.train.epochs = t.value("epochs", 200);
    c.train.batch_size = t.value("batch_size", 32);
    c.train.hidden_units = t.value("hidden_units", 100);
  }
  return c;
}

}  // namespace

ExperimentConfig experiment_config_from_json(const std::string& text) {
  return config_from_json_obj(json::parse(text));
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return experiment_config_from_json(buffer.str());
}

std::string report_to_json(const ExperimentReport& report) {
  json j;
  j["config"] = json::parse(experiment_config_to_json(report.config));
  auto& results = j["results"] = json::array();
  for (const auto& size_result : report.results) {
    json entry;
    entry["sample_size"] = size_result.sample_size;
    auto& attacks = entry["attacks"] = json::array();
    for (const auto& summary : size_result.attacks) {
      json s;
      s["attack"] = attack_name(summary.attack);
      s["mean"] = aggregate_to_json(summary.mean);
      s["best"] = point_to_json(summary.best);
      s["best_trial"] = summary.best_trial;
      auto& trials = s["trials"] = json::array();
      for (const auto& point : summary.trial_best) trials.push_back(point_to_json(point));
      attacks.push_back(std::move(s));
    }
    results.push_back(std::move(entry));
  }
  return j.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentReport report;
  report.config = config_from_json_obj(j.at("config"));
  for (const auto& entry : j.at("results")) {
    SampleSizeResult size_result;
    size_result.sample_size = entry.at("sample_size").get<int>();
    for (const auto& s : entry.at("attacks")) {
      AttackSummary summary;
      summary.attack = attack_from_name(s.at("attack").get<std::string>());
      summary.mean = aggregate_from_json(s.at("mean"));
      summary.best = point_from_json(s.at("best"));
      summary.best_trial = s.at("best_trial").get<int>();
      for (const auto& point : s.at("trials")) {
        summary.trial_best.push_back(point_from_json(point));
      }
      size_result.attacks.push_back(std::move(summary));
    }
    report.results.push_back(std::move(size_result));
  }
  return report;
}

void export_report(const ExperimentOutput& output, const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(std::filesystem::path(dir) / "report.json");
    if (!out) throw std::runtime_error("cannot write report.json in " + dir);
    out << report_to_json(output.report);
  }
  for (const auto& [key, curve] : output.curves) {
    const std::string name = attack_name(key.attack) + "_" +
                             std::to_string(key.sample_size) + "_" +
                             std::to_string(key.trial) + ".csv";
    save_curve_csv(curve, (std::filesystem::path(dir) / name).string());
  }
}

ExperimentReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return report_from_json(buffer.str());
}

}  // namespace semid
