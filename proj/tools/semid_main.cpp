// semid: semantic identification attacks on categorized browsing logs.
//
// Subcommands cover the full pipeline: ingest/synth produce corpora,
// partition turns traces into sessions, attack/train/evaluate score and
// measure linkage, defend injects noise pages, experiment runs the whole
// sampled protocol from a JSON config.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "semid/corpus.hpp"
#include "semid/defense.hpp"
#include "semid/evaluation.hpp"
#include "semid/harness.hpp"
#include "semid/neural.hpp"
#include "semid/pairwise.hpp"
#include "semid/sessions.hpp"

namespace {

void print_histogram(const semid::Corpus& corpus) {
  const auto histogram = semid::category_histogram(corpus);
  std::int64_t total = 0;
  for (const auto& entry : histogram) total += entry.count;

  std::cout << "provenance: " << corpus.provenance << "\n";
  std::cout << "users: " << corpus.traces.size() << "\n";
  std::cout << "pages: " << total << "\n";
  std::cout << std::left << std::setw(12) << "category" << std::right
            << std::setw(12) << "count" << std::setw(14) << "proportion"
            << "\n";
  for (int c = 0; c < semid::kNumCategories; ++c) {
    std::cout << std::left << std::setw(12) << corpus.categories.names[c]
              << std::right << std::setw(12) << histogram[c].count
              << std::setw(14) << std::fixed << std::setprecision(6)
              << histogram[c].proportion << "\n";
    std::cout.unsetf(std::ios::fixed);
  }
}

semid::Corpus corpus_for(const semid::ExperimentConfig& config) {
  if (config.synthetic) return semid::generate_synthetic(*config.synthetic);
  if (config.corpus_file.empty()) {
    throw std::runtime_error("config needs either corpus_file or synthetic");
  }
  return semid::load_corpus(config.corpus_file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semantic identification attacks on categorized browsing logs"};
  app.require_subcommand(1);

  // --- ingest ---------------------------------------------------------------
  std::string ingest_file;
  std::string ingest_out;
  auto* ingest = app.add_subcommand("ingest", "parse a sequence file and print its histogram");
  ingest->add_option("file", ingest_file, "sequence file")->required();
  ingest->add_option("--out", ingest_out, "re-serialize the parsed corpus here");
  ingest->callback([&] {
    const semid::Corpus corpus = semid::load_corpus(ingest_file);
    print_histogram(corpus);
    if (!ingest_out.empty()) semid::save_corpus(corpus, ingest_out);
  });

  // --- synth ----------------------------------------------------------------
  semid::SynthConfig synth_config;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  synth->add_option("--users", synth_config.n_users, "number of users")->required();
  synth->add_option("--alpha", synth_config.dirichlet_alpha,
                    "Dirichlet concentration (smaller = more skew)");
  synth->add_option("--seed", synth_config.seed, "generator seed");
  synth->add_option("--mean-len", synth_config.trace_len_mean, "mean trace length");
  synth->add_option("--min-len", synth_config.trace_len_min, "minimum trace length");
  synth->add_option("--out", synth_out, "output file (stdout when omitted)");
  synth->callback([&] {
    const semid::Corpus corpus = semid::generate_synthetic(synth_config);
    if (synth_out.empty()) {
      semid::serialize_corpus(corpus, std::cout);
    } else {
      semid::save_corpus(corpus, synth_out);
      std::cout << "wrote " << corpus.traces.size() << " users to " << synth_out << "\n";
    }
  });

  // --- partition ------------------------------------------------------------
  std::string partition_in;
  std::string partition_out;
  std::string partition_strategy;
  semid::PartitionConfig partition_config;
  auto* partition = app.add_subcommand("partition", "split traces into sessions");
  partition->add_option("--in", partition_in, "corpus file")->required();
  partition->add_option("--strategy", partition_strategy, "homepage or random")
      ->required()
      ->check(CLI::IsMember({"homepage", "random"}));
  partition->add_option("--k", partition_config.k,
                        "session length (random) / minimum segment length (homepage)")
      ->required();
  partition->add_option("--seed", partition_config.seed, "seed (random strategy)");
  partition->add_option("--homepage-category", partition_config.homepage_category,
                        "1-based boundary category");
  partition->add_option("--out", partition_out, "session set JSON")->required();
  partition->callback([&] {
    partition_config.strategy = partition_strategy == "homepage"
                                    ? semid::PartitionStrategy::kHomepage
                                    : semid::PartitionStrategy::kRandom;
    const semid::Corpus corpus = semid::load_corpus(partition_in);
    const semid::SessionSet set = semid::build_session_set(corpus, partition_config);
    semid::save_session_set(set, partition_out);
    std::cout << "eligible users: " << set.users.size() << "\n";
    std::cout << "sessions: " << set.sessions.size() << "\n";
  });

  // --- attack ---------------------------------------------------------------
  std::string attack_sessions;
  std::string attack_method;
  std::string attack_out;
  std::string attack_model;
  double attack_epsilon = semid::kDefaultEpsilon;
  std::uint64_t attack_seed = 0;
  bool attack_crowd = false;
  auto* attack = app.add_subcommand("attack", "score all session pairs");
  attack->add_option("--sessions", attack_sessions, "session set JSON")->required();
  attack->add_option("--method", attack_method, "pairwise, neural or baseline")
      ->required()
      ->check(CLI::IsMember({"pairwise", "neural", "baseline"}));
  attack->add_option("--out", attack_out, "scores CSV")->required();
  attack->add_option("--epsilon", attack_epsilon, "similarity floor (pairwise)");
  attack->add_option("--seed", attack_seed, "seed (baseline)");
  attack->add_option("--model", attack_model, "trained model JSON (neural)");
  attack->add_flag("--crowd", attack_crowd,
                   "crowd-weighted score variant (pairwise)");
  attack->callback([&] {
    const semid::SessionSet set = semid::load_session_set(attack_sessions);
    semid::ScoredPairs scores;
    if (attack_method == "pairwise") {
      scores = semid::score_all_pairs(set, attack_epsilon,
                                      attack_crowd
                                          ? semid::ScoreVariant::kCrowdWeighted
                                          : semid::ScoreVariant::kStandard);
    } else if (attack_method == "neural") {
      if (attack_model.empty()) throw std::runtime_error("--method neural needs --model");
      std::ifstream in(attack_model);
      if (!in) throw std::runtime_error("cannot open model: " + attack_model);
      std::stringstream buffer;
      buffer << in.rdbuf();
      scores = semid::score_all_pairs_nn(semid::model_from_json(buffer.str()), set);
    } else {
      scores = semid::baseline_scores(set, attack_seed);
    }
    semid::save_scores_csv(scores, attack_out);
    std::cout << "scored " << scores.scores.size() << " pairs (" << scores.attack_name
              << ")\n";
  });

  // --- train ----------------------------------------------------------------
  std::string train_sessions;
  std::string train_out;
  semid::TrainConfig train_config;
  auto* train_cmd = app.add_subcommand("train", "train the classifier on a session set");
  train_cmd->add_option("--sessions", train_sessions, "session set JSON")->required();
  train_cmd->add_option("--out", train_out, "model JSON")->required();
  train_cmd->add_option("--lr", train_config.learning_rate, "learning rate");
  train_cmd->add_option("--epochs", train_config.epochs, "training epochs");
  train_cmd->add_option("--batch", train_config.batch_size, "mini-batch size");
  train_cmd->add_option("--hidden", train_config.hidden_units, "hidden layer width");
  train_cmd->add_option("--seed", train_config.seed, "seed for sampling, init and shuffling");
  train_cmd->callback([&] {
    const semid::SessionSet set = semid::load_session_set(train_sessions);
    semid::Rng negatives =
        semid::Rng::derive(train_config.seed, {semid::stream::kNegativePairs});
    const auto pairs = semid::build_training_pairs(set, negatives);
    semid::TrainConfig tc = train_config;
    tc.seed = semid::derive_seed(train_config.seed, {semid::stream::kTrain});
    const semid::TrainResult result = semid::train(pairs, tc);
    std::ofstream out(train_out);
    if (!out) throw std::runtime_error("cannot write model: " + train_out);
    out << semid::model_to_json(result.params);
    std::cout << "trained on " << pairs.size() << " pairs, final loss "
              << std::setprecision(6) << result.epoch_loss.back() << "\n";
  });

  // --- evaluate -------------------------------------------------------------
  std::string eval_scores;
  std::string eval_sessions;
  std::string eval_out;
  std::string eval_name = "scores";
  auto* evaluate = app.add_subcommand("evaluate", "sweep thresholds against ground truth");
  evaluate->add_option("--scores", eval_scores, "scores CSV")->required();
  evaluate->add_option("--sessions", eval_sessions, "session set JSON (ground truth)")
      ->required();
  evaluate->add_option("--out", eval_out, "PR-curve CSV");
  evaluate->add_option("--name", eval_name, "attack name recorded for the scores");
  evaluate->callback([&] {
    const semid::SessionSet set = semid::load_session_set(eval_sessions);
    const semid::ScoredPairs scores = semid::load_scores_csv(eval_scores, eval_name);
    if (scores.n != set.sessions.size()) {
      throw std::runtime_error("scores cover " + std::to_string(scores.n) +
                               " sessions but the set has " +
                               std::to_string(set.sessions.size()));
    }
    const semid::GroundTruth truth = semid::ground_truth_pairs(set);
    const semid::PrCurve curve = semid::pr_sweep(scores, truth);
    if (!eval_out.empty()) semid::save_curve_csv(curve, eval_out);
    std::cout << "best " << semid::metrics_to_json(semid::best_f1(curve)) << "\n";
  });

  // --- defend ---------------------------------------------------------------
  std::string defend_in;
  std::string defend_out;
  semid::DefenseConfig defend_config;
  auto* defend = app.add_subcommand("defend", "append noise pages to every session");
  defend->add_option("--sessions", defend_in, "session set JSON")->required();
  defend->add_option("--p", defend_config.p, "noise pages per session")->required();
  defend->add_option("--seed", defend_config.seed, "noise seed");
  defend->add_option("--out", defend_out, "defended session set JSON")->required();
  defend->callback([&] {
    const semid::SessionSet set = semid::load_session_set(defend_in);
    semid::save_session_set(semid::apply_defense(set, defend_config), defend_out);
    std::cout << "defended " << set.sessions.size() << " sessions with p="
              << defend_config.p << "\n";
  });

  // --- experiment -----------------------------------------------------------
  std::string experiment_config_path;
  std::string experiment_out;
  auto* experiment = app.add_subcommand("experiment", "run the full sampled protocol");
  experiment->add_option("--config", experiment_config_path, "experiment config JSON")
      ->required();
  experiment->add_option("--out", experiment_out, "output directory")->required();
  experiment->callback([&] {
    const semid::ExperimentConfig config =
        semid::load_experiment_config(experiment_config_path);
    const semid::Corpus corpus = corpus_for(config);
    const semid::Experiment runner(corpus, config);
    const semid::ExperimentOutput output = runner.run();
    semid::export_report(output, experiment_out);

    std::cout << std::left << std::setw(8) << "size" << std::setw(10) << "attack"
              << std::right << std::setw(10) << "mean_f1" << std::setw(10)
              << "best_f1" << "\n";
    for (const auto& size_result : output.report.results) {
      for (const auto& summary : size_result.attacks) {
        std::cout << std::left << std::setw(8) << size_result.sample_size
                  << std::setw(10) << semid::attack_name(summary.attack)
                  << std::right << std::setw(10) << std::fixed
                  << std::setprecision(4) << summary.mean.f1 << std::setw(10)
                  << summary.best.f1 << "\n";
        std::cout.unsetf(std::ios::fixed);
      }
    }
    std::cout << "report: " << experiment_out << "/report.json\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
