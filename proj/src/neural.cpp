#include "semid/neural.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "semid/kernels.hpp"

namespace semid {
namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

constexpr double kProbClamp = 1e-12;

void check_shapes(const MlpParams& p) {
  const auto h = static_cast<std::size_t>(p.hidden_units);
  if (p.hidden_units < 1 || p.w1.size() != h * kNumCategories ||
      p.b1.size() != h || p.w2.size() != h) {
    throw std::invalid_argument("mlp parameter shapes do not match hidden_units");
  }
}

// forward pass with the intermediates backprop needs
struct Activations {
  std::vector<double> hidden;  // sigma(W1 x + b1)
  double output = 0.0;         // sigma(w2 . hidden + b2)
};

Activations forward_full(const MlpParams& p, const PairFeature& x) {
  const auto& k = kernels::active();
  const auto h = static_cast<std::size_t>(p.hidden_units);

  Activations act;
  act.hidden.resize(h);
  k.matvec(p.w1.data(), h, kNumCategories, x.values.data(), act.hidden.data());
  for (std::size_t j = 0; j < h; ++j) act.hidden[j] = sigmoid(act.hidden[j] + p.b1[j]);
  const double z2 = k.dot(p.w2.data(), act.hidden.data(), h) + p.b2;
  act.output = sigmoid(z2);
  return act;
}

}  // namespace

PairFeature pair_features(const Fingerprint& a, const Fingerprint& b) {
  PairFeature f;
  for (int i = 0; i < kNumCategories; ++i) {
    f.values[i] = std::abs(a.proportions[i] - b.proportions[i]);
  }
  return f;
}

MlpParams init_params(std::uint64_t seed, int hidden_units) {
  if (hidden_units < 1) throw std::invalid_argument("hidden_units must be >= 1");
  Rng rng(seed);

  MlpParams p;
  p.hidden_units = hidden_units;
  const auto h = static_cast<std::size_t>(hidden_units);

  const double r1 = std::sqrt(6.0 / (kNumCategories + hidden_units));
  p.w1.resize(h * kNumCategories);
  for (double& w : p.w1) w = (2.0 * rng.uniform() - 1.0) * r1;
  p.b1.assign(h, 0.0);

  const double r2 = std::sqrt(6.0 / (hidden_units + 1));
  p.w2.resize(h);
  for (double& w : p.w2) w = (2.0 * rng.uniform() - 1.0) * r2;
  p.b2 = 0.0;
  return p;
}

double forward(const MlpParams& params, const PairFeature& x) {
  check_shapes(params);
  return forward_full(params, x).output;
}

LossAndGrad loss_and_grad(const MlpParams& params, const std::vector<LabeledPair>& batch) {
  check_shapes(params);
  if (batch.empty()) throw std::invalid_argument("empty batch");

  const auto& k = kernels::active();
  const auto h = static_cast<std::size_t>(params.hidden_units);
  const double inv_batch = 1.0 / static_cast<double>(batch.size());

  LossAndGrad out;
  out.grads.hidden_units = params.hidden_units;
  out.grads.w1.assign(h * kNumCategories, 0.0);
  out.grads.b1.assign(h, 0.0);
  out.grads.w2.assign(h, 0.0);
  out.grads.b2 = 0.0;

  std::vector<double> delta_hidden(h);
  for (const auto& example : batch) {
    const Activations act = forward_full(params, example.feature);
    const double y = example.same_user ? 1.0 : 0.0;
    const double p = std::clamp(act.output, kProbClamp, 1.0 - kProbClamp);
    out.loss -= inv_batch * (y * std::log(p) + (1.0 - y) * std::log(1.0 - p));

    const double delta_out = (act.output - y) * inv_batch;
    out.grads.b2 += delta_out;
    k.axpy(delta_out, act.hidden.data(), out.grads.w2.data(), h);

    for (std::size_t j = 0; j < h; ++j) {
      delta_hidden[j] = delta_out * params.w2[j] * act.hidden[j] * (1.0 - act.hidden[j]);
    }
    for (std::size_t j = 0; j < h; ++j) {
      out.grads.b1[j] += delta_hidden[j];
      k.axpy(delta_hidden[j], example.feature.values.data(),
             out.grads.w1.data() + j * kNumCategories, kNumCategories);
    }
  }
  return out;
}

TrainResult train(const std::vector<LabeledPair>& pairs, const TrainConfig& config) {
  if (config.learning_rate <= 0.0 || config.epochs < 1 || config.batch_size < 1) {
    throw std::invalid_argument("invalid training configuration");
  }
  const bool has_pos = std::any_of(pairs.begin(), pairs.end(),
                                   [](const LabeledPair& p) { return p.same_user; });
  const bool has_neg = std::any_of(pairs.begin(), pairs.end(),
                                   [](const LabeledPair& p) { return !p.same_user; });
  if (!has_pos || !has_neg) {
    throw std::invalid_argument("training set must contain both classes");
  }

  const auto& k = kernels::active();
  TrainResult result;
  result.params = init_params(config.seed, config.hidden_units);
  Rng shuffle_rng = Rng::derive(config.seed, {stream::kShuffle});

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<LabeledPair> batch;

  const auto h = static_cast<std::size_t>(config.hidden_units);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      const std::size_t j = shuffle_rng.below(i + 1);
      std::swap(order[i], order[j]);
    }

    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) batch.push_back(pairs[order[i]]);

      const LossAndGrad lg = loss_and_grad(result.params, batch);
      epoch_loss += lg.loss;
      ++batches;

      auto& p = result.params;
      k.axpy(-config.learning_rate, lg.grads.w1.data(), p.w1.data(), h * kNumCategories);
      k.axpy(-config.learning_rate, lg.grads.b1.data(), p.b1.data(), h);
      k.axpy(-config.learning_rate, lg.grads.w2.data(), p.w2.data(), h);
      p.b2 -= config.learning_rate * lg.grads.b2;
    }
    result.epoch_loss.push_back(epoch_loss / static_cast<double>(batches));
  }
  return result;
}

ScoredPairs score_all_pairs_nn(const MlpParams& model, const SessionSet& set) {
  check_shapes(model);
  const std::size_t n = set.sessions.size();
  if (n < 2) throw std::invalid_argument("need >= 2 sessions to score");

  std::vector<Fingerprint> prints;
  prints.reserve(n);
  for (const auto& session : set.sessions) prints.push_back(fingerprint(session));

  ScoredPairs result;
  result.attack_name = "neural";
  result.n = n;
  result.scores.resize(pair_count(n));
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++idx) {
      result.scores[idx] = forward_full(model, pair_features(prints[i], prints[j])).output;
    }
  }
  return result;
}

std::string model_to_json(const MlpParams& params) {
  check_shapes(params);
  nlohmann::json j;
  j["hidden_units"] = params.hidden_units;
  auto& w1 = j["W1"] = nlohmann::json::array();
  for (int row = 0; row < params.hidden_units; ++row) {
    nlohmann::json r = nlohmann::json::array();
    for (int col = 0; col < kNumCategories; ++col) {
      r.push_back(params.w1[static_cast<std::size_t>(row) * kNumCategories + col]);
    }
    w1.push_back(std::move(r));
  }
  j["b1"] = params.b1;
  j["w2"] = params.w2;
  j["b2"] = params.b2;
  return j.dump(2) + "\n";
}

MlpParams model_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  MlpParams p;
  p.hidden_units = j.at("hidden_units").get<int>();
  for (const auto& row : j.at("W1")) {
    for (double w : row) p.w1.push_back(w);
  }
  p.b1 = j.at("b1").get<std::vector<double>>();
  p.w2 = j.at("w2").get<std::vector<double>>();
  p.b2 = j.at("b2").get<double>();
  check_shapes(p);
  return p;
}

void save_model(const MlpParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model: " + path);
  out << model_to_json(params);
}

MlpParams load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace semid
