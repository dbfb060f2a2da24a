#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "semid/fingerprint.hpp"
#include "semid/pairwise.hpp"
#include "semid/sessions.hpp"

namespace semid {

// Classifier input for a session pair: the component-wise absolute difference
// of the two fingerprints. Zero vector = identical behavior.
struct PairFeature {
  std::array<double, kNumCategories> values{};

  bool operator==(const PairFeature&) const = default;
};

struct LabeledPair {
  PairFeature feature;
  bool same_user = false;
};

// Single-hidden-layer perceptron, logistic activations throughout. The output
// is read as the probability that the pair is same-user.
struct MlpParams {
  int hidden_units = 0;
  std::vector<double> w1;  // hidden_units x 17, row-major
  std::vector<double> b1;  // hidden_units
  std::vector<double> w2;  // hidden_units
  double b2 = 0.0;

  bool operator==(const MlpParams&) const = default;
};

struct TrainConfig {
  double learning_rate = 0.01;
  int epochs = 200;
  int batch_size = 32;
  std::uint64_t seed = 0;
  int hidden_units = 100;
};

struct TrainResult {
  MlpParams params;
  std::vector<double> epoch_loss;  // mean batch loss per epoch
};

PairFeature pair_features(const Fingerprint& a, const Fingerprint& b);

// Uniform [-r, r] weights with r = sqrt(6 / (fan_in + fan_out)) per layer,
// zero biases.
MlpParams init_params(std::uint64_t seed, int hidden_units);

double forward(const MlpParams& params, const PairFeature& x);

// Mean binary cross-entropy over the batch plus exact gradients in the same
// shape as the parameters.
struct LossAndGrad {
  double loss = 0.0;
  MlpParams grads;
};
LossAndGrad loss_and_grad(const MlpParams& params, const std::vector<LabeledPair>& batch);

// Plain mini-batch gradient descent; shuffle order and init both derive from
// config.seed. Throws if the training set is single-class.
TrainResult train(const std::vector<LabeledPair>& pairs, const TrainConfig& config);

ScoredPairs score_all_pairs_nn(const MlpParams& model, const SessionSet& set);

std::string model_to_json(const MlpParams& params);
MlpParams model_from_json(const std::string& text);
void save_model(const MlpParams& params, const std::string& path);
MlpParams load_model(const std::string& path);

}  // namespace semid
