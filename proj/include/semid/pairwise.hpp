#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "semid/sessions.hpp"

namespace semid {

// Canonical index of the unordered pair (i,j), i < j, in the flattened upper
// triangle of an n x n matrix. Pairs iterate in (i,j) lexicographic order.
inline std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

inline std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

// Symmetric session-by-session cosine similarities; diagonal is exactly 1.
// Stored as the upper triangle.
class SimilarityMatrix {
 public:
  explicit SimilarityMatrix(std::size_t n) : n_(n), values_(pair_count(n), 0.0) {}

  std::size_t size() const { return n_; }

  double at(std::size_t i, std::size_t j) const {
    if (i == j) return 1.0;
    return i < j ? values_[pair_index(i, j, n_)] : values_[pair_index(j, i, n_)];
  }

  void set(std::size_t i, std::size_t j, double value) {
    values_[i < j ? pair_index(i, j, n_) : pair_index(j, i, n_)] = value;
  }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

// One score per unordered session pair, in canonical pair order. Session ids
// are the dense 0..n-1 ids of the originating SessionSet.
struct ScoredPairs {
  std::string attack_name;
  std::size_t n = 0;
  std::vector<double> scores;  // size pair_count(n)

  double score(std::size_t i, std::size_t j) const {
    return scores[pair_index(std::min(i, j), std::max(i, j), n)];
  }

  bool operator==(const ScoredPairs&) const = default;
};

enum class ScoreVariant {
  // similarity divided by the two summed inverse similarities (default)
  kStandard,
  // similarity multiplied by the summed inverse similarities, so pairs far
  // from the crowd score higher; not the default formula
  kCrowdWeighted,
};

inline constexpr double kDefaultEpsilon = 1e-9;

// Pairwise cosine similarities of all session fingerprints.
SimilarityMatrix similarity_matrix(const SessionSet& set);

// Score(i,j) = Sim(i,j) / (sum_{k!=i} 1/max(Sim(i,k),eps)
//              + sum_{k!=j} 1/max(Sim(j,k),eps)), symmetric in (i,j).
double pairwise_score(std::size_t i, std::size_t j, const SimilarityMatrix& m,
                      double epsilon);

ScoredPairs score_all_pairs(const SessionSet& set,
                            double epsilon = kDefaultEpsilon,
                            ScoreVariant variant = ScoreVariant::kStandard);

// Independent uniform [0,1) score per pair; the no-information reference.
ScoredPairs baseline_scores(const SessionSet& set, std::uint64_t seed);

// CSV with header "session_a,session_b,score", session_a < session_b.
void write_scores_csv(const ScoredPairs& scores, std::ostream& out);
void save_scores_csv(const ScoredPairs& scores, const std::string& path);
ScoredPairs read_scores_csv(std::istream& in, const std::string& attack_name);
ScoredPairs load_scores_csv(const std::string& path, const std::string& attack_name);

}  // namespace semid
