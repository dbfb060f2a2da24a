#include "semid/pairwise.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "semid/fingerprint.hpp"
#include "semid/kernels.hpp"

namespace semid {
namespace {

// Row i of the matrix without the diagonal entry, in ascending k order. Both
// the per-pair and the all-pairs paths feed this same buffer to the same
// kernel, so their denominator sums agree bit for bit.
void gather_row(const SimilarityMatrix& m, std::size_t i, std::vector<double>& buf) {
  const std::size_t n = m.size();
  buf.resize(n - 1);
  std::size_t out = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i) continue;
    buf[out++] = m.at(i, k);
  }
}

double inverse_sum(const SimilarityMatrix& m, std::size_t i, double epsilon,
                   std::vector<double>& buf) {
  gather_row(m, i, buf);
  return kernels::active().sum_inv_clamped(buf.data(), buf.size(), epsilon);
}

void append_double(std::string& out, double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  out.append(buf, ptr);
}

}  // namespace

SimilarityMatrix similarity_matrix(const SessionSet& set) {
  const std::size_t n = set.sessions.size();
  if (n < 2) throw std::invalid_argument("similarity matrix needs >= 2 sessions");

  std::vector<Fingerprint> prints;
  prints.reserve(n);
  for (const auto& session : set.sessions) prints.push_back(fingerprint(session));

  SimilarityMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m.set(i, j, cosine(prints[i], prints[j]));
    }
  }
  return m;
}

double pairwise_score(std::size_t i, std::size_t j, const SimilarityMatrix& m,
                      double epsilon) {
  if (i == j) throw std::invalid_argument("pairwise_score needs i != j");
  std::vector<double> buf;
  const double denom = inverse_sum(m, i, epsilon, buf) + inverse_sum(m, j, epsilon, buf);
  return m.at(i, j) / denom;
}

ScoredPairs score_all_pairs(const SessionSet& set, double epsilon,
                            ScoreVariant variant) {
  const SimilarityMatrix m = similarity_matrix(set);
  const std::size_t n = m.size();

  // per-session denominator terms; each pair's denominator is d[i] + d[j]
  std::vector<double> d(n);
  std::vector<double> buf;
  for (std::size_t i = 0; i < n; ++i) d[i] = inverse_sum(m, i, epsilon, buf);

  ScoredPairs result;
  result.attack_name =
      variant == ScoreVariant::kStandard ? "pairwise" : "pairwise-crowd";
  result.n = n;
  result.scores.resize(pair_count(n));
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++idx) {
      const double sim = m.at(i, j);
      result.scores[idx] = variant == ScoreVariant::kStandard
                               ? sim / (d[i] + d[j])
                               : sim * (d[i] + d[j]);
    }
  }
  return result;
}

ScoredPairs baseline_scores(const SessionSet& set, std::uint64_t seed) {
  const std::size_t n = set.sessions.size();
  if (n < 2) throw std::invalid_argument("baseline needs >= 2 sessions");

  Rng rng = Rng::derive(seed, {stream::kBaseline});
  ScoredPairs result;
  result.attack_name = "baseline";
  result.n = n;
  result.scores.resize(pair_count(n));
  for (double& score : result.scores) score = rng.uniform();
  return result;
}

void write_scores_csv(const ScoredPairs& scores, std::ostream& out) {
  std::string text = "session_a,session_b,score\n";
  std::size_t idx = 0;
  for (std::size_t i = 0; i < scores.n; ++i) {
    for (std::size_t j = i + 1; j < scores.n; ++j, ++idx) {
      text += std::to_string(i);
      text += ',';
      text += std::to_string(j);
      text += ',';
      append_double(text, scores.scores[idx]);
      text += '\n';
      if (text.size() > (1u << 20)) {
        out << text;
        text.clear();
      }
    }
  }
  out << text;
}

void save_scores_csv(const ScoredPairs& scores, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scores: " + path);
  write_scores_csv(scores, out);
}

ScoredPairs read_scores_csv(std::istream& in, const std::string& attack_name) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty scores CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "session_a,session_b,score") {
    throw std::runtime_error("scores CSV header mismatch: " + line);
  }

  struct Row {
    std::size_t a, b;
    double score;
  };
  std::vector<Row> rows;
  std::size_t max_id = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    Row row{};
    char comma1 = 0, comma2 = 0;
    if (!(ss >> row.a >> comma1 >> row.b >> comma2 >> row.score) ||
        comma1 != ',' || comma2 != ',') {
      throw std::runtime_error("malformed scores CSV row: " + line);
    }
    if (row.a >= row.b) throw std::runtime_error("scores CSV requires session_a < session_b");
    max_id = std::max(max_id, row.b);
    rows.push_back(row);
  }

  ScoredPairs result;
  result.attack_name = attack_name;
  result.n = max_id + 1;
  if (rows.size() != pair_count(result.n)) {
    throw std::runtime_error("scores CSV does not cover all session pairs");
  }
  result.scores.resize(rows.size());
  for (const auto& row : rows) {
    result.scores[pair_index(row.a, row.b, result.n)] = row.score;
  }
  return result;
}

ScoredPairs load_scores_csv(const std::string& path, const std::string& attack_name) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scores: " + path);
  return read_scores_csv(in, attack_name);
}

}  // namespace semid
