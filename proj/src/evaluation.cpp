#include "semid/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace semid {
namespace {

// dense user index for reach bookkeeping
std::unordered_map<int, int> user_slots(const std::vector<int>& session_user) {
  std::unordered_map<int, int> slots;
  for (int user : session_user) {
    slots.emplace(user, static_cast<int>(slots.size()));
  }
  return slots;
}

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

GroundTruth ground_truth_pairs(const SessionSet& set) {
  GroundTruth truth;
  truth.n = set.sessions.size();
  truth.pair_universe_size = pair_count(truth.n);
  truth.session_user.reserve(truth.n);
  for (const auto& session : set.sessions) truth.session_user.push_back(session.user_id);

  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < truth.n; ++i) {
    for (std::size_t j = i + 1; j < truth.n; ++j, ++idx) {
      if (truth.session_user[i] == truth.session_user[j]) truth.positives.push_back(idx);
    }
  }
  return truth;
}

MetricsPoint metrics_at_threshold(const ScoredPairs& scores, double t,
                                  const GroundTruth& truth) {
  if (truth.positives.empty()) {
    throw std::invalid_argument("no same-user pairs: nothing to attack");
  }

  const auto slots = user_slots(truth.session_user);
  std::vector<char> user_hit(slots.size(), 0);

  std::size_t predicted = 0;
  std::size_t true_positive = 0;
  int reach = 0;

  std::uint64_t idx = 0;
  auto next_positive = truth.positives.begin();
  for (std::size_t i = 0; i < scores.n; ++i) {
    for (std::size_t j = i + 1; j < scores.n; ++j, ++idx) {
      const bool is_true =
          next_positive != truth.positives.end() && *next_positive == idx;
      if (is_true) ++next_positive;
      if (scores.scores[idx] < t) continue;
      ++predicted;
      if (is_true) {
        ++true_positive;
        auto& hit = user_hit[slots.at(truth.session_user[i])];
        if (!hit) {
          hit = 1;
          ++reach;
        }
      }
    }
  }

  MetricsPoint point;
  point.threshold = t;
  point.precision = predicted > 0
                        ? static_cast<double>(true_positive) / static_cast<double>(predicted)
                        : 0.0;
  point.recall = static_cast<double>(true_positive) /
                 static_cast<double>(truth.positives.size());
  point.f1 = f1_score(point.precision, point.recall);
  point.reach = reach;
  return point;
}

PrCurve pr_sweep(const ScoredPairs& scores, const GroundTruth& truth) {
  if (scores.scores.empty()) throw std::invalid_argument("no scores to sweep");
  if (truth.positives.empty()) {
    throw std::invalid_argument("no same-user pairs: nothing to attack");
  }

  const std::size_t m = scores.scores.size();

  std::vector<double> thresholds(scores.scores);
  std::sort(thresholds.begin(), thresholds.end());
  if (m > 100000) {
    std::vector<double> quantiles;
    quantiles.reserve(1001);
    for (std::size_t q = 0; q <= 1000; ++q) {
      quantiles.push_back(thresholds[q * (m - 1) / 1000]);
    }
    thresholds = std::move(quantiles);
  }
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  // pairs by descending score; walking thresholds downward only grows the
  // predicted set, so counts accumulate
  std::vector<std::uint64_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
    if (scores.scores[a] != scores.scores[b]) return scores.scores[a] > scores.scores[b];
    return a < b;
  });

  std::vector<char> is_positive(m, 0);
  for (std::uint64_t idx : truth.positives) is_positive[idx] = 1;

  // recover (i,j) from a canonical pair index by walking row starts
  std::vector<std::uint64_t> row_start(truth.n);
  {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < truth.n; ++i) {
      row_start[i] = acc;
      acc += truth.n - i - 1;
    }
  }
  auto row_of = [&](std::uint64_t idx) {
    const auto it = std::upper_bound(row_start.begin(), row_start.end(), idx);
    return static_cast<std::size_t>(it - row_start.begin() - 1);
  };

  const auto slots = user_slots(truth.session_user);
  std::vector<char> user_hit(slots.size(), 0);

  const double total_true = static_cast<double>(truth.positives.size());
  std::size_t cursor = 0;
  std::size_t predicted = 0;
  std::size_t true_positive = 0;
  int reach = 0;

  PrCurve curve;
  curve.points.reserve(thresholds.size());
  for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
    const double t = *it;
    while (cursor < m && scores.scores[order[cursor]] >= t) {
      const std::uint64_t idx = order[cursor++];
      ++predicted;
      if (is_positive[idx]) {
        ++true_positive;
        auto& hit = user_hit[slots.at(truth.session_user[row_of(idx)])];
        if (!hit) {
          hit = 1;
          ++reach;
        }
      }
    }
    MetricsPoint point;
    point.threshold = t;
    point.precision = predicted > 0 ? static_cast<double>(true_positive) /
                                          static_cast<double>(predicted)
                                    : 0.0;
    point.recall = static_cast<double>(true_positive) / total_true;
    point.f1 = f1_score(point.precision, point.recall);
    point.reach = reach;
    curve.points.push_back(point);
  }
  std::reverse(curve.points.begin(), curve.points.end());
  return curve;
}

MetricsPoint best_f1(const PrCurve& curve) {
  if (curve.points.empty()) throw std::invalid_argument("empty curve");
  const MetricsPoint* best = &curve.points.front();
  for (const auto& point : curve.points) {
    if (point.f1 >= best->f1) best = &point;  // ascending order: ties take the higher threshold
  }
  return *best;
}

void write_curve_csv(const PrCurve& curve, std::ostream& out) {
  out << "threshold,precision,recall,f1,reach\n";
  for (const auto& p : curve.points) {
    out << format_double(p.threshold) << ',' << format_double(p.precision) << ','
        << format_double(p.recall) << ',' << format_double(p.f1) << ','
        << p.reach << '\n';
  }
}

void save_curve_csv(const PrCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write curve: " + path);
  write_curve_csv(curve, out);
}

std::string metrics_to_json(const MetricsPoint& point) {
  nlohmann::json j;
  j["threshold"] = point.threshold;
  j["precision"] = point.precision;
  j["recall"] = point.recall;
  j["f1"] = point.f1;
  j["reach"] = point.reach;
  return j.dump();
}

}  // namespace semid
