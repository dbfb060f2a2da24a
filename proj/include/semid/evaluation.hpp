#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "semid/pairwise.hpp"
#include "semid/sessions.hpp"

namespace semid {

// The same-user session pairs the attack is trying to recover.
struct GroundTruth {
  std::size_t n = 0;                       // session count
  std::size_t pair_universe_size = 0;      // n(n-1)/2
  std::vector<std::uint64_t> positives;    // canonical pair indices, ascending
  std::vector<int> session_user;           // user id per session
};

struct MetricsPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // users with at least one correctly identified pair
  int reach = 0;

  bool operator==(const MetricsPoint&) const = default;
};

// Points of a threshold sweep, ascending by threshold; recall never increases
// along the list.
struct PrCurve {
  std::vector<MetricsPoint> points;

  bool operator==(const PrCurve&) const = default;
};

inline double f1_score(double precision, double recall) {
  return precision + recall > 0.0
             ? 2.0 * precision * recall / (precision + recall)
             : 0.0;
}

GroundTruth ground_truth_pairs(const SessionSet& set);

// Predicted set = pairs with score >= t. Precision over predictions (0 when
// none), recall over the true pairs; errors when there are no true pairs.
MetricsPoint metrics_at_threshold(const ScoredPairs& scores, double t,
                                  const GroundTruth& truth);

// One point per candidate threshold: every distinct score when there are at
// most 100000 pairs, otherwise 1001 evenly spaced score quantiles.
PrCurve pr_sweep(const ScoredPairs& scores, const GroundTruth& truth);

// The sweep point with maximal F1; ties go to the higher threshold.
MetricsPoint best_f1(const PrCurve& curve);

// CSV with header "threshold,precision,recall,f1,reach".
void write_curve_csv(const PrCurve& curve, std::ostream& out);
void save_curve_csv(const PrCurve& curve, const std::string& path);

std::string metrics_to_json(const MetricsPoint& point);

}  // namespace semid
