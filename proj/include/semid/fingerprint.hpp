#pragma once

#include <array>
#include <string>

#include "semid/corpus.hpp"
#include "semid/sessions.hpp"

namespace semid {

// Per-session category-proportion vector: component j is the fraction of the
// session's visits that fall in category j+1. Components are nonnegative and
// sum to 1.
struct Fingerprint {
  std::array<double, kNumCategories> proportions{};

  bool operator==(const Fingerprint&) const = default;
};

Fingerprint fingerprint(const Session& session);

// Cosine similarity of two fingerprints, clamped into [0,1] against rounding.
double cosine(const Fingerprint& a, const Fingerprint& b);

// 17-element JSON array, full-precision reals.
std::string fingerprint_to_json(const Fingerprint& fp);

}  // namespace semid
