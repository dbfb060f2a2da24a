#pragma once

#include <cstdint>

#include "semid/rng.hpp"
#include "semid/sessions.hpp"

namespace semid {

// Noise-page countermeasure: each session gets p extra visits drawn uniformly
// over all 17 categories, which flattens its fingerprint.
struct DefenseConfig {
  int p = 0;
  std::uint64_t seed = 0;
};

// Appends p uniform random category visits; the original pages stay an exact
// prefix and ids are unchanged.
Session add_noise_pages(const Session& session, int p, Rng& rng);

// Applies the defense to every session; session s draws from a stream derived
// from (seed, s.session_id), so application order does not matter.
SessionSet apply_defense(const SessionSet& set, const DefenseConfig& config);

}  // namespace semid
