#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "semid/corpus.hpp"
#include "semid/rng.hpp"

namespace semid {

struct Session {
  int user_id = 0;
  int session_id = -1;               // dense id, assigned by build_session_set
  std::vector<std::uint8_t> pages;   // 0-based category indices

  bool operator==(const Session&) const = default;
};

enum class PartitionStrategy { kHomepage, kRandom };

struct PartitionConfig {
  PartitionStrategy strategy = PartitionStrategy::kRandom;
  // Minimum segment length for the homepage strategy, exact session length
  // for the random strategy.
  int k = 1;
  std::uint64_t seed = 0;        // random strategy only
  int homepage_category = 1;     // 1-based

  bool operator==(const PartitionConfig&) const = default;
};

// Sessions that survived partitioning, restricted to users contributing at
// least two of them (every session must have a same-user partner).
struct SessionSet {
  std::vector<Session> sessions;
  std::vector<int> users;  // ascending user ids represented in sessions

  bool operator==(const SessionSet&) const = default;
};

// Splits the trace at every visit to homepage_category; the homepage visits
// themselves belong to no session and segments shorter than k are dropped.
std::vector<Session> homepage_partition(const UserTrace& trace, int k,
                                        int homepage_category);

// Draws k pages at a time uniformly without replacement until fewer than k
// remain; leftovers are dropped. Selected pages keep their trace order, so
// every session has exactly k pages and there are floor(len/k) of them.
std::vector<Session> random_partition(const UserTrace& trace, int k, Rng& rng);

SessionSet build_session_set(const Corpus& corpus, const PartitionConfig& config);

std::string session_set_to_json(const SessionSet& set);
SessionSet session_set_from_json(const std::string& text);
void save_session_set(const SessionSet& set, const std::string& path);
SessionSet load_session_set(const std::string& path);

}  // namespace semid
