#include "semid/defense.hpp"

#include <stdexcept>

namespace semid {

Session add_noise_pages(const Session& session, int p, Rng& rng) {
  if (p < 0) throw std::invalid_argument("noise page count must be >= 0");
  Session noisy = session;
  noisy.pages.reserve(session.pages.size() + static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) {
    noisy.pages.push_back(static_cast<std::uint8_t>(rng.below(kNumCategories)));
  }
  return noisy;
}

SessionSet apply_defense(const SessionSet& set, const DefenseConfig& config) {
  SessionSet defended;
  defended.users = set.users;
  defended.sessions.reserve(set.sessions.size());
  for (const auto& session : set.sessions) {
    Rng rng = Rng::derive(config.seed,
                          {stream::kDefense, static_cast<std::uint64_t>(session.session_id)});
    defended.sessions.push_back(add_noise_pages(session, config.p, rng));
  }
  return defended;
}

}  // namespace semid
