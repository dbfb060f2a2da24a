#include "semid/sessions.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace semid {

std::vector<Session> homepage_partition(const UserTrace& trace, int k,
                                        int homepage_category) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const auto homepage = static_cast<std::uint8_t>(homepage_category - 1);

  std::vector<Session> result;
  std::vector<std::uint8_t> segment;
  auto flush = [&] {
    if (static_cast<int>(segment.size()) >= k) {
      result.push_back(Session{trace.user_id, -1, segment});
    }
    segment.clear();
  };

  for (std::uint8_t page : trace.pages) {
    if (page == homepage) {
      flush();
    } else {
      segment.push_back(page);
    }
  }
  flush();
  return result;
}

std::vector<Session> random_partition(const UserTrace& trace, int k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");

  const std::size_t len = trace.pages.size();
  std::vector<std::uint32_t> remaining(len);
  for (std::size_t i = 0; i < len; ++i) remaining[i] = static_cast<std::uint32_t>(i);

  std::vector<Session> result;
  const std::size_t n_sessions = len / static_cast<std::size_t>(k);
  result.reserve(n_sessions);

  std::vector<std::uint32_t> picked(static_cast<std::size_t>(k));
  for (std::size_t s = 0; s < n_sessions; ++s) {
    for (int t = 0; t < k; ++t) {
      const std::size_t r = rng.below(remaining.size());
      picked[t] = remaining[r];
      remaining[r] = remaining.back();
      remaining.pop_back();
    }
    // original order within the session
    std::sort(picked.begin(), picked.end());
    Session session{trace.user_id, -1, {}};
    session.pages.reserve(picked.size());
    for (std::uint32_t idx : picked) session.pages.push_back(trace.pages[idx]);
    result.push_back(std::move(session));
  }
  return result;
}

SessionSet build_session_set(const Corpus& corpus, const PartitionConfig& config) {
  SessionSet set;
  int next_id = 0;
  for (const auto& trace : corpus.traces) {
    std::vector<Session> sessions;
    if (config.strategy == PartitionStrategy::kHomepage) {
      sessions = homepage_partition(trace, config.k, config.homepage_category);
    } else {
      Rng rng = Rng::derive(config.seed,
                            {stream::kPartition, static_cast<std::uint64_t>(trace.user_id)});
      sessions = random_partition(trace, config.k, rng);
    }
    if (sessions.size() < 2) continue;  // no same-user partner, no ground truth
    set.users.push_back(trace.user_id);
    for (auto& session : sessions) {
      session.session_id = next_id++;
      set.sessions.push_back(std::move(session));
    }
  }
  return set;
}

std::string session_set_to_json(const SessionSet& set) {
  nlohmann::json j;
  j["users"] = set.users;
  auto& sessions = j["sessions"] = nlohmann::json::array();
  for (const auto& session : set.sessions) {
    nlohmann::json entry;
    entry["id"] = session.session_id;
    entry["user"] = session.user_id;
    auto& pages = entry["pages"] = nlohmann::json::array();
    for (std::uint8_t page : session.pages) pages.push_back(static_cast<int>(page) + 1);
    sessions.push_back(std::move(entry));
  }
  return j.dump(2) + "\n";
}

SessionSet session_set_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SessionSet set;
  set.users = j.at("users").get<std::vector<int>>();
  for (const auto& entry : j.at("sessions")) {
    Session session;
    session.session_id = entry.at("id").get<int>();
    session.user_id = entry.at("user").get<int>();
    for (int page : entry.at("pages")) {
      if (page < 1 || page > kNumCategories) {
        throw std::runtime_error("session page index outside 1..17");
      }
      session.pages.push_back(static_cast<std::uint8_t>(page - 1));
    }
    set.sessions.push_back(std::move(session));
  }
  return set;
}

void save_session_set(const SessionSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write session set: " + path);
  out << session_set_to_json(set);
}

SessionSet load_session_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open session set: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return session_set_from_json(buffer.str());
}

}  // namespace semid
