#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "semid/fingerprint.hpp"
#include "semid/pairwise.hpp"
#include "semid/rng.hpp"

namespace {

semid::SessionSet random_set(int users, int sessions_per_user, int pages,
                             std::uint64_t seed) {
  semid::SessionSet set;
  semid::Rng rng(seed);
  int id = 0;
  for (int u = 0; u < users; ++u) {
    set.users.push_back(u);
    for (int s = 0; s < sessions_per_user; ++s) {
      semid::Session session;
      session.user_id = u;
      session.session_id = id++;
      for (int p = 0; p < pages; ++p) {
        session.pages.push_back(static_cast<std::uint8_t>(rng.below(17)));
      }
      set.sessions.push_back(std::move(session));
    }
  }
  return set;
}

// independent evaluation of the score formula, straight from its definition
double brute_force_score(std::size_t i, std::size_t j, const semid::SimilarityMatrix& m,
                         double epsilon) {
  double denom = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (k != i) denom += 1.0 / std::max(m.at(i, k), epsilon);
  }
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (k != j) denom += 1.0 / std::max(m.at(j, k), epsilon);
  }
  return m.at(i, j) / denom;
}

}  // namespace

TEST_CASE("pair_index walks the upper triangle in lexicographic order") {
  CHECK(semid::pair_index(0, 1, 4) == 0);
  CHECK(semid::pair_index(0, 2, 4) == 1);
  CHECK(semid::pair_index(0, 3, 4) == 2);
  CHECK(semid::pair_index(1, 2, 4) == 3);
  CHECK(semid::pair_index(1, 3, 4) == 4);
  CHECK(semid::pair_index(2, 3, 4) == 5);
  CHECK(semid::pair_count(4) == 6);
  CHECK(semid::pair_count(1) == 0);

  std::size_t next = 0;
  for (std::size_t i = 0; i < 9; ++i) {
    for (std::size_t j = i + 1; j < 9; ++j) {
      CHECK(semid::pair_index(i, j, 9) == next++);
    }
  }
  CHECK(next == semid::pair_count(9));
}

TEST_CASE("similarity matrix storage is symmetric with unit diagonal") {
  semid::SimilarityMatrix m(3);
  m.set(0, 1, 0.25);
  m.set(2, 1, 0.5);
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(1, 1) == 1.0);
  CHECK(m.at(0, 1) == 0.25);
  CHECK(m.at(1, 0) == 0.25);
  CHECK(m.at(1, 2) == 0.5);
  CHECK(m.at(2, 1) == 0.5);
  CHECK(m.at(0, 2) == 0.0);
}

TEST_CASE("similarity_matrix equals element-wise cosine recomputation") {
  const auto set = random_set(1, 5, 25, 42);
  const auto m = semid::similarity_matrix(set);
  REQUIRE(m.size() == 5);

  std::vector<semid::Fingerprint> prints;
  for (const auto& s : set.sessions) prints.push_back(semid::fingerprint(s));
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      const double expect = i == j ? 1.0 : semid::cosine(prints[i], prints[j]);
      CHECK(std::abs(m.at(i, j) - expect) < 1e-12);
    }
  }
}

TEST_CASE("similarity_matrix extremes") {
  semid::SessionSet set;
  set.users = {0};
  for (int s = 0; s < 2; ++s) {
    semid::Session session;
    session.user_id = 0;
    session.session_id = s;
    session.pages = {0, 1, 0, 1};
    set.sessions.push_back(session);
  }
  CHECK(semid::similarity_matrix(set).at(0, 1) == 1.0);

  set.sessions[1].pages = {4, 5, 4, 5};  // disjoint categories
  CHECK(semid::similarity_matrix(set).at(0, 1) == 0.0);

  set.sessions.pop_back();
  CHECK_THROWS_AS(semid::similarity_matrix(set), std::invalid_argument);
}

TEST_CASE("pairwise_score at n=2 reduces to s^2/2") {
  for (double s : {1.0, 0.5, 0.1}) {
    semid::SimilarityMatrix m(2);
    m.set(0, 1, s);
    CHECK(semid::pairwise_score(0, 1, m, 1e-9) ==
          doctest::Approx(s * s / 2.0).epsilon(1e-12));
  }
  semid::SimilarityMatrix unit(2);
  unit.set(0, 1, 1.0);
  CHECK(semid::pairwise_score(0, 1, unit, 1e-9) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pairwise_score on a three-session toy matrix") {
  semid::SimilarityMatrix m(3);
  m.set(0, 1, 0.8);
  m.set(0, 2, 0.2);
  m.set(1, 2, 0.4);
  const double eps = 1e-9;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      const double got = semid::pairwise_score(i, j, m, eps);
      CHECK(got == doctest::Approx(brute_force_score(i, j, m, eps)).epsilon(1e-12));
      CHECK(got == semid::pairwise_score(j, i, m, eps));  // exact symmetry
    }
  }
  CHECK_THROWS_AS(semid::pairwise_score(1, 1, m, eps), std::invalid_argument);
}

TEST_CASE("pairwise_score is monotone in the pair similarity") {
  semid::SimilarityMatrix m(4);
  m.set(0, 1, 0.1);
  m.set(0, 2, 0.3);
  m.set(0, 3, 0.6);
  m.set(1, 2, 0.2);
  m.set(1, 3, 0.9);
  m.set(2, 3, 0.5);
  double prev = -1.0;
  for (double s = 0.05; s <= 1.0; s += 0.05) {
    m.set(0, 1, s);
    const double score = semid::pairwise_score(0, 1, m, 1e-9);
    CHECK(score >= prev);
    prev = score;
  }
}

TEST_CASE("score_all_pairs matches per-pair recomputation") {
  const auto set = random_set(5, 2, 30, 7);
  const auto scores = semid::score_all_pairs(set);
  REQUIRE(scores.n == 10);
  REQUIRE(scores.scores.size() == 45);
  CHECK(scores.attack_name == "pairwise");

  const auto m = semid::similarity_matrix(set);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = i + 1; j < 10; ++j) {
      // same gather path: bit-identical
      CHECK(scores.score(i, j) == semid::pairwise_score(i, j, m, semid::kDefaultEpsilon));
      // independent formula evaluation: tight tolerance
      CHECK(std::abs(scores.score(i, j) -
                     brute_force_score(i, j, m, semid::kDefaultEpsilon)) < 1e-12);
      CHECK(scores.score(i, j) >= 0.0);
      CHECK(std::isfinite(scores.score(i, j)));
    }
  }
}

TEST_CASE("three sessions give exactly three entries") {
  const auto set = random_set(3, 1, 20, 3);
  CHECK(semid::score_all_pairs(set).scores.size() == 3);
}

TEST_CASE("duplicate sessions keep every score finite") {
  semid::SessionSet set;
  set.users = {0, 1};
  for (int s = 0; s < 4; ++s) {
    semid::Session session;
    session.user_id = s / 2;
    session.session_id = s;
    session.pages = {2, 3, 2, 3, 5};
    set.sessions.push_back(session);
  }
  const auto scores = semid::score_all_pairs(set);
  for (double v : scores.scores) {
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
  }
}

TEST_CASE("orthogonal fingerprints exercise the epsilon clamp") {
  semid::SessionSet set;
  set.users = {0, 1};
  for (int s = 0; s < 4; ++s) {
    semid::Session session;
    session.user_id = s / 2;
    session.session_id = s;
    session.pages = {static_cast<std::uint8_t>(s * 4), static_cast<std::uint8_t>(s * 4 + 1)};
    set.sessions.push_back(session);
  }
  const auto scores = semid::score_all_pairs(set);
  for (double v : scores.scores) {
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
  }
}

TEST_CASE("crowd-weighted variant multiplies by the inverse-similarity mass") {
  const auto set = random_set(4, 2, 25, 11);
  const auto standard = semid::score_all_pairs(set, 1e-9, semid::ScoreVariant::kStandard);
  const auto crowd = semid::score_all_pairs(set, 1e-9, semid::ScoreVariant::kCrowdWeighted);
  CHECK(crowd.attack_name == "pairwise-crowd");

  const auto m = semid::similarity_matrix(set);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = i + 1; j < 8; ++j) {
      double denom = 0.0;
      for (std::size_t k = 0; k < 8; ++k) {
        if (k != i) denom += 1.0 / std::max(m.at(i, k), 1e-9);
      }
      for (std::size_t k = 0; k < 8; ++k) {
        if (k != j) denom += 1.0 / std::max(m.at(j, k), 1e-9);
      }
      CHECK(std::abs(crowd.score(i, j) - m.at(i, j) * denom) <
            1e-9 * std::max(1.0, std::abs(m.at(i, j) * denom)));
      // the two variants agree on the similarity factor only
      CHECK(standard.score(i, j) != crowd.score(i, j));
    }
  }
}

TEST_CASE("baseline scores are seeded uniforms") {
  const auto set = random_set(4, 2, 15, 21);
  const auto a = semid::baseline_scores(set, 99);
  const auto b = semid::baseline_scores(set, 99);
  CHECK(a == b);
  CHECK(a.attack_name == "baseline");
  CHECK(a.scores != semid::baseline_scores(set, 100).scores);
  for (double v : a.scores) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("baseline mean over ten thousand pairs is near one half") {
  // 142 sessions -> 10011 pairs
  const auto set = random_set(71, 2, 5, 33);
  const auto scores = semid::baseline_scores(set, 12);
  REQUIRE(scores.scores.size() >= 10000);
  double sum = 0.0;
  for (double v : scores.scores) sum += v;
  const double mean = sum / static_cast<double>(scores.scores.size());
  CHECK(mean > 0.48);
  CHECK(mean < 0.52);
}

TEST_CASE("scores CSV round trip is exact") {
  const auto set = random_set(4, 2, 20, 61);
  const auto scores = semid::score_all_pairs(set);

  std::ostringstream out;
  semid::write_scores_csv(scores, out);
  const std::string text = out.str();
  CHECK(text.starts_with("session_a,session_b,score\n"));

  std::istringstream in(text);
  const auto again = semid::read_scores_csv(in, "pairwise");
  CHECK(again == scores);
}

TEST_CASE("scores CSV rejects malformed input") {
  // a >= b is invalid
  std::istringstream swapped("session_a,session_b,score\n1,0,0.5\n");
  CHECK_THROWS(semid::read_scores_csv(swapped, "x"));

  // incomplete coverage: ids imply n=3 but only one pair present
  std::istringstream partial("session_a,session_b,score\n0,2,0.5\n");
  CHECK_THROWS(semid::read_scores_csv(partial, "x"));

  std::istringstream bad_header("a,b,c\n0,1,0.5\n");
  CHECK_THROWS(semid::read_scores_csv(bad_header, "x"));
}
