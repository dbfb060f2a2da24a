#include "semid/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "semid/kernels.hpp"

namespace semid {

Fingerprint fingerprint(const Session& session) {
  if (session.pages.empty()) {
    throw std::invalid_argument("cannot fingerprint an empty session");
  }
  Fingerprint fp;
  for (std::uint8_t page : session.pages) fp.proportions[page] += 1.0;
  const double len = static_cast<double>(session.pages.size());
  for (double& component : fp.proportions) component /= len;
  return fp;
}

double cosine(const Fingerprint& a, const Fingerprint& b) {
  // equal inputs must give exactly 1.0, which sqrt rounding cannot promise
  if (a.proportions == b.proportions) return 1.0;
  const auto& k = kernels::active();
  const double dot = k.dot(a.proportions.data(), b.proportions.data(), kNumCategories);
  const double na = k.sum_sq(a.proportions.data(), kNumCategories);
  const double nb = k.sum_sq(b.proportions.data(), kNumCategories);
  const double value = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(value, 0.0, 1.0);
}

std::string fingerprint_to_json(const Fingerprint& fp) {
  nlohmann::json j = nlohmann::json::array();
  for (double component : fp.proportions) j.push_back(component);
  return j.dump();
}

}  // namespace semid
