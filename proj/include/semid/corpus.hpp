#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace semid {

inline constexpr int kNumCategories = 17;

// Category labels in file order. Index 0 holds category 1 of the file format;
// files and all user-facing output stay 1-based, in-memory pages are 0-based.
struct CategoryTable {
  std::array<std::string, kNumCategories> names;

  // The msnbc.com page categories, in the order the public file lists them.
  static CategoryTable msnbc();

  bool operator==(const CategoryTable&) const = default;
};

struct UserTrace {
  int user_id = 0;                   // line index within the data section
  std::vector<std::uint8_t> pages;   // 0-based category indices

  bool operator==(const UserTrace&) const = default;
};

struct Corpus {
  CategoryTable categories;
  std::vector<UserTrace> traces;
  std::string provenance;  // "msnbc-file" or "synthetic"

  bool operator==(const Corpus&) const = default;
};

struct CategoryCount {
  std::int64_t count = 0;
  double proportion = 0.0;
};

// Synthetic stand-in for the browsing log: every user gets a private category
// distribution drawn from a symmetric Dirichlet (small alpha = heavy skew) and
// a geometric trace length, then visits pages i.i.d. from that distribution.
struct SynthConfig {
  int n_users = 0;
  double dirichlet_alpha = 1.0;
  int trace_len_mean = 100;
  int trace_len_min = 1;
  std::uint64_t seed = 0;

  bool operator==(const SynthConfig&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

// Reads the sequence file format: '%' comment lines are skipped, the first
// remaining line names the 17 categories, every later non-blank line is one
// user's visits as 1-based category indices. Accepts LF and CRLF.
Corpus parse_corpus(std::istream& in);
Corpus load_corpus(const std::string& path);

void serialize_corpus(const Corpus& corpus, std::ostream& out);
void save_corpus(const Corpus& corpus, const std::string& path);

// Per-category visit counts and proportions over the whole corpus.
std::array<CategoryCount, kNumCategories> category_histogram(const Corpus& corpus);

Corpus generate_synthetic(const SynthConfig& config);

}  // namespace semid
