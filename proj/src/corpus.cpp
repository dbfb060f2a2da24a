#include "semid/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "semid/rng.hpp"

namespace semid {
namespace {

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) tokens.push_back(std::move(tok));
  return tokens;
}

int parse_category(const std::string& tok, int line_no) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line_no, "malformed integer '" + tok + "'");
  }
  if (value < 1 || value > kNumCategories) {
    throw ParseError(line_no, "category index " + std::to_string(value) +
                                  " outside 1.." + std::to_string(kNumCategories));
  }
  return value;
}

}  // namespace

CategoryTable CategoryTable::msnbc() {
  return CategoryTable{{"frontpage", "news", "tech", "local", "opinion",
                        "on-air", "misc", "weather", "health", "living",
                        "business", "sports", "summary", "bbs", "travel",
                        "msn-news", "msn-sports"}};
}

Corpus parse_corpus(std::istream& in) {
  Corpus corpus;
  corpus.provenance = "msnbc-file";

  std::string line;
  int line_no = 0;
  bool have_header = false;
  int next_user = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '%') {
      // recover the tag our own serializer writes; foreign comments are noise
      if (!have_header && line.starts_with("% synthetic corpus")) {
        corpus.provenance = "synthetic";
      }
      continue;
    }
    if (is_blank(line)) continue;

    const auto tokens = tokenize(line);
    if (!have_header) {
      if (tokens.size() != kNumCategories) {
        throw ParseError(line_no, "header must list " +
                                      std::to_string(kNumCategories) +
                                      " category names, got " +
                                      std::to_string(tokens.size()));
      }
      for (int i = 0; i < kNumCategories; ++i) corpus.categories.names[i] = tokens[i];
      have_header = true;
      continue;
    }

    UserTrace trace;
    trace.user_id = next_user++;
    trace.pages.reserve(tokens.size());
    for (const auto& tok : tokens) {
      trace.pages.push_back(static_cast<std::uint8_t>(parse_category(tok, line_no) - 1));
    }
    corpus.traces.push_back(std::move(trace));
  }

  if (!have_header) throw ParseError(line_no, "missing category header");
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  return parse_corpus(in);
}

void serialize_corpus(const Corpus& corpus, std::ostream& out) {
  out << "% " << corpus.provenance << " corpus, " << corpus.traces.size()
      << " users\n";
  for (int i = 0; i < kNumCategories; ++i) {
    if (i > 0) out << ' ';
    out << corpus.categories.names[i];
  }
  out << '\n';
  for (const auto& trace : corpus.traces) {
    for (std::size_t i = 0; i < trace.pages.size(); ++i) {
      if (i > 0) out << ' ';
      out << static_cast<int>(trace.pages[i]) + 1;
    }
    out << '\n';
  }
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path);
  serialize_corpus(corpus, out);
}

std::array<CategoryCount, kNumCategories> category_histogram(const Corpus& corpus) {
  std::array<CategoryCount, kNumCategories> hist{};
  std::int64_t total = 0;
  for (const auto& trace : corpus.traces) {
    for (std::uint8_t page : trace.pages) {
      ++hist[page].count;
      ++total;
    }
  }
  if (total > 0) {
    for (auto& entry : hist) {
      entry.proportion = static_cast<double>(entry.count) / static_cast<double>(total);
    }
  }
  return hist;
}

Corpus generate_synthetic(const SynthConfig& config) {
  Corpus corpus;
  corpus.categories = CategoryTable::msnbc();
  corpus.provenance = "synthetic";
  corpus.traces.reserve(config.n_users);

  for (int user = 0; user < config.n_users; ++user) {
    Rng rng = Rng::derive(config.seed, {stream::kSynthUser, static_cast<std::uint64_t>(user)});

    std::array<double, kNumCategories> theta{};
    rng.dirichlet(config.dirichlet_alpha, theta);

    std::array<double, kNumCategories> cdf{};
    double acc = 0.0;
    for (int i = 0; i < kNumCategories; ++i) {
      acc += theta[i];
      cdf[i] = acc;
    }

    const std::uint64_t raw_len = rng.geometric(static_cast<double>(config.trace_len_mean));
    const std::size_t len =
        std::max<std::uint64_t>(raw_len, static_cast<std::uint64_t>(config.trace_len_min));

    UserTrace trace;
    trace.user_id = user;
    trace.pages.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
      const double u = rng.uniform();
      int cat = kNumCategories - 1;
      for (int j = 0; j < kNumCategories; ++j) {
        if (u < cdf[j]) {
          cat = j;
          break;
        }
      }
      trace.pages.push_back(static_cast<std::uint8_t>(cat));
    }
    corpus.traces.push_back(std::move(trace));
  }
  return corpus;
}

}  // namespace semid
