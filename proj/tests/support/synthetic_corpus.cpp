#include "synthetic_corpus.hpp"

#include <stdlib.h>

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace ctxsim::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  auto pattern = (fs::temp_directory_path() / "ctxsim-test-XXXXXX").string();
  if (mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string synthetic_word(std::size_t id) {
  std::string out;
  do {
    out.insert(out.begin(), static_cast<char>('a' + id % 26));
    id /= 26;
  } while (id > 0);
  while (out.size() < 3) out.insert(out.begin(), 'a');
  return "q" + out;
}

namespace {

// Index in [0, size) with probability proportional to 1 / (k + 1)^s.
class PoolSampler {
 public:
  PoolSampler(std::size_t size, double exponent) {
    std::vector<double> weights(size);
    for (std::size_t k = 0; k < size; ++k)
      weights[k] = exponent == 0.0 ? 1.0 : 1.0 / std::pow(static_cast<double>(k + 1), exponent);
    dist_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
  }
  std::size_t operator()(std::mt19937_64& rng) { return dist_(rng); }

 private:
  std::discrete_distribution<std::size_t> dist_;
};

}  // namespace

PlantedCorpus write_planted_corpus(const fs::path& root, const PlantedSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PoolSampler topic_pick(spec.topic_vocabulary, spec.zipf);
  PoolSampler filler_pick(spec.filler_vocabulary, spec.zipf);

  // Word ids: filler first, then one disjoint block per group, then targets.
  auto filler_word = [&](std::size_t k) { return synthetic_word(k); };
  auto topic_word = [&](std::size_t g, std::size_t k) {
    return synthetic_word(spec.filler_vocabulary + g * spec.topic_vocabulary + k);
  };

  PlantedCorpus corpus;
  const std::size_t first_target_id = spec.filler_vocabulary + spec.groups * spec.topic_vocabulary;
  for (std::size_t t = 0; t < spec.targets; ++t) {
    corpus.targets.push_back("t" + synthetic_word(first_target_id + t));
    corpus.group.push_back(static_cast<int>(t * spec.groups / spec.targets));
  }

  for (std::size_t t = 0; t < spec.targets; ++t) {
    const auto dir = root / corpus.targets[t];
    fs::create_directories(dir);
    const auto g = static_cast<std::size_t>(corpus.group[t]);
    for (std::size_t d = 0; d < spec.documents; ++d) {
      std::string text;
      for (std::size_t w = 0; w < 2 * spec.margin + 1; ++w) {
        if (w == spec.margin) {
          text += corpus.targets[t];
        } else if (unit(rng) < spec.filler_fraction) {
          text += filler_word(filler_pick(rng));
        } else {
          text += topic_word(g, topic_pick(rng));
        }
        text += (w % 9 == 8) ? ".\n" : " ";
      }
      char name[32];
      std::snprintf(name, sizeof name, "%04zu.txt", d + 1);
      std::ofstream(dir / name) << text;
    }
  }
  return corpus;
}

void write_targets_file(const fs::path& file, const std::vector<std::string>& targets) {
  std::ofstream out(file);
  for (const auto& t : targets) out << t << '\n';
}

}  // namespace ctxsim::testing
