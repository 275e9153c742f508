#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ctxsim::testing {

// mkdtemp-backed directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

// Letters-only word for an integer id ("qab", "qac", ...), never in the stoplist.
std::string synthetic_word(std::size_t id);

struct PlantedCorpus {
  std::vector<std::string> targets;
  std::vector<int> group;  // planted group per target
};

// Targets split evenly into `groups` topics with disjoint vocabularies; each
// context word is drawn from the shared filler pool with probability
// `filler_fraction`, otherwise from the target's topic. Every document holds
// exactly one occurrence with `margin` words on each side.
struct PlantedSpec {
  std::size_t targets = 6;
  std::size_t groups = 2;
  std::size_t topic_vocabulary = 60;
  std::size_t filler_vocabulary = 40;
  double filler_fraction = 0.2;
  std::size_t documents = 55;
  std::size_t margin = 24;
  std::uint64_t seed = 1;
  // Zipf exponent for within-pool word choice; 0 = uniform.
  double zipf = 0.0;
};

PlantedCorpus write_planted_corpus(const std::filesystem::path& root, const PlantedSpec& spec);

void write_targets_file(const std::filesystem::path& file, const std::vector<std::string>& targets);

}  // namespace ctxsim::testing
