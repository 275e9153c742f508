#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ctxsim {

// Filters applied while turning raw text into "valid words".
struct CleanupRules {
  std::size_t min_word_length = 3;  // in code points; shorter tokens are dropped
  std::set<std::string, std::less<>> stoplist;
  bool drop_numeric = true;
  bool case_fold = true;

  // Throws DataError if a stoplist entry is empty, has whitespace or
  // uppercase, or min_word_length is zero.
  void validate() const;

  // True if `word` (already split and folded) survives every filter.
  bool accepts(std::string_view word) const;
};

struct ContextWindow {
  std::string target;
  std::vector<std::string> tokens;  // 2*half_width + 1, target in the middle
  std::string source_doc;
  std::size_t half_width = 20;
};

struct BagOfWords {
  std::string target;
  std::map<std::string, std::int64_t, std::less<>> counts;
  std::int64_t total = 0;

  std::int64_t count(std::string_view word) const {
    auto it = counts.find(word);
    return it == counts.end() ? 0 : it->second;
  }
};

struct CorpusReport {
  std::vector<std::string> included_targets;
  std::vector<std::pair<std::string, std::size_t>> excluded_targets;  // (target, contexts found)
  std::size_t vocabulary_size = 0;  // K, distinct words over all included bags
  std::int64_t total_words = 0;
};

struct CorpusOptions {
  CleanupRules rules;
  std::size_t half_width = 20;
  std::size_t max_contexts = 50;
  bool one_per_doc = true;
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Splits on whitespace and any non-alphanumeric ASCII byte; non-ASCII code
// points count as word characters except common Unicode spaces and
// punctuation. `keep` names a token that bypasses the length/stoplist/numeric
// filters (the target word at its own positions).
std::vector<std::string> tokenize(std::string_view raw_text, const CleanupRules& rules,
                                  std::optional<std::string_view> keep = std::nullopt);

// Windows of `tokens[p-h .. p+h]` around occurrences of `target` that have
// at least h tokens on each side. With one_per_doc only the first qualifying
// occurrence is emitted.
std::vector<ContextWindow> extract_contexts(const std::vector<std::string>& tokens,
                                            std::string_view target, std::size_t half_width,
                                            std::size_t max_contexts, bool one_per_doc,
                                            std::string_view source_doc = {});

// Throws DataError on an empty list or mixed targets.
BagOfWords build_bag(const std::vector<ContextWindow>& windows);

struct CorpusResult {
  std::vector<BagOfWords> bags;
  CorpusReport report;
};

// Reads `<corpus_dir>/<target>/*` in lexicographic filename order. Targets
// with fewer than max_contexts windows are excluded; a missing directory
// counts as zero contexts. Unreadable files raise DataError.
CorpusResult assemble_corpus(const std::filesystem::path& corpus_dir,
                             const std::vector<std::string>& targets,
                             const CorpusOptions& options);

// One word per line; blank lines and `#` comments ignored; surrounding
// whitespace trimmed.
std::vector<std::string> parse_word_list(std::string_view text);
std::vector<std::string> read_word_list(const std::filesystem::path& path);

std::string_view bundled_targets_text();
std::string_view bundled_stoplist_text();

// JSON-lines: {"counts":{...},"target":...,"total":...}, keys sorted.
void write_bags_jsonl(std::ostream& out, const std::vector<BagOfWords>& bags);
std::vector<BagOfWords> read_bags_jsonl(std::istream& in);

std::size_t utf8_length(std::string_view s);

}  // namespace ctxsim
