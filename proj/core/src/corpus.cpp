#include "ctxsim/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ctxsim/error.hpp"
#include "parallel.hpp"

namespace ctxsim {
namespace {

namespace fs = std::filesystem;

bool is_ascii_alnum(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Decodes one UTF-8 sequence starting at s[pos]. Returns the code point and
// its byte length, or length 0 for a malformed sequence.
std::pair<char32_t, std::size_t> decode_utf8(std::string_view s, std::size_t pos) {
  const auto lead = static_cast<unsigned char>(s[pos]);
  std::size_t len = 0;
  char32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    return {0, 0};
  }
  if (pos + len > s.size()) return {0, 0};
  for (std::size_t k = 1; k < len; ++k) {
    const auto c = static_cast<unsigned char>(s[pos + k]);
    if ((c & 0xC0) != 0x80) return {0, 0};
    cp = (cp << 6) | (c & 0x3F);
  }
  return {cp, len};
}

// Non-ASCII code points that separate words.
bool is_unicode_separator(char32_t cp) {
  return (cp >= 0x80 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 ||
         (cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x2E00 && cp <= 0x2E7F) ||
         (cp >= 0x3000 && cp <= 0x303F) || cp == 0xFEFF || cp == 0xFFFD;
}

bool is_numeric(std::string_view word) {
  return !word.empty() &&
         std::all_of(word.begin(), word.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw DataError("cannot read file: " + path.string());
  return std::move(buf).str();
}

std::vector<fs::path> list_documents(const fs::path& dir) {
  std::vector<fs::path> docs;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return docs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.empty() || name.front() == '.') continue;
    if (entry.is_regular_file()) docs.push_back(entry.path());
  }
  std::sort(docs.begin(), docs.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return docs;
}

std::string fold_case(std::string_view word) {
  std::string out(word);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

}  // namespace

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

void CleanupRules::validate() const {
  require(min_word_length >= 1, "min_word_length must be at least 1");
  for (const auto& w : stoplist) {
    require(!w.empty(), "stoplist contains an empty entry");
    for (char c : w) {
      require(c != ' ' && c != '\t' && c != '\n' && c != '\r',
              "stoplist entry contains whitespace: '" + w + "'");
      require(!(c >= 'A' && c <= 'Z'), "stoplist entry is not lowercase: '" + w + "'");
    }
  }
}

bool CleanupRules::accepts(std::string_view word) const {
  if (utf8_length(word) < min_word_length) return false;
  if (drop_numeric && is_numeric(word)) return false;
  return !stoplist.contains(word);
}

std::vector<std::string> tokenize(std::string_view raw_text, const CleanupRules& rules,
                                  std::optional<std::string_view> keep) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    if ((keep && current == *keep) || rules.accepts(current)) out.push_back(current);
    current.clear();
  };

  std::size_t pos = 0;
  while (pos < raw_text.size()) {
    const auto c = static_cast<unsigned char>(raw_text[pos]);
    if (c < 0x80) {
      if (is_ascii_alnum(c)) {
        current.push_back(rules.case_fold && c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a')
                                                                  : static_cast<char>(c));
      } else {
        flush();
      }
      ++pos;
      continue;
    }
    const auto [cp, len] = decode_utf8(raw_text, pos);
    if (len == 0) {
      flush();
      ++pos;
      continue;
    }
    if (is_unicode_separator(cp)) {
      flush();
    } else {
      current.append(raw_text.substr(pos, len));
    }
    pos += len;
  }
  flush();
  return out;
}

std::vector<ContextWindow> extract_contexts(const std::vector<std::string>& tokens,
                                            std::string_view target, std::size_t half_width,
                                            std::size_t max_contexts, bool one_per_doc,
                                            std::string_view source_doc) {
  require(half_width >= 1, "half width must be at least 1");
  require(max_contexts >= 1, "max_contexts must be at least 1");
  std::vector<ContextWindow> windows;
  if (tokens.size() < 2 * half_width + 1) return windows;
  for (std::size_t p = half_width; p + half_width < tokens.size(); ++p) {
    if (tokens[p] != target) continue;
    ContextWindow w;
    w.target = std::string(target);
    w.tokens.assign(tokens.begin() + static_cast<std::ptrdiff_t>(p - half_width),
                    tokens.begin() + static_cast<std::ptrdiff_t>(p + half_width + 1));
    w.source_doc = std::string(source_doc);
    w.half_width = half_width;
    windows.push_back(std::move(w));
    if (one_per_doc || windows.size() >= max_contexts) break;
  }
  return windows;
}

BagOfWords build_bag(const std::vector<ContextWindow>& windows) {
  require(!windows.empty(), "cannot build a bag from zero context windows");
  BagOfWords bag;
  bag.target = windows.front().target;
  for (const auto& w : windows) {
    require(w.target == bag.target,
            "context windows mix targets '" + bag.target + "' and '" + w.target + "'");
    require(w.tokens.size() == 2 * w.half_width + 1 && w.tokens[w.half_width] == w.target,
            "malformed context window for target '" + w.target + "'");
    for (const auto& tok : w.tokens) ++bag.counts[tok];
    bag.total += static_cast<std::int64_t>(w.tokens.size());
  }
  return bag;
}

CorpusResult assemble_corpus(const fs::path& corpus_dir, const std::vector<std::string>& targets,
                             const CorpusOptions& options) {
  options.rules.validate();
  require(options.half_width >= 1, "half width must be at least 1");
  require(options.max_contexts >= 1, "max_contexts must be at least 1");
  require(fs::is_directory(corpus_dir), "corpus directory not found: " + corpus_dir.string());

  CleanupRules single_token_rules;
  single_token_rules.min_word_length = 1;
  single_token_rules.drop_numeric = false;
  single_token_rules.case_fold = options.rules.case_fold;

  std::vector<std::string> folded;
  folded.reserve(targets.size());
  std::set<std::string, std::less<>> seen;
  for (const auto& t : targets) {
    std::string word = options.rules.case_fold ? fold_case(t) : t;
    require(tokenize(word, single_token_rules) == std::vector<std::string>{word},
            "target '" + t + "' is not a single token");
    require(seen.insert(word).second, "duplicate target: '" + word + "'");
    folded.push_back(std::move(word));
  }

  std::vector<std::vector<ContextWindow>> per_target(folded.size());
  detail::parallel_for(folded.size(), options.threads, [&](std::size_t i) {
    const auto& target = folded[i];
    auto& collected = per_target[i];
    // Directories are looked up by the target as given, falling back to the folded form.
    fs::path dir = corpus_dir / targets[i];
    if (!fs::is_directory(dir)) dir = corpus_dir / target;
    for (const auto& doc : list_documents(dir)) {
      if (collected.size() >= options.max_contexts) break;
      const auto tokens = tokenize(read_file(doc), options.rules, target);
      auto windows = extract_contexts(tokens, target, options.half_width,
                                      options.max_contexts - collected.size(), options.one_per_doc,
                                      doc.filename().string());
      for (auto& w : windows) collected.push_back(std::move(w));
    }
  });

  CorpusResult result;
  std::set<std::string, std::less<>> vocabulary;
  for (std::size_t i = 0; i < folded.size(); ++i) {
    auto& windows = per_target[i];
    if (windows.size() < options.max_contexts) {
      result.report.excluded_targets.emplace_back(folded[i], windows.size());
      continue;
    }
    windows.resize(options.max_contexts);
    auto bag = build_bag(windows);
    for (const auto& [word, n] : bag.counts) vocabulary.insert(word);
    result.report.included_targets.push_back(folded[i]);
    result.report.total_words += bag.total;
    result.bags.push_back(std::move(bag));
  }
  result.report.vocabulary_size = vocabulary.size();
  return result;
}

std::vector<std::string> parse_word_list(std::string_view text) {
  std::vector<std::string> words;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    line = line.substr(0, line.find('#'));
    auto word = trim(line);
    if (!word.empty()) words.push_back(std::move(word));
    start = end + 1;
  }
  return words;
}

std::vector<std::string> read_word_list(const fs::path& path) {
  return parse_word_list(read_file(path));
}

void write_bags_jsonl(std::ostream& out, const std::vector<BagOfWords>& bags) {
  for (const auto& bag : bags) {
    nlohmann::json record;
    record["target"] = bag.target;
    record["total"] = bag.total;
    auto& counts = record["counts"] = nlohmann::json::object();
    for (const auto& [word, n] : bag.counts) counts[word] = n;
    out << record.dump() << '\n';
  }
}

std::vector<BagOfWords> read_bags_jsonl(std::istream& in) {
  std::vector<BagOfWords> bags;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
      BagOfWords bag;
      bag.target = record.at("target").get<std::string>();
      bag.total = record.at("total").get<std::int64_t>();
      std::int64_t sum = 0;
      for (const auto& [word, n] : record.at("counts").items()) {
        const auto c = n.get<std::int64_t>();
        require(c > 0, "non-positive count for '" + word + "'");
        bag.counts.emplace(word, c);
        sum += c;
      }
      require(sum == bag.total, "bag total does not match its counts");
      bags.push_back(std::move(bag));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("bags line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("bags line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return bags;
}

}  // namespace ctxsim
