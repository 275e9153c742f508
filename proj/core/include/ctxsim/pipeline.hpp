#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctxsim/cluster.hpp"
#include "ctxsim/corpus.hpp"
#include "ctxsim/spectral.hpp"

namespace ctxsim {

struct PipelineConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path targets_file;   // empty: bundled 142-name list
  std::filesystem::path stoplist_file;  // empty: bundled stoplist
  std::size_t half_width = 20;
  std::size_t max_contexts = 50;
  std::size_t min_word_length = 3;
  bool one_per_doc = true;
  std::uint64_t seed = 0;
  std::size_t replicates = 1;
  DistanceKind distance = DistanceKind::sqrt2;
  std::size_t k = 25;
  std::filesystem::path out_dir = "ctxsim-out";
  unsigned threads = 0;

  // Optional analysis extras.
  std::optional<std::pair<std::size_t, std::size_t>> rank_fit;  // sim/null --fit
  std::optional<TailRange> elbow_tail;                          // mds --tail
  std::size_t trace = 0;                                        // cluster --trace

  // Throws DataError on a non-positive numeric parameter.
  void validate() const;
  // Deterministic JSON snapshot (sorted keys, no timestamps).
  std::string to_json() const;
};

// Result of one stage: artifact paths relative to out_dir with their SHA-256.
struct StageOutcome {
  std::string stage;
  std::map<std::string, std::string> outputs;
  bool cached = false;
  std::vector<std::string> messages;   // human-readable lines for stdout
  std::vector<std::string> warnings;   // for stderr
};

// Stage names in execution order.
inline const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names{"ingest", "sim", "null", "mds", "cluster", "report"};
  return names;
}

// Every stage reads its inputs from files under out_dir (ingest reads the
// corpus), writes its artifacts there, and records input and output hashes
// in out_dir/manifest.json. Missing upstream artifacts raise DataError
// naming the stage that produces them.
StageOutcome run_ingest(const PipelineConfig& config);
StageOutcome run_similarity(const PipelineConfig& config);
StageOutcome run_null(const PipelineConfig& config);
StageOutcome run_mds(const PipelineConfig& config);
StageOutcome run_cluster(const PipelineConfig& config);
StageOutcome run_report(const PipelineConfig& config);

// All stages in order. Unless `force` is set, a stage whose recorded input
// fingerprint matches and whose outputs are intact is skipped.
std::vector<StageOutcome> run_all(const PipelineConfig& config, bool force = false);

// Artifact file names.
namespace artifacts {
inline constexpr const char* kBags = "bags.jsonl";
inline constexpr const char* kCorpusReport = "corpus_report.json";
inline constexpr const char* kSimilarity = "S.csv";
inline constexpr const char* kRanked = "ranked.csv";
inline constexpr const char* kStats = "stats.json";
inline constexpr const char* kFit = "fit.json";
inline constexpr const char* kNullSummary = "null_summary.json";
inline constexpr const char* kSpectrum = "spectrum.csv";
inline constexpr const char* kEigenvectors = "eigenvectors.csv";
inline constexpr const char* kCoords = "coords.csv";
inline constexpr const char* kStress = "stress.csv";
inline constexpr const char* kElbow = "elbow_diagnostics.csv";
inline constexpr const char* kMdsSummary = "mds_summary.json";
inline constexpr const char* kMerges = "merges.jsonl";
inline constexpr const char* kNewick = "dendrogram.newick";
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kConfig = "config.json";

std::string null_matrix(std::size_t replicate);  // R_<r>.csv
std::string null_ranked(std::size_t replicate);  // R_ranked_<r>.csv
std::string null_stats(std::size_t replicate);   // R_stats_<r>.json
std::string null_fit(std::size_t replicate);     // R_fit_<r>.json
std::string clusters(std::size_t k);             // clusters_k<k>.json
}  // namespace artifacts

}  // namespace ctxsim
