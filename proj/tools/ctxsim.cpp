// ctxsim command line: staged pipeline from a document corpus to similarity
// matrices, principal coordinates and Ward clusters.
//
// Exit codes: 0 success, 1 usage error, 2 data or validation error.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctxsim/error.hpp"
#include "ctxsim/pipeline.hpp"
#include "ctxsim/version.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

void print(const ctxsim::StageOutcome& outcome) {
  if (outcome.cached) {
    std::cout << outcome.stage << ": up to date (cached)\n";
    return;
  }
  for (const auto& line : outcome.messages) std::cout << line << '\n';
  for (const auto& line : outcome.warnings) std::cerr << "warning: " << line << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-overlap similarity, classical MDS and Ward clustering of target words"};
  app.set_version_flag("--version", std::string(ctxsim::kVersion));
  app.set_config("--config", "", "key = value configuration file; command line flags override it");
  app.require_subcommand(1, 1);
  app.fallthrough();

  ctxsim::PipelineConfig config;
  std::string distance = "sqrt2";
  bool all_occurrences = false;
  std::vector<std::size_t> fit;
  std::vector<std::size_t> tail;
  bool force = false;

  app.add_option("--corpus,--corpus_dir", config.corpus_dir,
                 "Corpus root: <corpus>/<target>/<doc>.txt");
  app.add_option("--targets,--targets_file", config.targets_file,
                 "Target list (one word per line); default: bundled 142 emotion names");
  app.add_option("--stoplist,--stoplist_file", config.stoplist_file,
                 "Stoplist (one word per line); default: bundled list");
  app.add_option("--half-width,--half_width", config.half_width, "Words kept on each side of the target")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--max-contexts,--max_contexts", config.max_contexts, "Contexts kept per target")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--min-word-length,--min_word_length", config.min_word_length,
                 "Shortest word kept, in characters")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_flag("--all-occurrences", all_occurrences,
               "Use every qualifying occurrence in a document, not just the first");
  app.add_option("--seed", config.seed, "Null-model seed")->capture_default_str();
  app.add_option("--replicates", config.replicates, "Null-model replicates (seed + r)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--distance", distance, "Similarity-to-distance conversion")
      ->capture_default_str()
      ->check(CLI::IsMember({"sqrt2", "one-minus"}));
  app.add_option("-k,--k", config.k, "Number of clusters in the cut")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--out,--out_dir", config.out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", config.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  app.add_option("--fit", fit, "Linear fit of value vs rank over [r_lo, r_hi]")->expected(2);
  app.add_option("--tail", tail, "Least-squares tail line of the elbow curve over [m_lo, m_hi]")
      ->expected(2);
  app.add_option("--trace", config.trace, "Print the first t merges");

  auto* ingest = app.add_subcommand("ingest", "Build one bag of words per target from the corpus");
  auto* sim = app.add_subcommand("sim", "Normalized similarity matrix, ranks and statistics");
  auto* null = app.add_subcommand("null", "Shuffled null-model similarity matrices");
  auto* mds = app.add_subcommand("mds", "Spectrum, principal coordinates and stress curve");
  auto* cluster = app.add_subcommand("cluster", "Ward dendrogram and k-cut");
  auto* report = app.add_subcommand("report", "Plot-ready CSVs and Markdown summary");
  auto* run = app.add_subcommand("run", "All stages in order, reusing up-to-date outputs");
  run->add_flag("--force", force, "Recompute every stage");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  config.one_per_doc = !all_occurrences;
  if (!fit.empty()) config.rank_fit = std::make_pair(fit[0], fit[1]);
  if (!tail.empty()) config.elbow_tail = ctxsim::TailRange{tail[0], tail[1]};

  try {
    config.distance = ctxsim::parse_distance_kind(distance);
    if (*ingest) {
      print(ctxsim::run_ingest(config));
    } else if (*sim) {
      print(ctxsim::run_similarity(config));
    } else if (*null) {
      print(ctxsim::run_null(config));
    } else if (*mds) {
      print(ctxsim::run_mds(config));
    } else if (*cluster) {
      print(ctxsim::run_cluster(config));
    } else if (*report) {
      print(ctxsim::run_report(config));
    } else if (*run) {
      for (const auto& outcome : ctxsim::run_all(config, force)) print(outcome);
    }
  } catch (const ctxsim::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
