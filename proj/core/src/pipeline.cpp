#include "ctxsim/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "ctxsim/error.hpp"
#include "ctxsim/io.hpp"
#include "ctxsim/null_model.hpp"
#include "ctxsim/rank_stats.hpp"
#include "ctxsim/similarity.hpp"
#include "ctxsim/version.hpp"

namespace ctxsim {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace artifacts {
std::string null_matrix(std::size_t r) { return "R_" + std::to_string(r) + ".csv"; }
std::string null_ranked(std::size_t r) { return "R_ranked_" + std::to_string(r) + ".csv"; }
std::string null_stats(std::size_t r) { return "R_stats_" + std::to_string(r) + ".json"; }
std::string null_fit(std::size_t r) { return "R_fit_" + std::to_string(r) + ".json"; }
std::string clusters(std::size_t k) { return "clusters_k" + std::to_string(k) + ".json"; }
}  // namespace artifacts

void PipelineConfig::validate() const {
  require(half_width >= 1, "half_width must be positive");
  require(max_contexts >= 1, "max_contexts must be positive");
  require(min_word_length >= 1, "min_word_length must be positive");
  require(replicates >= 1, "replicates must be positive");
  require(k >= 1, "k must be positive");
  require(!out_dir.empty(), "an output directory is required");
  if (rank_fit)
    require(rank_fit->first >= 1 && rank_fit->first < rank_fit->second,
            "--fit needs 1 <= r_lo < r_hi");
  if (elbow_tail)
    require(elbow_tail->lo >= 1 && elbow_tail->lo < elbow_tail->hi, "--tail needs 1 <= lo < hi");
}

namespace {

json config_json(const PipelineConfig& c) {
  json j;
  j["corpus_dir"] = c.corpus_dir.string();
  j["targets_file"] = c.targets_file.empty() ? "<bundled>" : c.targets_file.string();
  j["stoplist_file"] = c.stoplist_file.empty() ? "<bundled>" : c.stoplist_file.string();
  j["half_width"] = c.half_width;
  j["max_contexts"] = c.max_contexts;
  j["min_word_length"] = c.min_word_length;
  j["one_per_doc"] = c.one_per_doc;
  j["seed"] = c.seed;
  j["replicates"] = c.replicates;
  j["distance"] = std::string(to_string(c.distance));
  j["k"] = c.k;
  j["out_dir"] = c.out_dir.string();
  j["threads"] = c.threads;
  j["fit"] = c.rank_fit ? json::array({c.rank_fit->first, c.rank_fit->second}) : json(nullptr);
  j["tail"] = c.elbow_tail ? json::array({c.elbow_tail->lo, c.elbow_tail->hi}) : json(nullptr);
  j["trace"] = c.trace;
  return j;
}

}  // namespace

std::string PipelineConfig::to_json() const { return config_json(*this).dump(2) + "\n"; }

namespace {

// ----- shared helpers -------------------------------------------------------

const std::map<std::string, std::string>& producer_of() {
  static const std::map<std::string, std::string> m{
      {artifacts::kBags, "ingest"},          {artifacts::kCorpusReport, "ingest"},
      {artifacts::kSimilarity, "sim"},       {artifacts::kRanked, "sim"},
      {artifacts::kStats, "sim"},            {artifacts::kSpectrum, "mds"},
      {artifacts::kCoords, "mds"},           {artifacts::kStress, "mds"},
      {artifacts::kElbow, "mds"},            {artifacts::kMdsSummary, "mds"},
      {artifacts::kMerges, "cluster"},       {artifacts::kNewick, "cluster"},
      {artifacts::null_matrix(0), "null"},   {artifacts::null_ranked(0), "null"},
      {artifacts::null_stats(0), "null"},
  };
  return m;
}

std::string read_artifact(const PipelineConfig& c, const std::string& name) {
  const auto path = c.out_dir / name;
  if (!fs::exists(path)) {
    auto it = producer_of().find(name);
    std::string stage = it != producer_of().end() ? it->second
                        : name.rfind("clusters_k", 0) == 0 ? "cluster"
                                                           : "?";
    throw DataError("missing artifact " + path.string() + " (produced by stage '" + stage +
                    "'; run `ctxsim " + stage + "` first)");
  }
  return read_text_file(path);
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DataError("malformed JSON in " + what + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }
std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> load_targets(const PipelineConfig& c) {
  return c.targets_file.empty() ? parse_word_list(bundled_targets_text())
                                : read_word_list(c.targets_file);
}

CleanupRules load_rules(const PipelineConfig& c) {
  CleanupRules rules;
  rules.min_word_length = c.min_word_length;
  const auto words = c.stoplist_file.empty() ? parse_word_list(bundled_stoplist_text())
                                             : read_word_list(c.stoplist_file);
  rules.stoplist.insert(words.begin(), words.end());
  rules.validate();
  return rules;
}

std::vector<BagOfWords> load_bags(const PipelineConfig& c) {
  std::istringstream in(read_artifact(c, artifacts::kBags));
  return read_bags_jsonl(in);
}

SimilarityMatrix load_similarity(const PipelineConfig& c) {
  return parse_similarity_csv(read_artifact(c, artifacts::kSimilarity));
}

std::string ranked_csv(const RankedEntries& ranked) {
  std::ostringstream out;
  write_csv_row(out, {"rank", "value", "label_i", "label_j"});
  for (const auto& e : ranked)
    write_csv_row(out, {std::to_string(e.rank), format_sig9(e.value), e.label_i, e.label_j});
  return out.str();
}

json stats_json(const SummaryStats& s) {
  json j;
  j["mean"] = s.mean;
  j["std"] = s.std;
  j["n"] = s.n;
  j["entries"] = s.entries;
  return j;
}

json fit_json(const LinearFit& fit, std::size_t lo, std::size_t hi) {
  json j;
  j["r_lo"] = lo;
  j["r_hi"] = hi;
  j["intercept"] = fit.intercept;
  j["slope"] = fit.slope;
  return j;
}

// ----- stage machinery -------------------------------------------------------

struct Prepared {
  json settings;                                // config values the stage depends on
  std::map<std::string, std::string> inputs;    // input name -> sha256
};

struct Produced {
  std::map<std::string, std::string> files;  // relative path -> content
  std::vector<std::string> messages;
  std::vector<std::string> warnings;
};

struct Stage {
  std::string name;
  std::function<Prepared(const PipelineConfig&)> prepare;
  std::function<Produced(const PipelineConfig&)> execute;
};

std::string fingerprint(const Prepared& p) {
  json j;
  j["settings"] = p.settings;
  j["inputs"] = p.inputs;
  return sha256_hex(j.dump());
}

json load_manifest(const PipelineConfig& c) {
  const auto path = c.out_dir / artifacts::kManifest;
  if (!fs::exists(path)) return json::object();
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception&) {
    return json::object();  // unreadable manifest just disables caching
  }
}

bool outputs_intact(const PipelineConfig& c, const json& entry) {
  if (!entry.contains("outputs")) return false;
  for (const auto& [name, hash] : entry["outputs"].items()) {
    const auto path = c.out_dir / name;
    if (!fs::exists(path) || sha256_hex(read_text_file(path)) != hash.get<std::string>())
      return false;
  }
  return true;
}

StageOutcome execute_stage(const Stage& stage, const PipelineConfig& config, bool allow_cache) {
  config.validate();
  const Prepared prepared = stage.prepare(config);
  const std::string fp = fingerprint(prepared);
  json manifest = load_manifest(config);

  StageOutcome outcome;
  outcome.stage = stage.name;
  if (allow_cache && manifest.contains("stages") && manifest["stages"].contains(stage.name)) {
    const auto& entry = manifest["stages"][stage.name];
    if (entry.value("fingerprint", "") == fp && outputs_intact(config, entry)) {
      outcome.cached = true;
      for (const auto& [name, hash] : entry["outputs"].items())
        outcome.outputs[name] = hash.get<std::string>();
      return outcome;
    }
  }

  Produced produced = stage.execute(config);

  // Drop files the previous run of this stage wrote but this run does not.
  if (manifest.contains("stages") && manifest["stages"].contains(stage.name)) {
    for (const auto& [name, hash] : manifest["stages"][stage.name]["outputs"].items()) {
      if (!produced.files.contains(name)) {
        std::error_code ec;
        fs::remove(config.out_dir / name, ec);
      }
    }
  }
  for (const auto& [name, content] : produced.files) {
    write_text_file(config.out_dir / name, content);
    outcome.outputs[name] = sha256_hex(content);
  }
  outcome.messages = std::move(produced.messages);
  outcome.warnings = std::move(produced.warnings);

  json entry;
  entry["fingerprint"] = fp;
  entry["settings"] = prepared.settings;
  entry["inputs"] = prepared.inputs;
  entry["outputs"] = outcome.outputs;
  entry["finished_at"] = utc_now();
  manifest["toolkit_version"] = kVersion;
  manifest["config"] = config_json(config);
  manifest["stages"][stage.name] = std::move(entry);
  write_text_file(config.out_dir / artifacts::kManifest, dump(manifest));
  write_text_file(config.out_dir / artifacts::kConfig, config.to_json());
  return outcome;
}

std::map<std::string, std::string> hash_artifacts(const PipelineConfig& c,
                                                  const std::vector<std::string>& names) {
  std::map<std::string, std::string> out;
  for (const auto& name : names) out[name] = sha256_hex(read_artifact(c, name));
  return out;
}

// ----- ingest ------------------------------------------------------------------

std::string corpus_fingerprint(const PipelineConfig& c, const std::vector<std::string>& targets) {
  std::string listing;
  for (const auto& target : targets) {
    auto dir = c.corpus_dir / target;
    if (!fs::is_directory(dir)) {
      std::string folded = target;
      for (auto& ch : folded)
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
      dir = c.corpus_dir / folded;
      if (!fs::is_directory(dir)) continue;
    }
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
      auto name = entry.path().filename().string();
      if (entry.is_regular_file() && !name.empty() && name.front() != '.')
        names.push_back(std::move(name));
    }
    std::sort(names.begin(), names.end());
    for (const auto& name : names)
      listing += target + "/" + name + " " + sha256_hex(read_text_file(dir / name)) + "\n";
  }
  return sha256_hex(listing);
}

Prepared prepare_ingest(const PipelineConfig& c) {
  require(!c.corpus_dir.empty(), "ingest needs a corpus directory (--corpus)");
  require(fs::is_directory(c.corpus_dir), "corpus directory not found: " + c.corpus_dir.string());
  Prepared p;
  p.settings["half_width"] = c.half_width;
  p.settings["max_contexts"] = c.max_contexts;
  p.settings["min_word_length"] = c.min_word_length;
  p.settings["one_per_doc"] = c.one_per_doc;
  const std::string targets_text =
      c.targets_file.empty() ? std::string(bundled_targets_text()) : read_text_file(c.targets_file);
  const std::string stoplist_text = c.stoplist_file.empty() ? std::string(bundled_stoplist_text())
                                                            : read_text_file(c.stoplist_file);
  p.inputs["targets"] = sha256_hex(targets_text);
  p.inputs["stoplist"] = sha256_hex(stoplist_text);
  p.inputs["corpus"] = corpus_fingerprint(c, parse_word_list(targets_text));
  return p;
}

Produced execute_ingest(const PipelineConfig& c) {
  CorpusOptions options;
  options.rules = load_rules(c);
  options.half_width = c.half_width;
  options.max_contexts = c.max_contexts;
  options.one_per_doc = c.one_per_doc;
  options.threads = c.threads;
  const auto targets = load_targets(c);
  const auto result = assemble_corpus(c.corpus_dir, targets, options);

  Produced out;
  std::ostringstream bags;
  write_bags_jsonl(bags, result.bags);
  out.files[artifacts::kBags] = bags.str();

  json report;
  report["included_targets"] = result.report.included_targets;
  report["excluded_targets"] = json::array();
  for (const auto& [target, found] : result.report.excluded_targets)
    report["excluded_targets"].push_back({{"target", target}, {"contexts_found", found}});
  report["vocabulary_size"] = result.report.vocabulary_size;
  report["total_words"] = result.report.total_words;
  report["half_width"] = c.half_width;
  report["max_contexts"] = c.max_contexts;
  report["bag_size"] = c.max_contexts * (2 * c.half_width + 1);
  out.files[artifacts::kCorpusReport] = dump(report);

  if (targets.empty()) out.warnings.push_back("target list is empty; no bags were produced");
  out.messages.push_back("ingest: " + std::to_string(result.report.included_targets.size()) +
                         " targets included, " +
                         std::to_string(result.report.excluded_targets.size()) +
                         " excluded, K = " + std::to_string(result.report.vocabulary_size));
  for (const auto& [target, found] : result.report.excluded_targets)
    out.messages.push_back("  excluded " + target + " (" + std::to_string(found) + " contexts)");
  return out;
}

// ----- sim / null ----------------------------------------------------------------

void add_similarity_outputs(Produced& out, const SimilarityMatrix& m, const PipelineConfig& c,
                            const std::string& matrix_name, const std::string& ranked_name,
                            const std::string& stats_name, const std::string& fit_name,
                            json extra_stats) {
  const auto ranked = rank_entries(m);
  const auto stats = summary_stats(m);
  out.files[matrix_name] = matrix_csv(m);
  out.files[ranked_name] = ranked_csv(ranked);
  json s = stats_json(stats);
  s.update(extra_stats);
  out.files[stats_name] = dump(s);
  if (c.rank_fit) {
    const auto fit = fit_rank_range(ranked, c.rank_fit->first, c.rank_fit->second);
    out.files[fit_name] = dump(fit_json(fit, c.rank_fit->first, c.rank_fit->second));
  }
}

Prepared prepare_sim(const PipelineConfig& c) {
  Prepared p;
  p.settings["fit"] = config_json(c)["fit"];
  p.inputs = hash_artifacts(c, {artifacts::kBags});
  return p;
}

Produced execute_sim(const PipelineConfig& c) {
  const auto bags = load_bags(c);
  require(bags.size() >= 2, "similarity needs at least two bags, found " +
                                std::to_string(bags.size()));
  const auto m = build_similarity_matrix(bags, c.threads);
  Produced out;
  add_similarity_outputs(out, m, c, artifacts::kSimilarity, artifacts::kRanked, artifacts::kStats,
                         artifacts::kFit, json::object());
  const auto stats = summary_stats(m);
  out.messages.push_back("sim: n = " + std::to_string(m.size()) + ", mean = " +
                         format_sig9(stats.mean) + ", std = " + format_sig9(stats.std));
  return out;
}

Prepared prepare_null(const PipelineConfig& c) {
  Prepared p;
  p.settings["seed"] = c.seed;
  p.settings["replicates"] = c.replicates;
  p.settings["fit"] = config_json(c)["fit"];
  p.inputs = hash_artifacts(c, {artifacts::kBags});
  return p;
}

Produced execute_null(const PipelineConfig& c) {
  const auto bags = load_bags(c);
  require(bags.size() >= 2, "null model needs at least two bags, found " +
                                std::to_string(bags.size()));
  Produced out;
  json summary;
  summary["replicates"] = c.replicates;
  summary["seed"] = c.seed;
  summary["runs"] = json::array();
  for (std::size_t r = 0; r < c.replicates; ++r) {
    const std::uint64_t seed = c.seed + r;
    const auto shuffled = shuffle_null_model(bags, seed);
    const auto m = build_similarity_matrix(shuffled, c.threads);
    json extra;
    extra["seed"] = seed;
    extra["replicate"] = r;
    add_similarity_outputs(out, m, c, artifacts::null_matrix(r), artifacts::null_ranked(r),
                           artifacts::null_stats(r), artifacts::null_fit(r), extra);
    const auto stats = summary_stats(m);
    summary["runs"].push_back(
        {{"replicate", r}, {"seed", seed}, {"mean", stats.mean}, {"std", stats.std}});
    out.messages.push_back("null: replicate " + std::to_string(r) + " (seed " +
                           std::to_string(seed) + "), mean = " + format_sig9(stats.mean) +
                           ", std = " + format_sig9(stats.std));
  }
  out.files[artifacts::kNullSummary] = dump(summary);
  return out;
}

// ----- mds -----------------------------------------------------------------------

Prepared prepare_mds(const PipelineConfig& c) {
  Prepared p;
  p.settings["tail"] = config_json(c)["tail"];
  p.inputs = hash_artifacts(c, {artifacts::kSimilarity});
  return p;
}

Produced execute_mds(const PipelineConfig& c) {
  const auto s = load_similarity(c);
  const std::size_t n = s.size();
  require(n >= 1, "similarity matrix is empty");
  const auto spectrum = eigendecompose(s);

  PrincipalCoordinates pc;
  try {
    pc = principal_coordinates(spectrum, n);
  } catch (const DataError& e) {
    throw DataError(std::string(e.what()) + " (lambda_max = " +
                    format_sig9(spectrum.eigenvalues.front()) +
                    ", lambda_min = " + format_sig9(spectrum.eigenvalues.back()) + ")");
  }
  const auto elbow = elbow_curve(s.values(), spectrum, c.elbow_tail);

  Produced out;
  {
    std::ostringstream csv;
    write_csv_row(csv, {"a", "eigenvalue"});
    for (std::size_t a = 0; a < n; ++a)
      write_csv_row(csv, {std::to_string(a + 1), format_sig9(spectrum.eigenvalues[a])});
    out.files[artifacts::kSpectrum] = csv.str();
  }
  {
    std::ostringstream csv;
    std::vector<std::string> header{"a"};
    header.insert(header.end(), s.labels().begin(), s.labels().end());
    write_csv_row(csv, header);
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<std::string> row{std::to_string(a + 1)};
      for (std::size_t i = 0; i < n; ++i) row.push_back(format_sig9(spectrum.eigenvectors(a, i)));
      write_csv_row(csv, row);
    }
    out.files[artifacts::kEigenvectors] = csv.str();
  }
  {
    std::ostringstream csv;
    std::vector<std::string> header{"label"};
    for (std::size_t a = 0; a < n; ++a) header.push_back("x" + std::to_string(a + 1));
    write_csv_row(csv, header);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> row{s.labels()[i]};
      for (std::size_t a = 0; a < n; ++a) row.push_back(format_sig9(pc.coords(i, a)));
      write_csv_row(csv, row);
    }
    out.files[artifacts::kCoords] = csv.str();
  }
  {
    std::ostringstream stress_csv, elbow_csv;
    write_csv_row(stress_csv, {"m", "Q"});
    write_csv_row(elbow_csv, {"m", "Q", "delta_q", "curvature"});
    for (std::size_t k = 0; k < n; ++k) {
      const auto& p = elbow.points[k];
      write_csv_row(stress_csv, {std::to_string(p.m), format_sig9(p.q)});
      write_csv_row(elbow_csv,
                    {std::to_string(p.m), format_sig9(p.q),
                     k < elbow.first_differences.size() ? format_sig9(elbow.first_differences[k])
                                                        : "",
                     k >= 1 && k - 1 < elbow.curvature.size() ? format_sig9(elbow.curvature[k - 1])
                                                              : ""});
    }
    out.files[artifacts::kStress] = stress_csv.str();
    out.files[artifacts::kElbow] = elbow_csv.str();
  }

  double trace = 0.0, eig_sum = 0.0, max_residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += s(i, i);
  for (double l : spectrum.eigenvalues) eig_sum += l;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      double su = 0.0;
      for (std::size_t j = 0; j < n; ++j) su += s(i, j) * spectrum.eigenvectors(a, j);
      max_residual = std::max(max_residual,
                              std::abs(su - spectrum.eigenvalues[a] * spectrum.eigenvectors(a, i)));
    }
  }
  json summary;
  summary["n"] = n;
  summary["sweeps"] = spectrum.sweeps;
  summary["trace"] = trace;
  summary["eigenvalue_sum"] = eig_sum;
  summary["lambda_max"] = spectrum.eigenvalues.front();
  summary["lambda_min"] = spectrum.eigenvalues.back();
  summary["lambda_ratio_1_2"] =
      n >= 2 && spectrum.eigenvalues[1] != 0.0 ? json(spectrum.eigenvalues[0] / spectrum.eigenvalues[1])
                                               : json(nullptr);
  summary["max_eigen_residual"] = max_residual;
  summary["clamped_eigenvalues"] = pc.clamped;
  summary["coordinate_means"] = pc.column_means();
  if (elbow.tail_fit) {
    summary["tail_fit"] = {{"lo", elbow.tail_lo},
                           {"hi", elbow.tail_hi},
                           {"slope", elbow.tail_fit->slope},
                           {"intercept", elbow.tail_fit->intercept}};
  } else {
    summary["tail_fit"] = nullptr;
  }
  out.files[artifacts::kMdsSummary] = dump(summary);

  out.messages.push_back("mds: n = " + std::to_string(n) + ", lambda_1 = " +
                         format_sig9(spectrum.eigenvalues.front()) + ", Q(1) = " +
                         format_sig9(elbow.points.front().q) + ", Q(n) = " +
                         format_sig9(elbow.points.back().q));
  if (pc.clamped > 0)
    out.warnings.push_back(std::to_string(pc.clamped) +
                           " slightly negative eigenvalue(s) clamped to zero");
  return out;
}

// ----- cluster ---------------------------------------------------------------------

Prepared prepare_cluster(const PipelineConfig& c) {
  Prepared p;
  p.settings["distance"] = std::string(to_string(c.distance));
  p.settings["k"] = c.k;
  p.settings["trace"] = c.trace;
  p.inputs = hash_artifacts(c, {artifacts::kSimilarity});
  return p;
}

std::string describe_merge(const TraceEntry& e) {
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& w : v) s += (s.empty() ? "" : " ") + w;
    return "{" + s + "}";
  };
  return "merge " + std::to_string(e.merge.step) + ": " + join(e.left_members) + " + " +
         join(e.right_members) + "  cost = " + format_sig9(e.merge.cost) +
         "  size = " + std::to_string(e.merge.size);
}

Produced execute_cluster(const PipelineConfig& c) {
  const auto s = load_similarity(c);
  const std::size_t n = s.size();
  require(n >= 2, "clustering needs at least two targets");
  require(c.k <= n, "k = " + std::to_string(c.k) + " exceeds the number of targets n = " +
                        std::to_string(n));
  require(c.trace <= n - 1, "--trace " + std::to_string(c.trace) + " exceeds the " +
                                std::to_string(n - 1) + " merges");
  const auto dend = ward_linkage(similarity_to_distance(s, c.distance));
  const auto partition = cut(dend, c.k);

  Produced out;
  std::ostringstream merges;
  write_merges_jsonl(merges, dend);
  out.files[artifacts::kMerges] = merges.str();
  out.files[artifacts::kNewick] = to_newick(dend) + "\n";

  ordered_json clusters;
  clusters["k"] = partition.k;
  clusters["distance"] = std::string(to_string(c.distance));
  clusters["clusters"] = ordered_json::object();
  for (std::size_t g = 0; g < partition.members.size(); ++g)
    clusters["clusters"][std::to_string(g + 1)] = partition.members[g];
  out.files[artifacts::clusters(c.k)] = dump(clusters);

  out.messages.push_back("cluster: n = " + std::to_string(n) + ", k = " + std::to_string(c.k) +
                         ", distance = " + std::string(to_string(c.distance)));
  for (const auto& e : merge_trace(dend, c.trace)) out.messages.push_back(describe_merge(e));
  return out;
}

// ----- report ----------------------------------------------------------------------

std::vector<std::string> report_inputs(const PipelineConfig& c) {
  return {artifacts::kCorpusReport, artifacts::kStats,        artifacts::kRanked,
          artifacts::null_stats(0), artifacts::null_ranked(0), artifacts::kElbow,
          artifacts::kCoords,       artifacts::kMdsSummary,   artifacts::kMerges,
          artifacts::clusters(c.k)};
}

Prepared prepare_report(const PipelineConfig& c) {
  Prepared p;
  p.settings["k"] = c.k;
  p.inputs = hash_artifacts(c, report_inputs(c));
  return p;
}

std::vector<std::vector<std::string>> load_csv(const PipelineConfig& c, const std::string& name) {
  auto rows = parse_csv(read_artifact(c, name));
  require(!rows.empty(), name + " is empty");
  return rows;
}

Produced execute_report(const PipelineConfig& c) {
  const auto corpus = parse_json(read_artifact(c, artifacts::kCorpusReport), artifacts::kCorpusReport);
  const auto s_stats = parse_json(read_artifact(c, artifacts::kStats), artifacts::kStats);
  const auto r_stats = parse_json(read_artifact(c, artifacts::null_stats(0)), artifacts::null_stats(0));
  const auto mds = parse_json(read_artifact(c, artifacts::kMdsSummary), artifacts::kMdsSummary);
  const auto clusters =
      parse_json(read_artifact(c, artifacts::clusters(c.k)), artifacts::clusters(c.k));
  const auto s_ranked = load_csv(c, artifacts::kRanked);
  const auto r_ranked = load_csv(c, artifacts::null_ranked(0));
  const auto elbow = load_csv(c, artifacts::kElbow);
  const auto coords = load_csv(c, artifacts::kCoords);
  require(s_ranked.size() == r_ranked.size(), "ranked lists of S and R differ in length");

  Produced out;
  const double s_mean = s_stats.at("mean").get<double>();
  const double r_mean = r_stats.at("mean").get<double>();
  {
    std::ostringstream csv;
    write_csv_row(csv, {"rank", "S", "S_mean", "R", "R_mean"});
    for (std::size_t k = 1; k < s_ranked.size(); ++k)
      write_csv_row(csv, {s_ranked[k].at(0), s_ranked[k].at(1), format_sig9(s_mean),
                          r_ranked[k].at(1), format_sig9(r_mean)});
    out.files["report/rank_curve.csv"] = csv.str();
  }
  {
    std::optional<LinearFit> tail;
    if (!mds.at("tail_fit").is_null())
      tail = LinearFit{mds["tail_fit"].at("intercept").get<double>(),
                       mds["tail_fit"].at("slope").get<double>()};
    std::ostringstream csv;
    write_csv_row(csv, {"m", "Q", "delta_q", "curvature", "tail_line"});
    for (std::size_t k = 1; k < elbow.size(); ++k) {
      auto row = elbow[k];
      row.resize(4);
      const double m = std::stod(row[0]);
      row.push_back(tail ? format_sig9(tail->intercept + tail->slope * m) : "");
      write_csv_row(csv, row);
    }
    out.files["report/elbow.csv"] = csv.str();
  }
  {
    const std::size_t dims = std::min<std::size_t>(3, coords.front().size() - 1);
    std::ostringstream csv;
    std::vector<std::string> header{"i", "label"};
    for (std::size_t a = 0; a < dims; ++a) header.push_back("x" + std::to_string(a + 1));
    write_csv_row(csv, header);
    for (std::size_t k = 1; k < coords.size(); ++k) {
      std::vector<std::string> row{std::to_string(k), coords[k].at(0)};
      for (std::size_t a = 0; a < dims; ++a) row.push_back(coords[k].at(a + 1));
      write_csv_row(csv, row);
    }
    out.files["report/coordinates_top3.csv"] = csv.str();
  }
  {
    std::ostringstream md;
    md << "| Category | Members |\n|---:|:---|\n";
    for (const auto& [id, members] : clusters.at("clusters").items()) {
      std::string joined;
      for (const auto& w : members) joined += (joined.empty() ? "" : ", ") + w.get<std::string>();
      md << "| " << id << " | " << joined << " |\n";
    }
    out.files["report/categories.md"] = md.str();
  }
  {
    std::istringstream merges(read_artifact(c, artifacts::kMerges));
    std::ostringstream md;
    md << "# Similarity structure summary\n\n";
    md << "| Quantity | Value |\n|:---|---:|\n";
    md << "| targets included (n) | " << corpus.at("included_targets").size() << " |\n";
    md << "| targets excluded | " << corpus.at("excluded_targets").size() << " |\n";
    md << "| distinct words (K) | " << corpus.at("vocabulary_size").get<std::size_t>() << " |\n";
    md << "| words per bag | " << corpus.at("bag_size").get<std::size_t>() << " |\n";
    md << "| mean S | " << format_sig9(s_mean) << " |\n";
    md << "| std S | " << format_sig9(s_stats.at("std").get<double>()) << " |\n";
    md << "| mean R (seed " << r_stats.at("seed").get<std::uint64_t>() << ") | "
       << format_sig9(r_mean) << " |\n";
    md << "| std R | " << format_sig9(r_stats.at("std").get<double>()) << " |\n";
    md << "| lambda_1 | " << format_sig9(mds.at("lambda_max").get<double>()) << " |\n";
    if (!mds.at("lambda_ratio_1_2").is_null())
      md << "| lambda_1 / lambda_2 | " << format_sig9(mds["lambda_ratio_1_2"].get<double>())
         << " |\n";
    if (!mds.at("coordinate_means").empty())
      md << "| mean of x1 | " << format_sig9(mds["coordinate_means"][0].get<double>()) << " |\n";
    md << "\n## First merges\n\n";
    std::string line;
    for (int shown = 0; shown < 5 && std::getline(merges, line); ++shown) {
      const auto rec = parse_json(line, artifacts::kMerges);
      auto join = [](const json& v) {
        std::string s;
        for (const auto& w : v) s += (s.empty() ? "" : ", ") + w.get<std::string>();
        return s;
      };
      md << rec.at("step").get<std::size_t>() << ". {" << join(rec.at("left_members")) << "} + {"
         << join(rec.at("right_members")) << "} at cost "
         << format_sig9(rec.at("cost").get<double>()) << "\n";
    }
    md << "\n## Categories (k = " << c.k << ")\n\n";
    out.files["report/summary.md"] = md.str() + out.files["report/categories.md"];
  }
  out.messages.push_back("report: wrote " + std::to_string(out.files.size()) + " files to " +
                         (c.out_dir / "report").string());
  return out;
}

const std::vector<Stage>& stages() {
  static const std::vector<Stage> all{
      {"ingest", prepare_ingest, execute_ingest}, {"sim", prepare_sim, execute_sim},
      {"null", prepare_null, execute_null},       {"mds", prepare_mds, execute_mds},
      {"cluster", prepare_cluster, execute_cluster}, {"report", prepare_report, execute_report},
  };
  return all;
}

StageOutcome run_named(const std::string& name, const PipelineConfig& config) {
  for (const auto& s : stages())
    if (s.name == name) return execute_stage(s, config, false);
  throw DataError("unknown stage " + name);
}

}  // namespace

StageOutcome run_ingest(const PipelineConfig& config) { return run_named("ingest", config); }
StageOutcome run_similarity(const PipelineConfig& config) { return run_named("sim", config); }
StageOutcome run_null(const PipelineConfig& config) { return run_named("null", config); }
StageOutcome run_mds(const PipelineConfig& config) { return run_named("mds", config); }
StageOutcome run_cluster(const PipelineConfig& config) { return run_named("cluster", config); }
StageOutcome run_report(const PipelineConfig& config) { return run_named("report", config); }

std::vector<StageOutcome> run_all(const PipelineConfig& config, bool force) {
  std::vector<StageOutcome> outcomes;
  for (const auto& s : stages()) outcomes.push_back(execute_stage(s, config, !force));
  return outcomes;
}

}  // namespace ctxsim
