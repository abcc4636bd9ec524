#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "meshscore/chisq.hpp"
#include "meshscore/corpus_io.hpp"
#include "meshscore/eval.hpp"
#include "meshscore/scorer.hpp"
#include "meshscore/text.hpp"

namespace meshscore {

enum class InputFormat { Auto, Xml, Jsonl, Tsv };

std::string_view to_string(InputFormat format);
std::optional<InputFormat> parse_input_format(std::string_view text);

// Fully resolved settings for one command. Everything except output_dir and
// workers is written next to the outputs; neither of those affects results.
struct RunConfig {
  std::vector<std::string> inputs;
  InputFormat format = InputFormat::Auto;
  ErrorMode error_mode = ErrorMode::FailFast;
  std::optional<std::string> exclusion_path;  // unset: built-in check tags
  bool no_exclusion = false;
  std::optional<std::string> reference_path;
  std::size_t reference_column = 0;
  double critical_value = kDefaultCriticalValue;
  std::size_t k = 10;
  std::uint64_t seed = 1;
  std::optional<Score> theta;
  bool refit_per_fold = false;
  std::optional<std::string> profile_path;  // unset: <output_dir>/indicators.csv
  FieldSelector field = FieldSelector::TitleAbstract;
  std::optional<std::string> stopwords_path;  // unset: built-in SMART list
  std::size_t min_df = 2;
  std::string stemmer = "lovins";
  bool include_naive_bayes = true;
  std::vector<std::string> external_predictions;  // name=path or path
  std::vector<std::string> annotations;           // two id,label files for kappa
  std::string output_dir = ".";
  std::size_t workers = 0;
};

nlohmann::ordered_json resolved_config(const RunConfig& config, std::string_view command);
// 64-bit FNV-1a over the compact dump of the resolved config, as hex.
std::string config_hash(const nlohmann::ordered_json& resolved);

// Reads every input (format chosen per file when Auto) and applies the
// reference list when one is configured.
ParseResult load_corpus(const RunConfig& config);

struct IngestStats {
  std::size_t citations = 0;
  std::size_t without_title = 0;
  std::size_t without_abstract = 0;
  std::size_t without_descriptors = 0;
  std::size_t genetic = 0;
  std::size_t nongenetic = 0;
  std::size_t unlabeled = 0;
  std::vector<RecordError> record_errors;
};

struct TrainOutcome {
  std::size_t citations = 0;
  std::uint64_t genetic_total = 0;
  std::uint64_t nongenetic_total = 0;
  std::size_t descriptors = 0;
  SelectionSummary selection;
};

struct ScoreOutcome {
  std::size_t citations = 0;
  std::uint64_t without_descriptors = 0;
  Threshold theta;
  std::string theta_source;  // "override", "evaluation", or "fitted"
  std::size_t predicted_genetic = 0;
};

struct SystemReport {
  std::string name;
  std::vector<LabeledId> predictions;
  MetricSet mean;          // averaged over folds
  ConfusionCounts pooled;
};

struct PairReport {
  std::string a;
  std::string b;
  McNemarResult pooled;
  double mean_fold_statistic = 0;
  double mean_fold_p_value = 0;
};

struct CompareOutcome {
  std::vector<SystemReport> systems;
  std::vector<PairReport> pairs;
};

// Converts inputs to <out>/corpus.jsonl and writes ingest_stats.json.
IngestStats cmd_ingest(const RunConfig& config);
// Writes frequency_profile.csv, indicators.csv and train_summary.json.
TrainOutcome cmd_train(const RunConfig& config);
// Writes scores.csv, histogram.csv and score_summary.json.
ScoreOutcome cmd_score(const RunConfig& config);
// Writes evaluation.json, evaluation.csv and calibration.csv.
CrossValReport cmd_evaluate(const RunConfig& config);
// Writes comparison.json, comparison_metrics.csv and mcnemar.csv.
CompareOutcome cmd_compare(const RunConfig& config);

}  // namespace meshscore
