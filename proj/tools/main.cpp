#include <CLI11.hpp>

#include <iostream>

#include "meshscore/commands.hpp"
#include "meshscore/error.hpp"
#include "meshscore/version.hpp"

namespace {

using meshscore::RunConfig;

struct Raw {
  std::string format = "auto";
  bool skip_bad = false;
  std::string field = "title+abstract";
  std::optional<std::string> exclusion;
  std::optional<std::string> reference;
  std::optional<std::string> profile;
  std::optional<std::string> stopwords;
  std::optional<meshscore::Score> theta;
};

void add_common(CLI::App* sub, RunConfig& c, Raw& raw) {
  sub->add_option("inputs", c.inputs, "Corpus files (MEDLINE XML, JSONL or TSV)")->required();
  sub->add_option("-o,--output-dir", c.output_dir, "Directory for outputs")
      ->envname("MESHSCORE_OUTPUT_DIR");
  sub->add_option("--format", raw.format, "Input format")
      ->check(CLI::IsMember({"auto", "xml", "jsonl", "tsv"}))
      ->envname("MESHSCORE_FORMAT");
  sub->add_flag("--skip-bad-records", raw.skip_bad, "Report malformed records instead of failing")
      ->envname("MESHSCORE_SKIP_BAD_RECORDS");
  sub->add_option("--reference", raw.reference, "Reference id list; listed ids are genetic")
      ->envname("MESHSCORE_REFERENCE");
  sub->add_option("--reference-column", c.reference_column, "0-based tab column holding the id")
      ->envname("MESHSCORE_REFERENCE_COLUMN");
  sub->add_option("--exclusion", raw.exclusion, "Exclusion list (one descriptor per line)")
      ->envname("MESHSCORE_EXCLUSION");
  sub->add_flag("--no-exclusion", c.no_exclusion, "Disable the exclusion list");
  sub->add_option("-j,--workers", c.workers, "Worker threads (0: hardware concurrency)")
      ->envname("MESHSCORE_WORKERS");
}

void add_cv(CLI::App* sub, RunConfig& c, Raw& raw) {
  sub->add_option("-k,--folds", c.k, "Number of folds")
      ->check(CLI::Range(2, 1000000))
      ->envname("MESHSCORE_FOLDS");
  sub->add_option("--seed", c.seed, "Fold shuffle seed")->envname("MESHSCORE_SEED");
  sub->add_option("--profile", raw.profile, "Indicator profile (default <output-dir>/indicators.csv)")
      ->envname("MESHSCORE_PROFILE");
  sub->add_flag("--refit-per-fold", c.refit_per_fold, "Rebuild the indicator profile per fold")
      ->envname("MESHSCORE_REFIT_PER_FOLD");
  sub->add_option("--critical-value", c.critical_value, "Chi-square significance cutoff")
      ->envname("MESHSCORE_CRITICAL_VALUE");
}

void finish(RunConfig& c, const Raw& raw) {
  c.format = *meshscore::parse_input_format(raw.format);
  c.error_mode = raw.skip_bad ? meshscore::ErrorMode::SkipAndReport : meshscore::ErrorMode::FailFast;
  auto field = meshscore::parse_field_selector(raw.field);
  if (!field) throw meshscore::UsageError("unknown field '" + raw.field + "'");
  c.field = *field;
  c.exclusion_path = raw.exclusion;
  c.reference_path = raw.reference;
  c.profile_path = raw.profile;
  c.stopwords_path = raw.stopwords;
  c.theta = raw.theta;
  if (c.no_exclusion && c.exclusion_path) {
    throw meshscore::UsageError("--exclusion and --no-exclusion are mutually exclusive");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chi-square MeSH descriptor scoring for genetic-domain citations", "meshscore"};
  app.set_version_flag("--version", std::string(meshscore::kVersion));
  app.set_config("--config", "", "TOML or INI file with option values");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig c;
  Raw raw;

  auto* ingest = app.add_subcommand("ingest", "Convert inputs to JSONL and report statistics");
  add_common(ingest, c, raw);

  auto* train = app.add_subcommand("train", "Build the frequency and indicator profiles");
  add_common(train, c, raw);
  train->add_option("--critical-value", c.critical_value, "Chi-square significance cutoff")
      ->envname("MESHSCORE_CRITICAL_VALUE");

  auto* score = app.add_subcommand("score", "Score citations against an indicator profile");
  add_common(score, c, raw);
  score->add_option("--profile", raw.profile, "Indicator profile (default <output-dir>/indicators.csv)")
      ->envname("MESHSCORE_PROFILE");
  score->add_option("--theta", raw.theta, "Decision threshold (score >= theta is genetic)")
      ->envname("MESHSCORE_THETA");

  auto* evaluate = app.add_subcommand("evaluate", "Cross-validate the threshold rule");
  add_common(evaluate, c, raw);
  add_cv(evaluate, c, raw);
  evaluate->add_option("--annotations", c.annotations, "Two id,label files for Cohen's kappa")
      ->expected(2);

  auto* compare = app.add_subcommand("compare", "Compare classifiers on the same folds");
  add_common(compare, c, raw);
  add_cv(compare, c, raw);
  compare->add_option("--field", raw.field, "Text field for naive Bayes")
      ->check(CLI::IsMember({"title", "abstract", "title+abstract", "descriptors", "mesh"}))
      ->envname("MESHSCORE_FIELD");
  compare->add_option("--stopwords", raw.stopwords, "Stopword list (default SMART)")
      ->envname("MESHSCORE_STOPWORDS");
  compare->add_option("--stemmer", c.stemmer, "Stemmer")
      ->check(CLI::IsMember({"lovins", "none"}))
      ->envname("MESHSCORE_STEMMER");
  compare->add_option("--min-df", c.min_df, "Minimum document frequency")
      ->envname("MESHSCORE_MIN_DF");
  compare->add_flag("!--no-naive-bayes", c.include_naive_bayes, "Leave out the naive Bayes baseline");
  compare->add_option("--predictions", c.external_predictions,
                      "External predictions as name=path (id,label CSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(meshscore::ErrorKind::Usage);
  }

  try {
    finish(c, raw);
    if (ingest->parsed()) {
      const auto s = meshscore::cmd_ingest(c);
      std::cerr << s.citations << " citations, " << s.record_errors.size()
                << " skipped records\n";
    } else if (train->parsed()) {
      const auto t = meshscore::cmd_train(c);
      std::cerr << t.selection.positive << " positive and " << t.selection.negative
                << " negative indicators from " << t.citations << " citations\n";
    } else if (score->parsed()) {
      const auto s = meshscore::cmd_score(c);
      std::cerr << s.citations << " citations scored, theta " << s.theta.theta << " ("
                << s.theta_source << ")\n";
    } else if (evaluate->parsed()) {
      const auto r = meshscore::cmd_evaluate(c);
      std::cerr << "mean accuracy " << r.mean.acc << ", consensus theta "
                << r.consensus_theta.theta << '\n';
    } else if (compare->parsed()) {
      const auto o = meshscore::cmd_compare(c);
      for (const auto& s : o.systems) std::cerr << s.name << ": accuracy " << s.mean.acc << '\n';
    }
  } catch (const meshscore::Error& e) {
    std::cerr << "meshscore: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "meshscore: internal error: " << e.what() << '\n';
    return 70;
  }
  return 0;
}
