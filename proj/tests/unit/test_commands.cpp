#include <doctest.h>

#include <fstream>
#include <map>

#include <json.hpp>

#include "fixtures.hpp"
#include "meshscore/commands.hpp"
#include "meshscore/contingency.hpp"
#include "meshscore/default_lists.hpp"
#include "meshscore/error.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace meshscore;
using meshscore::testing::fixture;
using meshscore::testing::scratch_dir;
using meshscore::testing::slurp;
namespace fs = std::filesystem;

namespace {

fs::path write_corpus(const fs::path& dir, const std::vector<Citation>& corpus) {
  const auto path = dir / "input.jsonl";
  std::ofstream out(path);
  write_jsonl(out, corpus);
  return path;
}

std::vector<Citation> small_planted(std::uint64_t seed = 4) {
  testing::SyntheticSpec spec;
  spec.citations = 800;
  spec.background = 150;
  spec.seed = seed;
  return testing::make_synthetic(spec);
}

RunConfig config_for(const fs::path& input, const fs::path& out) {
  RunConfig c;
  c.inputs = {input.string()};
  c.output_dir = out.string();
  c.workers = 1;
  return c;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

void write_predictions(const fs::path& path, const std::vector<LabeledId>& preds) {
  std::ofstream out(path);
  out << "id,label\n";
  for (const auto& p : preds) out << p.id << ',' << to_string(p.label) << '\n';
}

}  // namespace

TEST_SUITE("commands") {
  TEST_CASE("ingest XML writes canonical JSONL and stats") {
    const auto out = scratch_dir("ingest_xml");
    const auto stats = cmd_ingest(config_for(fixture("medline_small.xml"), out));
    CHECK(stats.citations == 3);
    CHECK(stats.without_abstract == 1);
    CHECK(stats.without_descriptors == 1);
    CHECK(stats.unlabeled == 3);

    std::ifstream in(out / "corpus.jsonl");
    const auto back = parse_jsonl(in);
    REQUIRE(back.citations.size() == 3);
    CHECK(back.citations[0].id == "10001");
    const auto j = read_json(out / "ingest_stats.json");
    CHECK(j["toolkit_version"] == "0.1.0");
    CHECK(j["config_hash"].get<std::string>().size() == 16);
    CHECK(fs::exists(out / "ingest_config.json"));
  }

  TEST_CASE("ingest TSV gives descriptor sets with empty titles") {
    const auto out = scratch_dir("ingest_tsv");
    cmd_ingest(config_for(fixture("relational.tsv"), out));
    std::ifstream in(out / "corpus.jsonl");
    const auto back = parse_jsonl(in);
    REQUIRE(back.citations.size() == 3);
    for (const auto& c : back.citations) CHECK(c.title.empty());
    CHECK(back.citations[0].descriptors.size() == 3);
  }

  TEST_CASE("ingest stats on a mixed fixture match a hand tally") {
    const auto out = scratch_dir("ingest_mixed");
    const auto s = cmd_ingest(config_for(fixture("mixed_fields.jsonl"), out));
    CHECK(s.citations == 5);
    CHECK(s.without_title == 1);
    CHECK(s.without_abstract == 3);
    CHECK(s.without_descriptors == 2);
    CHECK(s.genetic == 2);
    CHECK(s.nongenetic == 2);
    CHECK(s.unlabeled == 1);
  }

  TEST_CASE("ingest in skip mode lists record errors") {
    const auto out = scratch_dir("ingest_skip");
    auto c = config_for(fixture("medline_bad_middle.xml"), out);
    c.error_mode = ErrorMode::SkipAndReport;
    const auto s = cmd_ingest(c);
    CHECK(s.citations == 2);
    CHECK(s.record_errors.size() == 1);
    CHECK(read_json(out / "ingest_stats.json")["record_errors"].size() == 1);
  }

  TEST_CASE("input errors map to their exit codes") {
    const auto out = scratch_dir("errors");
    try {
      cmd_ingest(config_for(out / "does_not_exist.jsonl", out));
      FAIL("expected InputError");
    } catch (const Error& e) {
      CHECK(e.exit_code() == 2);
    }
    auto one_class = small_planted();
    for (auto& c : one_class) c.label = DomainLabel::Genetic;
    try {
      cmd_train(config_for(write_corpus(out, one_class), out));
      FAIL("expected DegenerateError");
    } catch (const Error& e) {
      CHECK(e.exit_code() == 3);
    }
    try {
      cmd_score(config_for(write_corpus(out, small_planted()), out));
      FAIL("expected MissingArtifactError");
    } catch (const Error& e) {
      CHECK(e.exit_code() == 4);
    }
  }

  TEST_CASE("train counts match an independent recount") {
    const auto dir = scratch_dir("train");
    const auto corpus = small_planted();
    const auto t = cmd_train(config_for(write_corpus(dir, corpus), dir));

    // Recount per descriptor from the raw corpus with the oracle statistic.
    const auto ex = default_exclusion_list();
    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> counts;
    std::uint64_t g = 0, n = 0;
    for (const auto& c : corpus) {
      const bool gen = c.label == DomainLabel::Genetic;
      (gen ? g : n) += 1;
      for (const auto& d : c.descriptors) {
        if (ex.contains(d)) continue;
        (gen ? counts[d].first : counts[d].second) += 1;
      }
    }
    std::size_t pos = 0, neg = 0;
    for (const auto& [d, k] : counts) {
      const auto [a, b] = k;
      if (a + b == g + n) continue;
      if (oracle::chi_square(a, b, g - a, n - b) <= 3.84L) continue;
      const auto lhs = static_cast<unsigned __int128>(a) * n;
      const auto rhs = static_cast<unsigned __int128>(b) * g;
      pos += lhs > rhs;
      neg += lhs < rhs;
    }
    CHECK(t.selection.positive == pos);
    CHECK(t.selection.negative == neg);
    CHECK(t.genetic_total == g);
    CHECK(t.nongenetic_total == n);

    std::ifstream in(dir / "indicators.csv");
    const auto profile = read_indicator_csv(in);
    CHECK(profile.positive_count() == pos);
    CHECK(profile.negative_count() == neg);
    const auto summary = read_json(dir / "train_summary.json");
    CHECK(summary["positive"] == pos);
    CHECK(summary["negative"] == neg);
  }

  TEST_CASE("dropping the exclusion list only adds indicators") {
    auto corpus = small_planted(8);
    // Give the check tag a class skew so it would be selected if not excluded.
    for (auto& c : corpus) {
      if (c.label == DomainLabel::Genetic) {
        c.descriptors.push_back("Humans");
        normalize_descriptors(c.descriptors);
      }
    }
    const auto a = scratch_dir("excl_on");
    const auto b = scratch_dir("excl_off");
    const auto input = write_corpus(a, corpus);
    cmd_train(config_for(input, a));
    auto off = config_for(input, b);
    off.no_exclusion = true;
    cmd_train(off);
    std::ifstream ia(a / "indicators.csv"), ib(b / "indicators.csv");
    const auto filtered = read_indicator_csv(ia);
    const auto full = read_indicator_csv(ib);
    for (const auto& e : filtered.entries()) CHECK(full.sign_of(e.descriptor) == e.sign);
    CHECK(full.sign_of("Humans") == 1);
    CHECK(filtered.sign_of("Humans") == 0);
  }

  TEST_CASE("score uses the override, then evaluation, then a fit") {
    const auto dir = scratch_dir("score");
    const auto input = write_corpus(dir, small_planted());
    auto c = config_for(input, dir);
    cmd_train(c);
    const auto fitted = cmd_score(c);
    CHECK(fitted.theta_source == "fitted");
    CHECK(fitted.citations == 800);

    const auto report = cmd_evaluate(c);
    const auto from_eval = cmd_score(c);
    CHECK(from_eval.theta_source == "evaluation");
    CHECK(from_eval.theta == report.consensus_theta);

    c.theta = 2;
    const auto forced = cmd_score(c);
    CHECK(forced.theta_source == "override");
    CHECK(forced.theta.theta == 2);

    const auto hist = slurp(dir / "histogram.csv");
    CHECK(hist.rfind("score,count\n", 0) == 0);
    const auto scores = slurp(dir / "scores.csv");
    CHECK(std::count(scores.begin(), scores.end(), '\n') == 801);
  }

  TEST_CASE("evaluate writes per-fold thresholds and calibration") {
    const auto dir = scratch_dir("evaluate");
    auto c = config_for(write_corpus(dir, small_planted()), dir);
    cmd_train(c);
    c.k = 5;
    cmd_evaluate(c);
    const auto j = read_json(dir / "evaluation.json");
    CHECK(j["folds"].size() == 5);
    CHECK(j["per_fold_theta"].size() == 5);
    CHECK(j["k"] == 5);
    CHECK(j.contains("consensus_theta"));
    CHECK(j["kappa"].is_null());
    const auto cal = slurp(dir / "calibration.csv");
    CHECK(cal.rfind("fold,theta,accuracy\n", 0) == 0);
    CHECK(cal.find("\nmean,") != std::string::npos);
  }

  TEST_CASE("evaluate computes kappa from annotation files") {
    const auto dir = scratch_dir("kappa");
    std::vector<Citation> corpus;
    std::vector<LabeledId> a, b;
    for (int i = 0; i < 100; ++i) {
      Citation c;
      c.id = std::to_string(i);
      c.descriptors = {i < 50 ? "Pos" : "Neg"};
      c.label = i < 50 ? DomainLabel::Genetic : DomainLabel::NonGenetic;
      corpus.push_back(c);
      // [[40,10],[5,45]]
      const bool ag = i < 50;
      const bool bg = i < 40 || (i >= 50 && i < 55);
      a.push_back({c.id, ag ? DomainLabel::Genetic : DomainLabel::NonGenetic});
      b.push_back({c.id, bg ? DomainLabel::Genetic : DomainLabel::NonGenetic});
    }
    auto c = config_for(write_corpus(dir, corpus), dir);
    write_predictions(dir / "a.csv", a);
    write_predictions(dir / "b.csv", b);
    c.annotations = {(dir / "a.csv").string(), (dir / "b.csv").string()};
    c.refit_per_fold = true;
    cmd_evaluate(c);
    const auto j = read_json(dir / "evaluation.json");
    CHECK(j["kappa"]["kappa"].get<double>() == doctest::Approx(0.70).epsilon(1e-12));
  }

  TEST_CASE("compare: a system against itself, against NB, and misaligned input") {
    const auto dir = scratch_dir("compare");
    const auto corpus = small_planted(11);
    auto c = config_for(write_corpus(dir, corpus), dir);
    cmd_train(c);
    c.field = FieldSelector::Descriptors;
    const auto o = cmd_compare(c);
    REQUIRE(o.systems.size() == 2);
    REQUIRE(o.pairs.size() == 1);

    // Hand count of discordant pairs from the two prediction vectors.
    std::uint64_t n01 = 0, n10 = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const bool a = o.systems[0].predictions[i].label == *corpus[i].label;
      const bool b = o.systems[1].predictions[i].label == *corpus[i].label;
      n01 += a && !b;
      n10 += !a && b;
    }
    const auto& p = o.pairs[0].pooled;
    CHECK(p.n01 == n01);
    CHECK(p.n10 == n10);
    const double d = std::fabs(double(n01) - double(n10)) - 1;
    CHECK(p.statistic == doctest::Approx(d * d / double(n01 + n10)));

    write_predictions(dir / "self.csv", o.systems[0].predictions);
    auto self = c;
    self.include_naive_bayes = false;
    self.external_predictions = {"copy=" + (dir / "self.csv").string()};
    const auto s = cmd_compare(self);
    REQUIRE(s.pairs.size() == 1);
    CHECK(s.pairs[0].b == "copy");
    CHECK(s.pairs[0].pooled.statistic == 0.0);
    CHECK(s.pairs[0].pooled.p_value == 1.0);

    auto stray = o.systems[0].predictions;
    stray.back().id = "not-in-corpus";
    write_predictions(dir / "stray.csv", stray);
    self.external_predictions = {(dir / "stray.csv").string()};
    try {
      cmd_compare(self);
      FAIL("expected AlignmentError");
    } catch (const Error& e) {
      CHECK(e.exit_code() == 5);
    }

    self.external_predictions.clear();
    CHECK_THROWS_AS(cmd_compare(self), UsageError);

    const auto j = read_json(dir / "comparison.json");
    CHECK(j["systems"].size() == 2);
    CHECK(j.contains("config_hash"));
  }

  TEST_CASE("config hash tracks settings but not the output directory") {
    RunConfig a;
    a.inputs = {"x.jsonl"};
    RunConfig b = a;
    b.output_dir = "elsewhere";
    b.workers = 7;
    CHECK(config_hash(resolved_config(a, "train")) == config_hash(resolved_config(b, "train")));
    b.seed = 2;
    CHECK(config_hash(resolved_config(a, "train")) != config_hash(resolved_config(b, "train")));
    CHECK(config_hash(resolved_config(a, "train")) != config_hash(resolved_config(a, "score")));
  }
}
