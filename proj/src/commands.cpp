#include "meshscore/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "meshscore/contingency.hpp"
#include "meshscore/csv.hpp"
#include "meshscore/default_lists.hpp"
#include "meshscore/error.hpp"
#include "meshscore/naive_bayes.hpp"
#include "meshscore/version.hpp"

namespace meshscore {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(InputFormat format) {
  switch (format) {
    case InputFormat::Auto: return "auto";
    case InputFormat::Xml: return "xml";
    case InputFormat::Jsonl: return "jsonl";
    case InputFormat::Tsv: return "tsv";
  }
  return "auto";
}

std::optional<InputFormat> parse_input_format(std::string_view text) {
  if (text == "auto") return InputFormat::Auto;
  if (text == "xml") return InputFormat::Xml;
  if (text == "jsonl" || text == "json") return InputFormat::Jsonl;
  if (text == "tsv") return InputFormat::Tsv;
  return std::nullopt;
}

ordered_json resolved_config(const RunConfig& c, std::string_view command) {
  ordered_json j;
  j["command"] = command;
  j["toolkit_version"] = kVersion;
  j["inputs"] = c.inputs;
  j["format"] = to_string(c.format);
  j["error_mode"] = c.error_mode == ErrorMode::FailFast ? "fail-fast" : "skip-and-report";
  j["exclusion"] = c.no_exclusion ? "none" : c.exclusion_path.value_or("builtin:check_tags");
  j["reference"] = c.reference_path ? ordered_json(*c.reference_path) : ordered_json(nullptr);
  j["reference_column"] = c.reference_column;
  j["critical_value"] = c.critical_value;
  j["k"] = c.k;
  j["seed"] = c.seed;
  j["theta"] = c.theta ? ordered_json(*c.theta) : ordered_json(nullptr);
  j["refit_per_fold"] = c.refit_per_fold;
  j["profile"] = c.profile_path.value_or("<output_dir>/indicators.csv");
  j["field"] = to_string(c.field);
  j["stopwords"] = c.stopwords_path.value_or("builtin:smart");
  j["min_df"] = c.min_df;
  j["stemmer"] = c.stemmer;
  j["naive_bayes"] = c.include_naive_bayes;
  j["external_predictions"] = c.external_predictions;
  j["annotations"] = c.annotations;
  return j;
}

std::string config_hash(const ordered_json& resolved) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : resolved.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  return in;
}

fs::path output_path(const RunConfig& c, std::string_view name) {
  std::error_code ec;
  fs::create_directories(c.output_dir, ec);
  if (ec) throw InputError("cannot create output directory '" + c.output_dir + "'");
  return fs::path(c.output_dir) / name;
}

std::ofstream open_output(const RunConfig& c, std::string_view name) {
  const auto path = output_path(c, name);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

// Writes <command>_config.json and returns the provenance block shared by
// every report of that command.
ordered_json write_provenance(const RunConfig& c, std::string_view command) {
  auto resolved = resolved_config(c, command);
  const auto hash = config_hash(resolved);
  {
    auto out = open_output(c, std::string(command) + "_config.json");
    ordered_json doc = resolved;
    doc["config_hash"] = hash;
    out << doc.dump(2) << '\n';
  }
  return {{"toolkit_version", kVersion}, {"config_hash", hash}};
}

void write_json(const RunConfig& c, std::string_view name, const ordered_json& doc) {
  auto out = open_output(c, name);
  out << doc.dump(2) << '\n';
}

InputFormat detect_format(const std::string& path) {
  const auto ext = fs::path(path).extension().string();
  if (ext == ".xml") return InputFormat::Xml;
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") return InputFormat::Jsonl;
  if (ext == ".tsv" || ext == ".txt") return InputFormat::Tsv;
  throw UsageError("cannot infer the format of '" + path + "'; pass --format");
}

ExclusionList load_exclusion(const RunConfig& c) {
  if (c.no_exclusion) return {};
  if (!c.exclusion_path) return default_exclusion_list();
  auto in = open_input(*c.exclusion_path);
  return read_exclusion_list(in);
}

StopwordSet load_stopwords(const RunConfig& c) {
  if (!c.stopwords_path) return default_stopwords();
  auto in = open_input(*c.stopwords_path);
  return read_stopwords(in);
}

std::vector<Citation> require_labeled(const RunConfig& c) {
  auto parsed = load_corpus(c);
  for (const auto& cit : parsed.citations) {
    if (!cit.label) {
      throw InputError("citation '" + cit.id +
                       "' has no label; supply labels in the corpus or a reference list");
    }
  }
  return std::move(parsed.citations);
}

fs::path profile_location(const RunConfig& c) {
  return c.profile_path ? fs::path(*c.profile_path) : fs::path(c.output_dir) / "indicators.csv";
}

IndicatorProfile load_indicators(const RunConfig& c) {
  const auto path = profile_location(c);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("indicator profile '" + path.string() + "' not found");
  return read_indicator_csv(in);
}

ordered_json metrics_json(const MetricSet& m) {
  ordered_json j;
  j["acc"] = m.acc;
  j["rec"] = m.rec;
  j["pre"] = m.pre;
  j["f"] = m.f;
  j["rec_undefined"] = m.rec_undefined;
  j["pre_undefined"] = m.pre_undefined;
  j["f_undefined"] = m.f_undefined;
  return j;
}

ordered_json counts_json(const ConfusionCounts& c) {
  return {{"tp", c.tp}, {"tn", c.tn}, {"fp", c.fp}, {"fn", c.fn}};
}

std::vector<DomainLabel> gold_labels(const std::vector<Citation>& labeled) {
  std::vector<DomainLabel> g;
  g.reserve(labeled.size());
  for (const auto& c : labeled) g.push_back(*c.label);
  return g;
}

// id,label rows (header optional), aligned to the corpus order.
std::vector<LabeledId> read_label_file(const std::string& path,
                                       const std::vector<Citation>& corpus) {
  auto in = open_input(path);
  std::unordered_map<std::string, DomainLabel> label_of;
  std::string line;
  std::size_t line_no = 0;
  while (csv::next_line(in, line, line_no)) {
    auto f = csv::split(line);
    if (f.size() < 2) throw ParseError(path + ": line " + std::to_string(line_no) +
                                           ": expected id,label", std::nullopt, line_no);
    if (line_no == 1 && f[0] == "id") continue;
    auto label = parse_label(f[1]);
    if (!label) throw ParseError(path + ": line " + std::to_string(line_no) +
                                     ": unknown label '" + f[1] + "'", std::nullopt, line_no);
    if (!label_of.emplace(std::string(csv::trim(f[0])), *label).second) {
      throw AlignmentError(path + ": duplicate id '" + f[0] + "'");
    }
  }
  if (label_of.size() != corpus.size()) {
    throw AlignmentError(path + ": " + std::to_string(label_of.size()) +
                         " labels for a corpus of " + std::to_string(corpus.size()));
  }
  std::vector<LabeledId> out;
  out.reserve(corpus.size());
  for (const auto& c : corpus) {
    auto it = label_of.find(c.id);
    if (it == label_of.end()) throw AlignmentError(path + ": no label for id '" + c.id + "'");
    out.push_back({c.id, it->second});
  }
  return out;
}

std::vector<DomainLabel> labels_of(const std::vector<LabeledId>& v) {
  std::vector<DomainLabel> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.label);
  return out;
}

}  // namespace

ParseResult load_corpus(const RunConfig& c) {
  if (c.inputs.empty()) throw UsageError("no input files given");
  ParseResult all;
  for (const auto& path : c.inputs) {
    auto in = open_input(path);
    const auto format = c.format == InputFormat::Auto ? detect_format(path) : c.format;
    ParseResult part;
    switch (format) {
      case InputFormat::Xml: part = parse_medline_xml(in, c.error_mode); break;
      case InputFormat::Jsonl: part = parse_jsonl(in, c.error_mode); break;
      case InputFormat::Tsv: part = parse_tsv(in, c.error_mode); break;
      case InputFormat::Auto: break;
    }
    for (auto& e : part.errors) {
      e.message = path + ": " + e.message;
      all.errors.push_back(std::move(e));
    }
    std::move(part.citations.begin(), part.citations.end(), std::back_inserter(all.citations));
  }
  check_unique_ids(all.citations);
  if (c.reference_path) {
    auto in = open_input(*c.reference_path);
    all.citations = label_by_reference(std::move(all.citations),
                                       read_reference_list(in, c.reference_column));
  }
  return all;
}

IngestStats cmd_ingest(const RunConfig& c) {
  auto parsed = load_corpus(c);
  const auto provenance = write_provenance(c, "ingest");
  IngestStats s;
  s.citations = parsed.citations.size();
  for (const auto& cit : parsed.citations) {
    s.without_title += cit.title.empty();
    s.without_abstract += !cit.abstract.has_value();
    s.without_descriptors += cit.descriptors.empty();
    if (!cit.label) ++s.unlabeled;
    else if (*cit.label == DomainLabel::Genetic) ++s.genetic;
    else ++s.nongenetic;
  }
  s.record_errors = std::move(parsed.errors);
  {
    auto out = open_output(c, "corpus.jsonl");
    write_jsonl(out, parsed.citations);
  }
  ordered_json doc = provenance;
  doc["citations"] = s.citations;
  doc["without_title"] = s.without_title;
  doc["without_abstract"] = s.without_abstract;
  doc["without_descriptors"] = s.without_descriptors;
  doc["genetic"] = s.genetic;
  doc["nongenetic"] = s.nongenetic;
  doc["unlabeled"] = s.unlabeled;
  doc["record_errors"] = ordered_json::array();
  for (const auto& e : s.record_errors) {
    doc["record_errors"].push_back(
        {{"record", e.record}, {"byte_offset", e.byte_offset}, {"message", e.message}});
  }
  write_json(c, "ingest_stats.json", doc);
  return s;
}

TrainOutcome cmd_train(const RunConfig& c) {
  const auto exclusion = load_exclusion(c);
  const auto labeled = require_labeled(c);
  const auto freq = build_profile(labeled, exclusion, c.workers);
  const auto selection = build_indicator_profile(freq, exclusion, c.critical_value, c.workers);
  const auto provenance = write_provenance(c, "train");
  {
    auto out = open_output(c, "frequency_profile.csv");
    write_profile_csv(out, freq);
  }
  {
    auto out = open_output(c, "indicators.csv");
    write_indicator_csv(out, selection.profile);
  }
  TrainOutcome t{labeled.size(), freq.genetic_total(), freq.nongenetic_total(),
                 freq.descriptor_count(), selection.summary};
  ordered_json doc = provenance;
  doc["citations"] = t.citations;
  doc["genetic_total"] = t.genetic_total;
  doc["nongenetic_total"] = t.nongenetic_total;
  doc["descriptors"] = t.descriptors;
  doc["excluded"] = t.selection.excluded;
  doc["evaluated"] = t.selection.evaluated;
  doc["significant"] = t.selection.significant;
  doc["positive"] = t.selection.positive;
  doc["negative"] = t.selection.negative;
  doc["tied_dropped"] = t.selection.tied;
  doc["degenerate_skipped"] = t.selection.degenerate;
  doc["critical_value"] = c.critical_value;
  write_json(c, "train_summary.json", doc);
  return t;
}

ScoreOutcome cmd_score(const RunConfig& c) {
  const auto profile = load_indicators(c);
  const auto exclusion = load_exclusion(c);
  auto citations = load_corpus(c).citations;
  for (auto& cit : citations) cit = apply_exclusion(std::move(cit), exclusion);
  const auto report = score_corpus(citations, profile, c.workers);

  ScoreOutcome o;
  o.citations = report.size();
  o.without_descriptors = report.without_descriptors;
  const auto eval_path = fs::path(c.output_dir) / "evaluation.json";
  if (c.theta) {
    o.theta = Threshold{*c.theta};
    o.theta_source = "override";
  } else if (std::ifstream ev(eval_path); ev) {
    try {
      o.theta = Threshold{nlohmann::json::parse(ev).at("consensus_theta").get<Score>()};
    } catch (const nlohmann::json::exception& e) {
      throw InputError("cannot read consensus_theta from '" + eval_path.string() + "': " + e.what());
    }
    o.theta_source = "evaluation";
  } else {
    const bool labeled = std::all_of(citations.begin(), citations.end(),
                                     [](const Citation& x) { return x.label.has_value(); });
    if (!labeled || citations.empty()) {
      throw UsageError("no threshold: pass --theta, run evaluate first, or score a labeled corpus");
    }
    o.theta = optimize_threshold(report.scores, gold_labels(citations)).threshold;
    o.theta_source = "fitted";
  }
  for (auto s : report.scores) o.predicted_genetic += classify(s, o.theta) == DomainLabel::Genetic;

  const auto provenance = write_provenance(c, "score");
  {
    auto out = open_output(c, "scores.csv");
    write_scores_csv(out, report, o.theta);
  }
  {
    auto out = open_output(c, "histogram.csv");
    write_histogram_csv(out, report);
  }
  ordered_json doc = provenance;
  doc["citations"] = o.citations;
  doc["without_descriptors"] = o.without_descriptors;
  doc["theta"] = o.theta.theta;
  doc["theta_source"] = o.theta_source;
  doc["predicted_genetic"] = o.predicted_genetic;
  doc["indicators"] = profile.size();
  write_json(c, "score_summary.json", doc);
  return o;
}

CrossValReport cmd_evaluate(const RunConfig& c) {
  const auto exclusion = load_exclusion(c);
  auto labeled = require_labeled(c);
  for (auto& cit : labeled) cit = apply_exclusion(std::move(cit), exclusion);
  const ProfileBuilder builder = c.refit_per_fold
                                     ? refit_profile(exclusion, c.critical_value, c.workers)
                                     : fixed_profile(load_indicators(c));
  auto report = cross_validate(labeled, c.k, c.seed, builder, c.refit_per_fold, c.workers);

  std::optional<KappaResult> kappa;
  if (!c.annotations.empty()) {
    if (c.annotations.size() != 2) throw UsageError("kappa needs exactly two annotation files");
    const auto a = read_label_file(c.annotations[0], labeled);
    const auto b = read_label_file(c.annotations[1], labeled);
    kappa = cohen_kappa(labels_of(a), labels_of(b));
  }

  const auto provenance = write_provenance(c, "evaluate");
  ordered_json doc = provenance;
  doc["k"] = report.k;
  doc["seed"] = report.seed;
  doc["refit_per_fold"] = report.refit_per_fold;
  doc["citations"] = labeled.size();
  doc["folds"] = ordered_json::array();
  for (const auto& f : report.folds) {
    ordered_json jf;
    jf["fold"] = f.fold;
    jf["train_size"] = f.train_size;
    jf["test_size"] = f.test_size;
    jf["theta"] = f.theta.theta;
    jf["train_accuracy"] = f.train_accuracy;
    jf["counts"] = counts_json(f.counts);
    jf["metrics"] = metrics_json(f.metrics);
    doc["folds"].push_back(std::move(jf));
  }
  doc["per_fold_theta"] = ordered_json::array();
  for (const auto& f : report.folds) doc["per_fold_theta"].push_back(f.theta.theta);
  doc["mean_theta"] = report.mean_theta;
  doc["consensus_theta"] = report.consensus_theta.theta;
  doc["mean_metrics"] = metrics_json(report.mean);
  doc["degenerate_folds"] = report.degenerate_folds;
  doc["pooled_counts"] = counts_json(report.pooled);
  if (kappa) {
    doc["kappa"] = {{"kappa", kappa->kappa},
                    {"observed_agreement", kappa->observed_agreement},
                    {"expected_agreement", kappa->expected_agreement},
                    {"undefined", kappa->undefined}};
  } else {
    doc["kappa"] = nullptr;
  }
  write_json(c, "evaluation.json", doc);

  {
    auto out = open_output(c, "evaluation.csv");
    out << "fold,theta,train_accuracy,tp,tn,fp,fn,acc,rec,pre,f\n";
    auto row = [&](const std::string& fold, const std::string& theta, const std::string& tacc,
                   const ConfusionCounts& k, const MetricSet& m) {
      out << fold << ',' << theta << ',' << tacc << ',' << k.tp << ',' << k.tn << ',' << k.fp
          << ',' << k.fn << ',' << csv::format_double(m.acc) << ',' << csv::format_double(m.rec)
          << ',' << csv::format_double(m.pre) << ',' << csv::format_double(m.f) << '\n';
    };
    for (const auto& f : report.folds) {
      row(std::to_string(f.fold), std::to_string(f.theta.theta),
          csv::format_double(f.train_accuracy), f.counts, f.metrics);
    }
    row("mean", csv::format_double(report.mean_theta), "", report.pooled, report.mean);
  }
  {
    auto out = open_output(c, "calibration.csv");
    out << "fold,theta,accuracy\n";
    for (const auto& f : report.folds) {
      for (const auto& p : f.calibration) {
        out << f.fold << ',' << p.theta << ',' << csv::format_double(p.accuracy) << '\n';
      }
    }
    for (const auto& p : report.mean_calibration) {
      out << "mean," << p.theta << ',' << csv::format_double(p.accuracy) << '\n';
    }
  }
  return report;
}

CompareOutcome cmd_compare(const RunConfig& c) {
  const auto exclusion = load_exclusion(c);
  auto labeled = require_labeled(c);
  for (auto& cit : labeled) cit = apply_exclusion(std::move(cit), exclusion);
  const auto gold = gold_labels(labeled);
  const auto folds = split_folds(labeled, c.k, c.seed);

  CompareOutcome o;
  {
    const ProfileBuilder builder = c.refit_per_fold
                                       ? refit_profile(exclusion, c.critical_value, c.workers)
                                       : fixed_profile(load_indicators(c));
    auto cv = cross_validate(labeled, c.k, c.seed, builder, c.refit_per_fold, c.workers);
    o.systems.push_back({"chi-square", std::move(cv.predictions), {}, {}});
  }
  if (c.include_naive_bayes) {
    PipelineConfig pc;
    pc.stopwords = load_stopwords(c);
    pc.stemmer = c.stemmer;
    pc.min_df = c.min_df;
    pc.field = c.field;
    auto nb = nb_cross_validate(labeled, pc, c.k, c.seed, 1.0, c.workers);
    o.systems.push_back(
        {"naive-bayes-" + std::string(to_string(c.field)), std::move(nb.predictions), {}, {}});
  }
  for (const auto& spec : c.external_predictions) {
    auto eq = spec.find('=');
    std::string name = eq == std::string::npos ? fs::path(spec).stem().string() : spec.substr(0, eq);
    std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    o.systems.push_back({name, read_label_file(path, labeled), {}, {}});
  }
  if (o.systems.size() < 2) throw UsageError("compare needs at least two prediction sources");

  const auto members = folds.members();
  const double kk = static_cast<double>(c.k);
  for (auto& s : o.systems) {
    const auto pred = labels_of(s.predictions);
    s.pooled = confusion(pred, gold);
    for (const auto& idx : members) {
      std::vector<DomainLabel> p, g;
      for (auto i : idx) {
        p.push_back(pred[i]);
        g.push_back(gold[i]);
      }
      const auto m = metrics(confusion(p, g));
      s.mean.acc += m.acc / kk;
      s.mean.rec += m.rec / kk;
      s.mean.pre += m.pre / kk;
      s.mean.f += m.f / kk;
      s.mean.rec_undefined = s.mean.rec_undefined || m.rec_undefined;
      s.mean.pre_undefined = s.mean.pre_undefined || m.pre_undefined;
      s.mean.f_undefined = s.mean.f_undefined || m.f_undefined;
    }
  }
  for (std::size_t a = 0; a < o.systems.size(); ++a) {
    for (std::size_t b = a + 1; b < o.systems.size(); ++b) {
      const auto pa = labels_of(o.systems[a].predictions);
      const auto pb = labels_of(o.systems[b].predictions);
      PairReport pr{o.systems[a].name, o.systems[b].name, mcnemar(pa, pb, gold), 0, 0};
      for (const auto& idx : members) {
        std::vector<DomainLabel> fa, fb, fg;
        for (auto i : idx) {
          fa.push_back(pa[i]);
          fb.push_back(pb[i]);
          fg.push_back(gold[i]);
        }
        const auto r = mcnemar(fa, fb, fg);
        pr.mean_fold_statistic += r.statistic / kk;
        pr.mean_fold_p_value += r.p_value / kk;
      }
      o.pairs.push_back(std::move(pr));
    }
  }

  const auto provenance = write_provenance(c, "compare");
  ordered_json doc = provenance;
  doc["k"] = c.k;
  doc["seed"] = c.seed;
  doc["citations"] = labeled.size();
  doc["systems"] = ordered_json::array();
  for (const auto& s : o.systems) {
    doc["systems"].push_back({{"name", s.name},
                              {"mean_metrics", metrics_json(s.mean)},
                              {"pooled_counts", counts_json(s.pooled)}});
  }
  doc["mcnemar"] = ordered_json::array();
  for (const auto& p : o.pairs) {
    doc["mcnemar"].push_back({{"a", p.a},
                              {"b", p.b},
                              {"n01", p.pooled.n01},
                              {"n10", p.pooled.n10},
                              {"statistic", p.pooled.statistic},
                              {"p_value", p.pooled.p_value},
                              {"no_discordant", p.pooled.no_discordant},
                              {"mean_fold_statistic", p.mean_fold_statistic},
                              {"mean_fold_p_value", p.mean_fold_p_value}});
  }
  write_json(c, "comparison.json", doc);
  {
    auto out = open_output(c, "comparison_metrics.csv");
    out << "system,acc,rec,pre,f\n";
    for (const auto& s : o.systems) {
      out << csv::quote(s.name) << ',' << csv::format_double(s.mean.acc) << ','
          << csv::format_double(s.mean.rec) << ',' << csv::format_double(s.mean.pre) << ','
          << csv::format_double(s.mean.f) << '\n';
    }
  }
  {
    auto out = open_output(c, "mcnemar.csv");
    out << "system_a,system_b,n01,n10,statistic,p_value,mean_fold_statistic,mean_fold_p_value\n";
    for (const auto& p : o.pairs) {
      out << csv::quote(p.a) << ',' << csv::quote(p.b) << ',' << p.pooled.n01 << ','
          << p.pooled.n10 << ',' << csv::format_double(p.pooled.statistic) << ','
          << csv::format_double(p.pooled.p_value) << ','
          << csv::format_double(p.mean_fold_statistic) << ','
          << csv::format_double(p.mean_fold_p_value) << '\n';
    }
  }
  return o;
}

}  // namespace meshscore
