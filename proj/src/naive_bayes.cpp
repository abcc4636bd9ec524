#include "meshscore/naive_bayes.hpp"

#include <cmath>

#include <json.hpp>

#include "meshscore/corpus_io.hpp"
#include "meshscore/error.hpp"

namespace meshscore {

namespace {

constexpr int kModelFormatVersion = 1;

std::size_t class_index(DomainLabel l) { return l == DomainLabel::Genetic ? 1 : 0; }

}  // namespace

NBModel nb_train(const std::vector<DocumentVector>& documents,
                 const std::vector<DomainLabel>& labels, const Vocabulary& vocabulary,
                 double alpha) {
  if (documents.size() != labels.size()) {
    throw AlignmentError("naive Bayes: documents and labels differ in length");
  }
  if (!(alpha > 0)) throw UsageError("naive Bayes smoothing must be positive");
  const std::size_t v = vocabulary.size();
  std::array<std::uint64_t, 2> docs{};
  std::array<std::vector<double>, 2> counts{std::vector<double>(v, 0.0),
                                            std::vector<double>(v, 0.0)};
  std::array<double, 2> totals{};
  for (std::size_t d = 0; d < documents.size(); ++d) {
    const auto c = class_index(labels[d]);
    ++docs[c];
    for (const auto& [i, w] : documents[d].entries) {
      counts[c][i] += w;
      totals[c] += w;
    }
  }
  if (docs[0] == 0 || docs[1] == 0) {
    throw DegenerateError("naive Bayes needs training documents from both classes");
  }
  NBModel m;
  m.alpha = alpha;
  m.vocabulary = vocabulary;
  const double n = static_cast<double>(documents.size());
  for (std::size_t c = 0; c < 2; ++c) {
    m.log_prior[c] = std::log(static_cast<double>(docs[c]) / n);
    const double denom = totals[c] + alpha * static_cast<double>(v);
    m.log_prob[c].resize(v);
    for (std::size_t i = 0; i < v; ++i) m.log_prob[c][i] = std::log((counts[c][i] + alpha) / denom);
  }
  return m;
}

NBPrediction nb_predict(const NBModel& model, const DocumentVector& document) {
  std::array<double, 2> joint = model.log_prior;
  for (const auto& [i, w] : document.entries) {
    joint[0] += w * model.log_prob[0][i];
    joint[1] += w * model.log_prob[1][i];
  }
  NBPrediction p;
  p.log_odds = joint[1] - joint[0];
  p.label = p.log_odds > 0 ? DomainLabel::Genetic : DomainLabel::NonGenetic;
  return p;
}

void write_nb_json(std::ostream& out, const NBModel& m) {
  nlohmann::ordered_json j;
  j["format"] = "meshscore-naive-bayes";
  j["format_version"] = kModelFormatVersion;
  j["alpha"] = m.alpha;
  j["vocabulary"] = {{"document_count", m.vocabulary.document_count()},
                     {"terms", m.vocabulary.terms()},
                     {"document_frequencies", m.vocabulary.document_frequencies()}};
  j["log_prior"] = {{"nongenetic", m.log_prior[0]}, {"genetic", m.log_prior[1]}};
  j["log_prob"] = {{"nongenetic", m.log_prob[0]}, {"genetic", m.log_prob[1]}};
  out << j.dump() << '\n';
}

NBModel read_nb_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
    if (j.at("format") != "meshscore-naive-bayes") throw InputError("not a naive Bayes model");
    if (j.at("format_version").get<int>() != kModelFormatVersion) {
      throw InputError("unsupported naive Bayes model version");
    }
    NBModel m;
    m.alpha = j.at("alpha").get<double>();
    const auto& voc = j.at("vocabulary");
    m.vocabulary = Vocabulary(voc.at("terms").get<std::vector<std::string>>(),
                              voc.at("document_frequencies").get<std::vector<std::uint64_t>>(),
                              voc.at("document_count").get<std::uint64_t>());
    m.log_prior = {j.at("log_prior").at("nongenetic").get<double>(),
                   j.at("log_prior").at("genetic").get<double>()};
    m.log_prob[0] = j.at("log_prob").at("nongenetic").get<std::vector<double>>();
    m.log_prob[1] = j.at("log_prob").at("genetic").get<std::vector<double>>();
    if (m.log_prob[0].size() != m.vocabulary.size() ||
        m.log_prob[1].size() != m.vocabulary.size()) {
      throw InputError("naive Bayes model: probability vectors do not match vocabulary");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("naive Bayes model: ") + e.what(), std::nullopt, std::nullopt);
  }
}

NaiveBayesClassifier::NaiveBayesClassifier(PipelineConfig config, double alpha)
    : pipeline_(std::move(config)), alpha_(alpha) {}

void NaiveBayesClassifier::fit(const std::vector<Citation>& labeled, std::size_t workers) {
  std::vector<std::vector<std::string>> docs;
  std::vector<DomainLabel> labels;
  docs.reserve(labeled.size());
  for (const auto& c : labeled) {
    if (!c.label) throw InputError("citation '" + c.id + "' has no label");
    docs.push_back(pipeline_.terms(c));
    labels.push_back(*c.label);
  }
  auto vocab = build_vocabulary(docs, pipeline_.config().min_df, workers);
  std::vector<DocumentVector> counts;
  counts.reserve(docs.size());
  for (const auto& d : docs) counts.push_back(count_vector(d, vocab));
  model_ = nb_train(counts, labels, vocab, alpha_);
}

NBPrediction NaiveBayesClassifier::predict(const Citation& citation) const {
  return nb_predict(model_, count_vector(pipeline_.terms(citation), model_.vocabulary));
}

NBCrossValidation nb_cross_validate(const std::vector<Citation>& labeled,
                                    const PipelineConfig& config, std::size_t k,
                                    std::uint64_t seed, double alpha, std::size_t workers) {
  const auto folds = split_folds(labeled, k, seed);
  NBCrossValidation out;
  out.predictions.resize(labeled.size());
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<Citation> training;
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      if (folds.fold_at(i) != f) training.push_back(labeled[i]);
    }
    NaiveBayesClassifier nb(config, alpha);
    nb.fit(training, workers);
    std::vector<DomainLabel> pred, gold;
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      if (folds.fold_at(i) != f) continue;
      const auto p = nb.predict(labeled[i]).label;
      out.predictions[i] = {labeled[i].id, p};
      pred.push_back(p);
      gold.push_back(*labeled[i].label);
    }
    out.fold_counts.push_back(confusion(pred, gold));
    const auto m = metrics(out.fold_counts.back());
    const double kk = static_cast<double>(k);
    out.mean.acc += m.acc / kk;
    out.mean.rec += m.rec / kk;
    out.mean.pre += m.pre / kk;
    out.mean.f += m.f / kk;
    out.mean.rec_undefined = out.mean.rec_undefined || m.rec_undefined;
    out.mean.pre_undefined = out.mean.pre_undefined || m.pre_undefined;
    out.mean.f_undefined = out.mean.f_undefined || m.f_undefined;
  }
  return out;
}

}  // namespace meshscore
