#pragma once

#include <array>
#include <istream>
#include <ostream>
#include <vector>

#include "meshscore/citation.hpp"
#include "meshscore/eval.hpp"
#include "meshscore/text.hpp"

namespace meshscore {

// Multinomial naive Bayes with additive (Laplace) smoothing. Index 0 is
// NonGenetic, index 1 Genetic.
struct NBModel {
  double alpha = 1.0;
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> log_prob;  // per vocabulary index
  Vocabulary vocabulary;
};

struct NBPrediction {
  DomainLabel label = DomainLabel::NonGenetic;
  // log P(genetic | d) - log P(nongenetic | d)
  double log_odds = 0;
};

// Entry weights are taken as term counts. Throws DegenerateError unless
// both classes are present.
NBModel nb_train(const std::vector<DocumentVector>& documents,
                 const std::vector<DomainLabel>& labels, const Vocabulary& vocabulary,
                 double alpha = 1.0);

// Ties go to NonGenetic.
NBPrediction nb_predict(const NBModel& model, const DocumentVector& document);

// Versioned JSON.
void write_nb_json(std::ostream& out, const NBModel& model);
NBModel read_nb_json(std::istream& in);

// Text pipeline, vocabulary and model fitted on one set of labeled citations.
class NaiveBayesClassifier {
 public:
  NaiveBayesClassifier(PipelineConfig config, double alpha = 1.0);

  void fit(const std::vector<Citation>& labeled, std::size_t workers = 1);
  NBPrediction predict(const Citation& citation) const;
  const NBModel& model() const { return model_; }

 private:
  TextPipeline pipeline_;
  double alpha_;
  NBModel model_;
};

struct NBCrossValidation {
  std::vector<LabeledId> predictions;  // input order
  std::vector<ConfusionCounts> fold_counts;
  MetricSet mean;
};

// Trains on k-1 folds and predicts the held-out fold, using the same fold
// assignment as the chi-square cross-validation for the same (k, seed).
NBCrossValidation nb_cross_validate(const std::vector<Citation>& labeled,
                                    const PipelineConfig& config, std::size_t k,
                                    std::uint64_t seed, double alpha = 1.0,
                                    std::size_t workers = 1);

}  // namespace meshscore
