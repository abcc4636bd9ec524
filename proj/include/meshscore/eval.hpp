#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "meshscore/chisq.hpp"
#include "meshscore/citation.hpp"
#include "meshscore/scorer.hpp"

namespace meshscore {

// Genetic is the positive class.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o);

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct LabeledId {
  std::string id;
  DomainLabel label;

  friend bool operator==(const LabeledId&, const LabeledId&) = default;
};

// Positional. Throws AlignmentError on a length mismatch.
ConfusionCounts confusion(std::span<const DomainLabel> predicted, std::span<const DomainLabel> gold);
// Matched by id. Throws AlignmentError unless both sides hold the same ids.
ConfusionCounts confusion(const std::vector<LabeledId>& predicted,
                          const std::vector<LabeledId>& gold);

// Undefined ratios (zero denominators) are reported as 0 and flagged.
struct MetricSet {
  double acc = 0;
  double rec = 0;
  double pre = 0;
  double f = 0;
  bool rec_undefined = false;
  bool pre_undefined = false;
  bool f_undefined = false;

  bool degenerate() const { return rec_undefined || pre_undefined || f_undefined; }
};

// Throws InputError when counts are all zero.
MetricSet metrics(const ConfusionCounts& counts);

struct CalibrationPoint {
  Score theta = 0;
  double accuracy = 0;
};

struct ThresholdFit {
  Threshold threshold;
  double accuracy = 0;
};

// Accuracy of the score >= theta rule for every integer theta in
// [min score, max score + 1].
std::vector<CalibrationPoint> accuracy_curve(std::span<const Score> scores,
                                             std::span<const DomainLabel> gold);

// Maximum-accuracy threshold over [min score, max score + 1]; the smallest
// theta wins ties. Throws InputError on empty input.
ThresholdFit optimize_threshold(std::span<const Score> scores, std::span<const DomainLabel> gold);

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  Threshold theta;
  double train_accuracy = 0;
  ConfusionCounts counts;
  MetricSet metrics;
  std::vector<CalibrationPoint> calibration;  // training accuracy per theta
};

struct CrossValReport {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  bool refit_per_fold = false;
  std::vector<FoldResult> folds;
  MetricSet mean;                  // arithmetic mean of fold metrics
  std::size_t degenerate_folds = 0;
  ConfusionCounts pooled;          // sum of the fold confusion counts
  double mean_theta = 0;
  // Argmax of the fold-averaged calibration curve (smallest on ties).
  Threshold consensus_theta;
  std::vector<CalibrationPoint> mean_calibration;
  // Held-out prediction for every citation, in input order.
  std::vector<LabeledId> predictions;
  std::vector<std::size_t> fold_of;  // aligned with predictions
};

// Receives the training folds of one split. A fixed profile ignores them.
using ProfileBuilder = std::function<IndicatorProfile(const std::vector<Citation>& training)>;

ProfileBuilder fixed_profile(IndicatorProfile profile);
// Rebuilds the frequency and indicator profiles from each split's training folds.
ProfileBuilder refit_profile(ExclusionList exclusion, double critical_value, std::size_t workers);

// Threshold fit on k-1 folds, metrics on the held-out fold.
CrossValReport cross_validate(const std::vector<Citation>& labeled, std::size_t k,
                              std::uint64_t seed, const ProfileBuilder& builder,
                              bool refit_per_fold = false, std::size_t workers = 1);

struct KappaResult {
  double kappa = 0;
  double observed_agreement = 0;
  double expected_agreement = 0;
  bool undefined = false;  // expected agreement of 1
};

KappaResult cohen_kappa(std::span<const DomainLabel> a, std::span<const DomainLabel> b);

struct McNemarResult {
  double statistic = 0;
  double p_value = 1;
  std::uint64_t n01 = 0;  // a correct, b wrong
  std::uint64_t n10 = 0;  // a wrong, b correct
  bool no_discordant = false;
};

// Continuity-corrected: (|n01 - n10| - 1)^2 / (n01 + n10).
McNemarResult mcnemar(std::span<const DomainLabel> pred_a, std::span<const DomainLabel> pred_b,
                      std::span<const DomainLabel> gold);
McNemarResult mcnemar_from_counts(std::uint64_t n01, std::uint64_t n10);

}  // namespace meshscore
