#include "meshscore/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "meshscore/contingency.hpp"
#include "meshscore/corpus_io.hpp"
#include "meshscore/error.hpp"

namespace meshscore {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  tp += o.tp;
  tn += o.tn;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

ConfusionCounts confusion(std::span<const DomainLabel> predicted,
                          std::span<const DomainLabel> gold) {
  if (predicted.size() != gold.size()) {
    throw AlignmentError("prediction count " + std::to_string(predicted.size()) +
                         " does not match gold count " + std::to_string(gold.size()));
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool p = predicted[i] == DomainLabel::Genetic;
    const bool g = gold[i] == DomainLabel::Genetic;
    if (p && g) ++c.tp;
    else if (!p && !g) ++c.tn;
    else if (p) ++c.fp;
    else ++c.fn;
  }
  return c;
}

ConfusionCounts confusion(const std::vector<LabeledId>& predicted,
                          const std::vector<LabeledId>& gold) {
  if (predicted.size() != gold.size()) {
    throw AlignmentError("prediction count " + std::to_string(predicted.size()) +
                         " does not match gold count " + std::to_string(gold.size()));
  }
  std::unordered_map<std::string_view, DomainLabel> gold_of;
  gold_of.reserve(gold.size());
  for (const auto& g : gold) {
    if (!gold_of.emplace(g.id, g.label).second) {
      throw AlignmentError("duplicate gold id '" + g.id + "'");
    }
  }
  std::vector<DomainLabel> p, g;
  p.reserve(predicted.size());
  g.reserve(predicted.size());
  for (const auto& pred : predicted) {
    auto it = gold_of.find(pred.id);
    if (it == gold_of.end()) throw AlignmentError("no gold label for id '" + pred.id + "'");
    p.push_back(pred.label);
    g.push_back(it->second);
    gold_of.erase(it);
  }
  return confusion(p, g);
}

MetricSet metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw InputError("metrics need at least one prediction");
  MetricSet m;
  m.acc = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  if (c.tp + c.fn == 0) {
    m.rec_undefined = true;
  } else {
    m.rec = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  }
  if (c.tp + c.fp == 0) {
    m.pre_undefined = true;
  } else {
    m.pre = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  }
  if (m.pre + m.rec == 0) {
    m.f_undefined = true;
  } else {
    m.f = 2 * m.pre * m.rec / (m.pre + m.rec);
  }
  return m;
}

namespace {

struct ScoreGroup {
  Score score;
  std::uint64_t genetic;
  std::uint64_t nongenetic;
};

// Distinct scores ascending with per-class counts.
std::vector<ScoreGroup> group_scores(std::span<const Score> scores,
                                     std::span<const DomainLabel> gold) {
  if (scores.size() != gold.size()) {
    throw AlignmentError("score count does not match label count");
  }
  if (scores.empty()) throw InputError("threshold optimization needs at least one score");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  std::vector<ScoreGroup> groups;
  for (auto i : order) {
    if (groups.empty() || groups.back().score != scores[i]) groups.push_back({scores[i], 0, 0});
    ++(gold[i] == DomainLabel::Genetic ? groups.back().genetic : groups.back().nongenetic);
  }
  return groups;
}

std::uint64_t genetic_total(const std::vector<ScoreGroup>& groups) {
  std::uint64_t g = 0;
  for (const auto& x : groups) g += x.genetic;
  return g;
}

}  // namespace

std::vector<CalibrationPoint> accuracy_curve(std::span<const Score> scores,
                                             std::span<const DomainLabel> gold) {
  const auto groups = group_scores(scores, gold);
  const double n = static_cast<double>(scores.size());
  // theta = min: everything is predicted genetic.
  std::int64_t correct = static_cast<std::int64_t>(genetic_total(groups));
  std::vector<CalibrationPoint> curve;
  std::size_t g = 0;
  for (Score theta = groups.front().score;; ++theta) {
    // Citations scoring theta - 1 just flipped to nongenetic.
    if (g < groups.size() && groups[g].score == theta - 1) {
      correct += static_cast<std::int64_t>(groups[g].nongenetic) -
                 static_cast<std::int64_t>(groups[g].genetic);
      ++g;
    }
    curve.push_back({theta, static_cast<double>(correct) / n});
    if (theta == groups.back().score + 1) break;
  }
  return curve;
}

ThresholdFit optimize_threshold(std::span<const Score> scores, std::span<const DomainLabel> gold) {
  const auto groups = group_scores(scores, gold);
  std::int64_t correct = static_cast<std::int64_t>(genetic_total(groups));
  std::int64_t best = correct;
  Score best_theta = groups.front().score;
  // Accuracy only changes just above a distinct score, so the smallest theta
  // of each plateau is either the minimum score or a distinct score + 1.
  for (const auto& grp : groups) {
    correct += static_cast<std::int64_t>(grp.nongenetic) - static_cast<std::int64_t>(grp.genetic);
    if (correct > best) {
      best = correct;
      best_theta = grp.score + 1;
    }
  }
  return {Threshold{best_theta}, static_cast<double>(best) / static_cast<double>(scores.size())};
}

ProfileBuilder fixed_profile(IndicatorProfile profile) {
  return [p = std::move(profile)](const std::vector<Citation>&) { return p; };
}

ProfileBuilder refit_profile(ExclusionList exclusion, double critical_value, std::size_t workers) {
  return [exclusion = std::move(exclusion), critical_value,
          workers](const std::vector<Citation>& training) {
    auto freq = build_profile(training, exclusion, workers);
    return build_indicator_profile(freq, exclusion, critical_value, workers).profile;
  };
}

namespace {

// Accuracy at any theta: clamps to the ends of a fold's curve, where the
// predictions no longer change.
double accuracy_at(const std::vector<CalibrationPoint>& curve, Score theta) {
  if (theta <= curve.front().theta) return curve.front().accuracy;
  if (theta >= curve.back().theta) return curve.back().accuracy;
  return curve[static_cast<std::size_t>(theta - curve.front().theta)].accuracy;
}

}  // namespace

CrossValReport cross_validate(const std::vector<Citation>& labeled, std::size_t k,
                              std::uint64_t seed, const ProfileBuilder& builder,
                              bool refit_per_fold, std::size_t workers) {
  for (const auto& c : labeled) {
    if (!c.label) throw InputError("citation '" + c.id + "' has no gold label");
  }
  const auto folds = split_folds(labeled, k, seed);
  std::vector<DomainLabel> gold;
  gold.reserve(labeled.size());
  for (const auto& c : labeled) gold.push_back(*c.label);

  CrossValReport report;
  report.k = k;
  report.seed = seed;
  report.refit_per_fold = refit_per_fold;
  report.predictions.resize(labeled.size());
  report.fold_of.resize(labeled.size());

  std::vector<Score> shared_scores;
  if (!refit_per_fold) shared_scores = score_corpus(labeled, builder(labeled), workers).scores;

  for (std::size_t f = 0; f < k; ++f) {
    std::vector<Score> train_scores, test_scores;
    std::vector<DomainLabel> train_gold, test_gold;
    std::vector<std::size_t> test_index;

    std::vector<Score> scores;
    if (refit_per_fold) {
      std::vector<Citation> training;
      for (std::size_t i = 0; i < labeled.size(); ++i) {
        if (folds.fold_at(i) != f) training.push_back(labeled[i]);
      }
      scores = score_corpus(labeled, builder(training), workers).scores;
    }
    const auto& s = refit_per_fold ? scores : shared_scores;

    for (std::size_t i = 0; i < labeled.size(); ++i) {
      if (folds.fold_at(i) == f) {
        test_scores.push_back(s[i]);
        test_gold.push_back(gold[i]);
        test_index.push_back(i);
      } else {
        train_scores.push_back(s[i]);
        train_gold.push_back(gold[i]);
      }
    }

    FoldResult fr;
    fr.fold = f;
    fr.train_size = train_scores.size();
    fr.test_size = test_scores.size();
    const auto fit = optimize_threshold(train_scores, train_gold);
    fr.theta = fit.threshold;
    fr.train_accuracy = fit.accuracy;
    fr.calibration = accuracy_curve(train_scores, train_gold);

    std::vector<DomainLabel> predicted;
    predicted.reserve(test_scores.size());
    for (std::size_t j = 0; j < test_scores.size(); ++j) {
      predicted.push_back(classify(test_scores[j], fr.theta));
      const auto i = test_index[j];
      report.predictions[i] = {labeled[i].id, predicted.back()};
      report.fold_of[i] = f;
    }
    fr.counts = confusion(predicted, test_gold);
    fr.metrics = metrics(fr.counts);
    report.pooled += fr.counts;
    if (fr.metrics.degenerate()) ++report.degenerate_folds;
    report.folds.push_back(std::move(fr));
  }

  const double kk = static_cast<double>(k);
  for (const auto& fr : report.folds) {
    report.mean.acc += fr.metrics.acc / kk;
    report.mean.rec += fr.metrics.rec / kk;
    report.mean.pre += fr.metrics.pre / kk;
    report.mean.f += fr.metrics.f / kk;
    report.mean.rec_undefined = report.mean.rec_undefined || fr.metrics.rec_undefined;
    report.mean.pre_undefined = report.mean.pre_undefined || fr.metrics.pre_undefined;
    report.mean.f_undefined = report.mean.f_undefined || fr.metrics.f_undefined;
    report.mean_theta += static_cast<double>(fr.theta.theta) / kk;
  }

  Score lo = report.folds.front().calibration.front().theta;
  Score hi = report.folds.front().calibration.back().theta;
  for (const auto& fr : report.folds) {
    lo = std::min(lo, fr.calibration.front().theta);
    hi = std::max(hi, fr.calibration.back().theta);
  }
  double best = -1;
  for (Score theta = lo; theta <= hi; ++theta) {
    double acc = 0;
    for (const auto& fr : report.folds) acc += accuracy_at(fr.calibration, theta);
    acc /= kk;
    report.mean_calibration.push_back({theta, acc});
    if (acc > best) {
      best = acc;
      report.consensus_theta = Threshold{theta};
    }
  }
  return report;
}

KappaResult cohen_kappa(std::span<const DomainLabel> a, std::span<const DomainLabel> b) {
  if (a.size() != b.size()) throw AlignmentError("kappa needs label vectors of equal length");
  if (a.empty()) throw InputError("kappa needs at least one label pair");
  std::uint64_t agree = 0, a_pos = 0, b_pos = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    agree += a[i] == b[i];
    a_pos += a[i] == DomainLabel::Genetic;
    b_pos += b[i] == DomainLabel::Genetic;
  }
  const double n = static_cast<double>(a.size());
  KappaResult r;
  r.observed_agreement = static_cast<double>(agree) / n;
  const double pa = static_cast<double>(a_pos) / n;
  const double pb = static_cast<double>(b_pos) / n;
  r.expected_agreement = pa * pb + (1 - pa) * (1 - pb);
  if (r.expected_agreement >= 1.0) {
    r.undefined = true;
    r.kappa = 0;
    return r;
  }
  r.kappa = (r.observed_agreement - r.expected_agreement) / (1 - r.expected_agreement);
  return r;
}

McNemarResult mcnemar_from_counts(std::uint64_t n01, std::uint64_t n10) {
  McNemarResult r;
  r.n01 = n01;
  r.n10 = n10;
  if (n01 + n10 == 0) {
    r.no_discordant = true;
    return r;
  }
  const double diff = std::fabs(static_cast<double>(n01) - static_cast<double>(n10)) - 1.0;
  r.statistic = diff * diff / static_cast<double>(n01 + n10);
  r.p_value = pvalue_chisq_df1(r.statistic);
  return r;
}

McNemarResult mcnemar(std::span<const DomainLabel> pred_a, std::span<const DomainLabel> pred_b,
                      std::span<const DomainLabel> gold) {
  if (pred_a.size() != gold.size() || pred_b.size() != gold.size()) {
    throw AlignmentError("McNemar needs aligned prediction and gold vectors");
  }
  std::uint64_t n01 = 0, n10 = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool a_ok = pred_a[i] == gold[i];
    const bool b_ok = pred_b[i] == gold[i];
    if (a_ok && !b_ok) ++n01;
    if (!a_ok && b_ok) ++n10;
  }
  return mcnemar_from_counts(n01, n10);
}

}  // namespace meshscore
