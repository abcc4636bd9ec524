#include "meshscore/scorer.hpp"

#include "meshscore/csv.hpp"
#include "meshscore/error.hpp"
#include "meshscore/parallel.hpp"

namespace meshscore {

Score score_citation(const Citation& citation, const IndicatorProfile& profile) {
  Score score = 0;
  for (const auto& d : citation.descriptors) score += profile.sign_of(d);
  return score;
}

DomainLabel classify(Score score, Threshold threshold) {
  return score >= threshold.theta ? DomainLabel::Genetic : DomainLabel::NonGenetic;
}

Score ScoreReport::score_of(const std::string& id) const {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == id) return scores[i];
  }
  throw InputError("no score for id '" + id + "'");
}

ScoreReport score_corpus(const std::vector<Citation>& citations, const IndicatorProfile& profile,
                         std::size_t workers) {
  ScoreReport report;
  report.ids.resize(citations.size());
  report.scores.resize(citations.size());
  const std::size_t shards = shard_count(citations.size(), workers);
  std::vector<std::map<Score, std::uint64_t>> histograms(shards);
  std::vector<std::uint64_t> empty(shards, 0);

  for_each_shard(citations.size(), shards, [&](std::size_t s, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& c = citations[i];
      report.ids[i] = c.id;
      report.scores[i] = score_citation(c, profile);
      ++histograms[s][report.scores[i]];
      if (c.descriptors.empty()) ++empty[s];
    }
  });
  for (std::size_t s = 0; s < shards; ++s) {
    for (const auto& [score, count] : histograms[s]) report.histogram[score] += count;
    report.without_descriptors += empty[s];
  }
  return report;
}

void write_scores_csv(std::ostream& out, const ScoreReport& report, Threshold threshold) {
  out << "id,score,label\n";
  for (std::size_t i = 0; i < report.size(); ++i) {
    out << csv::quote(report.ids[i]) << ',' << report.scores[i] << ','
        << to_string(classify(report.scores[i], threshold)) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const ScoreReport& report) {
  out << "score,count\n";
  for (const auto& [score, count] : report.histogram) out << score << ',' << count << '\n';
}

}  // namespace meshscore
