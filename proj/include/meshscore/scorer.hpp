#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "meshscore/chisq.hpp"
#include "meshscore/citation.hpp"

namespace meshscore {

using Score = std::int64_t;

// score >= theta classifies as Genetic.
struct Threshold {
  Score theta = 0;

  // Smallest representable threshold; classifies every citation Genetic.
  static constexpr Threshold min() { return {std::numeric_limits<Score>::min()}; }

  friend bool operator==(const Threshold&, const Threshold&) = default;
};

// +1 per positive indicator, -1 per negative one, 0 for any other descriptor.
Score score_citation(const Citation& citation, const IndicatorProfile& profile);

DomainLabel classify(Score score, Threshold threshold);

struct ScoreReport {
  std::vector<std::string> ids;   // input order
  std::vector<Score> scores;      // aligned with ids
  std::map<Score, std::uint64_t> histogram;
  std::uint64_t without_descriptors = 0;

  std::size_t size() const { return ids.size(); }
  // Throws InputError for unknown ids.
  Score score_of(const std::string& id) const;
};

// Per-shard histograms are merged in shard order; the report is identical
// for any worker count.
ScoreReport score_corpus(const std::vector<Citation>& citations, const IndicatorProfile& profile,
                         std::size_t workers = 1);

// id,score,label
void write_scores_csv(std::ostream& out, const ScoreReport& report, Threshold threshold);
// score,count
void write_histogram_csv(std::ostream& out, const ScoreReport& report);

}  // namespace meshscore
