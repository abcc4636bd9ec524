#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "meshscore/contingency.hpp"

namespace meshscore {

inline constexpr double kDefaultCriticalValue = 3.84;

enum class Indicator : std::int8_t { Negative = -1, Neutral = 0, Positive = 1 };

struct ChiSquareStatistic {
  double statistic = 0;
  bool yates_applied = false;
};

struct ChiSquareResult {
  double statistic = 0;
  bool yates_applied = false;
  bool significant = false;  // statistic > critical value, strictly
  Indicator indicator = Indicator::Neutral;
};

// Pearson X^2 for a 2x2 table. When any expected count is below 5 the
// deviations are continuity-corrected: max(|o - e| - 0.5, 0). In a 2x2 table
// |o - e| is the same in every cell (|o11*o22 - o12*o21| / n); it is computed
// once from the integer determinant. Throws DegenerateError on a zero margin.
ChiSquareStatistic chi_square(const ContingencyTable& table);

// Direction from raw relative frequencies o11/c1 vs o12/c2, compared as exact
// integer cross-products. Throws DegenerateError when c1 or c2 is zero.
Indicator indicator_of(const ContingencyTable& table);

// Indicator is Neutral whenever the statistic is not significant.
ChiSquareResult assess(const ContingencyTable& table,
                       double critical_value = kDefaultCriticalValue);

// Upper tail of chi-square with one degree of freedom: erfc(sqrt(x / 2)).
double pvalue_chisq_df1(double statistic);

struct IndicatorEntry {
  std::string descriptor;
  std::int8_t sign = 0;  // +1 or -1
  double chi_square = 0;
  bool yates_applied = false;

  friend bool operator==(const IndicatorEntry&, const IndicatorEntry&) = default;
};

struct IndicatorMetadata {
  std::uint64_t genetic_total = 0;
  std::uint64_t nongenetic_total = 0;
  double critical_value = kDefaultCriticalValue;
  std::string toolkit_version;

  friend bool operator==(const IndicatorMetadata&, const IndicatorMetadata&) = default;
};

// The trained model: signed indicators for every significant, non-excluded,
// non-tied descriptor. Entries are kept sorted by descriptor name.
class IndicatorProfile {
 public:
  IndicatorProfile() = default;
  IndicatorProfile(IndicatorMetadata metadata, std::vector<IndicatorEntry> entries);

  const IndicatorMetadata& metadata() const { return metadata_; }
  const std::vector<IndicatorEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t positive_count() const;
  std::size_t negative_count() const;

  // +1, -1, or 0 for descriptors without an indicator.
  int sign_of(const std::string& descriptor) const {
    auto it = sign_.find(descriptor);
    return it == sign_.end() ? 0 : it->second;
  }

  // Every sign flipped and the class totals exchanged.
  IndicatorProfile negated() const;

  friend bool operator==(const IndicatorProfile& a, const IndicatorProfile& b) {
    return a.metadata_ == b.metadata_ && a.entries_ == b.entries_;
  }

 private:
  IndicatorMetadata metadata_;
  std::vector<IndicatorEntry> entries_;
  std::unordered_map<std::string, std::int8_t> sign_;
};

struct SelectionSummary {
  std::size_t evaluated = 0;        // descriptors with a usable table
  std::size_t excluded = 0;         // skipped by the exclusion list
  std::size_t significant = 0;      // statistic above the critical value
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t tied = 0;             // significant but equal relative frequency; dropped
  std::vector<std::string> degenerate;  // zero-margin tables, skipped
};

struct SelectionResult {
  IndicatorProfile profile;
  SelectionSummary summary;
};

SelectionResult build_indicator_profile(const FrequencyProfile& profile,
                                        const ExclusionList& exclusion,
                                        double critical_value = kDefaultCriticalValue,
                                        std::size_t workers = 1);

// Sorted CSV preceded by two metadata lines:
//   #meshscore-indicators,version=<v>
//   #genetic_total=<g>,nongenetic_total=<n>,critical_value=<x>
//   descriptor,sign,chi_square,yates_applied
void write_indicator_csv(std::ostream& out, const IndicatorProfile& profile);
IndicatorProfile read_indicator_csv(std::istream& in);

}  // namespace meshscore
