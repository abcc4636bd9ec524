#include "meshscore/chisq.hpp"

#include <algorithm>
#include <cmath>

#include "meshscore/csv.hpp"
#include "meshscore/error.hpp"
#include "meshscore/parallel.hpp"
#include "meshscore/version.hpp"

namespace meshscore {

namespace {

using u128 = unsigned __int128;

constexpr double kYatesMinExpected = 5.0;

}  // namespace

ChiSquareStatistic chi_square(const ContingencyTable& t) {
  const ExpectedTable e = expected(t);
  const u128 a = static_cast<u128>(t.o11) * t.o22;
  const u128 b = static_cast<u128>(t.o12) * t.o21;
  const u128 det = a > b ? a - b : b - a;
  double deviation = static_cast<double>(det) / static_cast<double>(t.n());

  ChiSquareStatistic out;
  if (e.min() < kYatesMinExpected) {
    out.yates_applied = true;
    deviation = std::max(deviation - 0.5, 0.0);
  }
  const double d2 = deviation * deviation;
  // Row-wise pairing keeps the sum bit-identical under a column swap.
  out.statistic = (d2 / e.e11 + d2 / e.e12) + (d2 / e.e21 + d2 / e.e22);
  return out;
}

Indicator indicator_of(const ContingencyTable& t) {
  if (t.c1() == 0 || t.c2() == 0) {
    throw DegenerateError("indicator undefined: empty class column");
  }
  const u128 lhs = static_cast<u128>(t.o11) * t.c2();
  const u128 rhs = static_cast<u128>(t.o12) * t.c1();
  if (lhs > rhs) return Indicator::Positive;
  if (lhs < rhs) return Indicator::Negative;
  return Indicator::Neutral;
}

ChiSquareResult assess(const ContingencyTable& table, double critical_value) {
  const auto stat = chi_square(table);
  ChiSquareResult r;
  r.statistic = stat.statistic;
  r.yates_applied = stat.yates_applied;
  r.significant = stat.statistic > critical_value;
  r.indicator = r.significant ? indicator_of(table) : Indicator::Neutral;
  return r;
}

double pvalue_chisq_df1(double statistic) {
  if (!(statistic >= 0)) throw InputError("chi-square statistic must be non-negative");
  return std::erfc(std::sqrt(statistic / 2.0));
}

IndicatorProfile::IndicatorProfile(IndicatorMetadata metadata, std::vector<IndicatorEntry> entries)
    : metadata_(std::move(metadata)), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return a.descriptor < b.descriptor; });
  sign_.reserve(entries_.size());
  for (const auto& e : entries_) {
    if (e.sign != 1 && e.sign != -1) {
      throw InputError("indicator for '" + e.descriptor + "' must be +1 or -1");
    }
    if (!sign_.emplace(e.descriptor, e.sign).second) {
      throw InputError("duplicate indicator for '" + e.descriptor + "'");
    }
  }
}

std::size_t IndicatorProfile::positive_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const auto& e) { return e.sign > 0; }));
}

std::size_t IndicatorProfile::negative_count() const { return entries_.size() - positive_count(); }

IndicatorProfile IndicatorProfile::negated() const {
  auto meta = metadata_;
  std::swap(meta.genetic_total, meta.nongenetic_total);
  auto entries = entries_;
  for (auto& e : entries) e.sign = static_cast<std::int8_t>(-e.sign);
  return IndicatorProfile(std::move(meta), std::move(entries));
}

namespace {

enum class Outcome : std::uint8_t { Excluded, Degenerate, NotSignificant, Tied, Kept };

}  // namespace

SelectionResult build_indicator_profile(const FrequencyProfile& profile,
                                        const ExclusionList& exclusion, double critical_value,
                                        std::size_t workers) {
  if (profile.genetic_total() == 0 || profile.nongenetic_total() == 0) {
    throw DegenerateError("degenerate corpus: a class has no citations");
  }
  const auto names = profile.descriptors();
  std::vector<Outcome> outcome(names.size());
  std::vector<ChiSquareResult> results(names.size());

  for_each_shard(names.size(), workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (exclusion.contains(names[i])) {
        outcome[i] = Outcome::Excluded;
        continue;
      }
      const auto c = profile.counts_of(names[i]);
      const ContingencyTable t{c.genetic, c.nongenetic, profile.genetic_total() - c.genetic,
                               profile.nongenetic_total() - c.nongenetic};
      if (t.r1() == 0 || t.r2() == 0) {
        outcome[i] = Outcome::Degenerate;
        continue;
      }
      results[i] = assess(t, critical_value);
      if (!results[i].significant) {
        outcome[i] = Outcome::NotSignificant;
      } else if (results[i].indicator == Indicator::Neutral) {
        outcome[i] = Outcome::Tied;
      } else {
        outcome[i] = Outcome::Kept;
      }
    }
  });

  SelectionResult out;
  std::vector<IndicatorEntry> entries;
  for (std::size_t i = 0; i < names.size(); ++i) {
    switch (outcome[i]) {
      case Outcome::Excluded:
        ++out.summary.excluded;
        continue;
      case Outcome::Degenerate:
        out.summary.degenerate.push_back(names[i]);
        continue;
      case Outcome::NotSignificant:
        ++out.summary.evaluated;
        continue;
      case Outcome::Tied:
        ++out.summary.evaluated;
        ++out.summary.significant;
        ++out.summary.tied;
        continue;
      case Outcome::Kept:
        break;
    }
    ++out.summary.evaluated;
    ++out.summary.significant;
    const auto sign = static_cast<std::int8_t>(results[i].indicator);
    ++(sign > 0 ? out.summary.positive : out.summary.negative);
    entries.push_back({names[i], sign, results[i].statistic, results[i].yates_applied});
  }
  IndicatorMetadata meta{profile.genetic_total(), profile.nongenetic_total(), critical_value,
                         kVersion};
  out.profile = IndicatorProfile(std::move(meta), std::move(entries));
  return out;
}

void write_indicator_csv(std::ostream& out, const IndicatorProfile& profile) {
  const auto& m = profile.metadata();
  out << "#meshscore-indicators,version=" << m.toolkit_version << '\n';
  out << "#genetic_total=" << m.genetic_total << ",nongenetic_total=" << m.nongenetic_total
      << ",critical_value=" << csv::format_double(m.critical_value) << '\n';
  out << "descriptor,sign,chi_square,yates_applied\n";
  for (const auto& e : profile.entries()) {
    out << csv::quote(e.descriptor) << ',' << (e.sign > 0 ? "+1" : "-1") << ','
        << csv::format_double(e.chi_square) << ',' << (e.yates_applied ? "true" : "false")
        << '\n';
  }
}

namespace {

std::string_view value_after(std::string_view field, std::string_view key, std::size_t line_no) {
  if (field.substr(0, key.size()) != key) {
    throw ParseError("line " + std::to_string(line_no) + ": expected '" + std::string(key) + "'",
                     std::nullopt, line_no);
  }
  return field.substr(key.size());
}

}  // namespace

IndicatorProfile read_indicator_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  IndicatorMetadata meta;
  if (!csv::next_line(in, line, line_no)) throw ParseError("empty indicator file", std::nullopt, 0);
  auto f = csv::split(line);
  if (f.size() != 2 || f[0] != "#meshscore-indicators") {
    throw ParseError("line 1: not an indicator profile", std::nullopt, 1);
  }
  meta.toolkit_version = std::string(value_after(f[1], "version=", line_no));
  if (!csv::next_line(in, line, line_no)) throw ParseError("truncated header", std::nullopt, 2);
  f = csv::split(line);
  if (f.size() != 3) throw ParseError("line 2: malformed metadata", std::nullopt, 2);
  meta.genetic_total = csv::to_uint(value_after(f[0], "#genetic_total=", line_no), line_no);
  meta.nongenetic_total = csv::to_uint(value_after(f[1], "nongenetic_total=", line_no), line_no);
  meta.critical_value = csv::to_double(value_after(f[2], "critical_value=", line_no), line_no);
  if (!csv::next_line(in, line, line_no) || line != "descriptor,sign,chi_square,yates_applied") {
    throw ParseError("line 3: expected column header", std::nullopt, 3);
  }
  std::vector<IndicatorEntry> entries;
  while (csv::next_line(in, line, line_no)) {
    f = csv::split(line);
    if (f.size() != 4) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 4 fields", std::nullopt,
                       line_no);
    }
    IndicatorEntry e;
    e.descriptor = f[0];
    e.sign = static_cast<std::int8_t>(csv::to_int(f[1] == "+1" ? "1" : f[1], line_no));
    e.chi_square = csv::to_double(f[2], line_no);
    if (f[3] != "true" && f[3] != "false") {
      throw ParseError("line " + std::to_string(line_no) + ": yates_applied must be true/false",
                       std::nullopt, line_no);
    }
    e.yates_applied = f[3] == "true";
    entries.push_back(std::move(e));
  }
  return IndicatorProfile(std::move(meta), std::move(entries));
}

}  // namespace meshscore
