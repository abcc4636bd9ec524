#include "meshscore/contingency.hpp"

#include <algorithm>

#include "meshscore/csv.hpp"
#include "meshscore/error.hpp"
#include "meshscore/parallel.hpp"

namespace meshscore {

FrequencyProfile::FrequencyProfile(std::uint64_t genetic_total, std::uint64_t nongenetic_total,
                                   std::unordered_map<std::string, DescriptorCounts> counts)
    : genetic_total_(genetic_total),
      nongenetic_total_(nongenetic_total),
      counts_(std::move(counts)) {
  for (const auto& [name, c] : counts_) {
    if (c.genetic > genetic_total_ || c.nongenetic > nongenetic_total_) {
      throw InputError("descriptor '" + name + "' has a count above its class total");
    }
  }
}

bool FrequencyProfile::contains(std::string_view descriptor) const {
  return counts_.contains(std::string(descriptor));
}

DescriptorCounts FrequencyProfile::counts_of(std::string_view descriptor) const {
  auto it = counts_.find(std::string(descriptor));
  return it == counts_.end() ? DescriptorCounts{} : it->second;
}

std::vector<std::string> FrequencyProfile::descriptors() const {
  std::vector<std::string> names;
  names.reserve(counts_.size());
  for (const auto& [name, c] : counts_) names.push_back(name);
  std::sort(names.begin(), names.end());
  return names;
}

void FrequencyProfile::add(const Citation& labeled, const ExclusionList& exclusion) {
  if (!labeled.label) throw InputError("citation '" + labeled.id + "' has no label");
  const bool genetic = *labeled.label == DomainLabel::Genetic;
  ++(genetic ? genetic_total_ : nongenetic_total_);
  // descriptors are unique per citation, so this counts presence.
  for (const auto& d : labeled.descriptors) {
    if (exclusion.contains(d)) continue;
    auto& c = counts_[d];
    ++(genetic ? c.genetic : c.nongenetic);
  }
}

FrequencyProfile& FrequencyProfile::merge(const FrequencyProfile& other) {
  genetic_total_ += other.genetic_total_;
  nongenetic_total_ += other.nongenetic_total_;
  for (const auto& [name, c] : other.counts_) {
    auto& mine = counts_[name];
    mine.genetic += c.genetic;
    mine.nongenetic += c.nongenetic;
  }
  return *this;
}

FrequencyProfile FrequencyProfile::swapped() const {
  std::unordered_map<std::string, DescriptorCounts> counts;
  counts.reserve(counts_.size());
  for (const auto& [name, c] : counts_) counts.emplace(name, DescriptorCounts{c.nongenetic, c.genetic});
  return FrequencyProfile(nongenetic_total_, genetic_total_, std::move(counts));
}

FrequencyProfile build_profile(const std::vector<Citation>& labeled,
                               const ExclusionList& exclusion, std::size_t workers) {
  const std::size_t shards = shard_count(labeled.size(), workers);
  std::vector<FrequencyProfile> partial(shards);
  for_each_shard(labeled.size(), shards, [&](std::size_t s, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) partial[s].add(labeled[i], exclusion);
  });
  FrequencyProfile profile;
  for (const auto& p : partial) profile.merge(p);
  if (profile.genetic_total() == 0 || profile.nongenetic_total() == 0) {
    throw DegenerateError("degenerate corpus: " + std::to_string(profile.genetic_total()) +
                          " genetic and " + std::to_string(profile.nongenetic_total()) +
                          " nongenetic citations");
  }
  return profile;
}

ContingencyTable table_for(const FrequencyProfile& profile, std::string_view descriptor) {
  auto it = profile.raw().find(std::string(descriptor));
  if (it == profile.raw().end() || (it->second.genetic == 0 && it->second.nongenetic == 0)) {
    throw InputError("descriptor '" + std::string(descriptor) + "' is not in the profile");
  }
  const auto& c = it->second;
  return {c.genetic, c.nongenetic, profile.genetic_total() - c.genetic,
          profile.nongenetic_total() - c.nongenetic};
}

double ExpectedTable::min() const { return std::min({e11, e12, e21, e22}); }

ExpectedTable expected(const ContingencyTable& t) {
  if (t.r1() == 0 || t.r2() == 0 || t.c1() == 0 || t.c2() == 0) {
    throw DegenerateError("degenerate table: zero margin (r1=" + std::to_string(t.r1()) +
                          ", r2=" + std::to_string(t.r2()) + ", c1=" + std::to_string(t.c1()) +
                          ", c2=" + std::to_string(t.c2()) + ")");
  }
  const double n = static_cast<double>(t.n());
  const double r1 = static_cast<double>(t.r1());
  const double r2 = static_cast<double>(t.r2());
  const double c1 = static_cast<double>(t.c1());
  const double c2 = static_cast<double>(t.c2());
  return {r1 * c1 / n, r1 * c2 / n, r2 * c1 / n, r2 * c2 / n};
}

void write_profile_csv(std::ostream& out, const FrequencyProfile& profile) {
  out << "#totals," << profile.genetic_total() << ',' << profile.nongenetic_total() << '\n';
  out << "descriptor,genetic_count,nongenetic_count\n";
  for (const auto& name : profile.descriptors()) {
    const auto c = profile.counts_of(name);
    out << csv::quote(name) << ',' << c.genetic << ',' << c.nongenetic << '\n';
  }
}

FrequencyProfile read_profile_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!csv::next_line(in, line, line_no)) throw ParseError("empty profile file", std::nullopt, 0);
  auto header = csv::split(line);
  if (header.size() != 3 || header[0] != "#totals") {
    throw ParseError("line 1: expected '#totals,<genetic>,<nongenetic>'", std::nullopt, 1);
  }
  const auto gtotal = csv::to_uint(header[1], line_no);
  const auto ntotal = csv::to_uint(header[2], line_no);
  if (!csv::next_line(in, line, line_no) || line != "descriptor,genetic_count,nongenetic_count") {
    throw ParseError("line 2: expected column header", std::nullopt, 2);
  }
  std::unordered_map<std::string, DescriptorCounts> counts;
  while (csv::next_line(in, line, line_no)) {
    auto f = csv::split(line);
    if (f.size() != 3) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 3 fields", std::nullopt,
                       line_no);
    }
    counts[f[0]] = {csv::to_uint(f[1], line_no), csv::to_uint(f[2], line_no)};
  }
  return FrequencyProfile(gtotal, ntotal, std::move(counts));
}

}  // namespace meshscore
