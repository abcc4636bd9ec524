#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "meshscore/citation.hpp"

namespace meshscore {

struct DescriptorCounts {
  std::uint64_t genetic = 0;
  std::uint64_t nongenetic = 0;

  friend bool operator==(const DescriptorCounts&, const DescriptorCounts&) = default;
};

// Per-class document frequencies of descriptors. Counting unit is the
// citation: a descriptor counts once per citation that carries it.
// Profiles form a commutative monoid under merge(), so corpora can be
// counted in shards.
class FrequencyProfile {
 public:
  FrequencyProfile() = default;
  FrequencyProfile(std::uint64_t genetic_total, std::uint64_t nongenetic_total,
                   std::unordered_map<std::string, DescriptorCounts> counts);

  std::uint64_t genetic_total() const { return genetic_total_; }
  std::uint64_t nongenetic_total() const { return nongenetic_total_; }
  std::size_t descriptor_count() const { return counts_.size(); }

  bool contains(std::string_view descriptor) const;
  // Zero counts for unknown descriptors.
  DescriptorCounts counts_of(std::string_view descriptor) const;
  std::uint64_t genetic_count_of(std::string_view d) const { return counts_of(d).genetic; }
  std::uint64_t nongenetic_count_of(std::string_view d) const { return counts_of(d).nongenetic; }

  // Descriptor names in sorted order.
  std::vector<std::string> descriptors() const;
  const std::unordered_map<std::string, DescriptorCounts>& raw() const { return counts_; }

  void add(const Citation& labeled, const ExclusionList& exclusion);
  FrequencyProfile& merge(const FrequencyProfile& other);

  // Same descriptors with the two classes exchanged.
  FrequencyProfile swapped() const;

  friend bool operator==(const FrequencyProfile&, const FrequencyProfile&) = default;

 private:
  std::uint64_t genetic_total_ = 0;
  std::uint64_t nongenetic_total_ = 0;
  std::unordered_map<std::string, DescriptorCounts> counts_;
};

// Observed 2x2 table. Columns are classes (genetic, nongenetic); rows are
// descriptor present / absent.
struct ContingencyTable {
  std::uint64_t o11 = 0;
  std::uint64_t o12 = 0;
  std::uint64_t o21 = 0;
  std::uint64_t o22 = 0;

  std::uint64_t r1() const { return o11 + o12; }
  std::uint64_t r2() const { return o21 + o22; }
  std::uint64_t c1() const { return o11 + o21; }
  std::uint64_t c2() const { return o12 + o22; }
  std::uint64_t n() const { return o11 + o12 + o21 + o22; }

  ContingencyTable columns_swapped() const { return {o12, o11, o22, o21}; }

  friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;
};

struct ExpectedTable {
  double e11 = 0;
  double e12 = 0;
  double e21 = 0;
  double e22 = 0;

  double min() const;
};

// Counts every labeled citation; throws DegenerateError when a class is empty
// and InputError for unlabeled citations. The result does not depend on
// `workers`.
FrequencyProfile build_profile(const std::vector<Citation>& labeled,
                               const ExclusionList& exclusion, std::size_t workers = 1);

// Throws InputError when the descriptor does not occur in either class.
ContingencyTable table_for(const FrequencyProfile& profile, std::string_view descriptor);

// e_ij = r_i * c_j / n. Throws DegenerateError when any margin is zero.
ExpectedTable expected(const ContingencyTable& table);

// Sorted CSV with the class totals in the first line:
//   #totals,<genetic_total>,<nongenetic_total>
//   descriptor,genetic_count,nongenetic_count
void write_profile_csv(std::ostream& out, const FrequencyProfile& profile);
FrequencyProfile read_profile_csv(std::istream& in);

}  // namespace meshscore
