#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace meshscore {

// Genetic is the positive class throughout.
enum class DomainLabel : std::uint8_t { NonGenetic = 0, Genetic = 1 };

std::string_view to_string(DomainLabel label);
// Accepts "genetic"/"nongenetic" (case-insensitive) plus "1"/"0".
std::optional<DomainLabel> parse_label(std::string_view text);

struct Citation {
  std::string id;
  std::string title;
  std::optional<std::string> abstract;
  // Sorted, unique, trimmed.
  std::vector<std::string> descriptors;
  std::optional<DomainLabel> label;

  bool has_descriptor(std::string_view d) const;

  friend bool operator==(const Citation&, const Citation&) = default;
};

// Trims every name, drops empties, sorts and removes duplicates.
void normalize_descriptors(std::vector<std::string>& descriptors);

class ReferenceList {
 public:
  ReferenceList() = default;
  explicit ReferenceList(std::unordered_set<std::string> ids) : ids_(std::move(ids)) {}

  void insert(std::string id) { ids_.insert(std::move(id)); }
  bool contains(std::string_view id) const { return ids_.contains(std::string(id)); }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

 private:
  std::unordered_set<std::string> ids_;
};

class ExclusionList {
 public:
  ExclusionList() = default;
  explicit ExclusionList(const std::vector<std::string>& names);

  // Exact match after trimming surrounding whitespace.
  bool contains(std::string_view descriptor) const;
  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  // Sorted.
  std::vector<std::string> names() const;

 private:
  std::unordered_set<std::string> names_;
};

class FoldAssignment {
 public:
  FoldAssignment(std::size_t k, std::uint64_t seed, std::vector<std::string> ids,
                 std::vector<std::size_t> fold_of_index);

  std::size_t k() const { return k_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return ids_.size(); }

  // Fold of the i-th citation in the order given to split_folds.
  std::size_t fold_at(std::size_t index) const { return fold_of_index_[index]; }
  // Throws InputError for ids that were not part of the split.
  std::size_t fold_of(std::string_view id) const;
  const std::string& id_at(std::size_t index) const { return ids_[index]; }

  // Input indices belonging to each fold, ascending.
  std::vector<std::vector<std::size_t>> members() const;

 private:
  std::size_t k_;
  std::uint64_t seed_;
  std::vector<std::string> ids_;
  std::vector<std::size_t> fold_of_index_;
  std::unordered_map<std::string, std::size_t> index_of_;
};

}  // namespace meshscore
