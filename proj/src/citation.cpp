#include "meshscore/citation.hpp"

#include <algorithm>
#include <cctype>

#include "meshscore/csv.hpp"
#include "meshscore/error.hpp"

namespace meshscore {

std::string_view to_string(DomainLabel label) {
  return label == DomainLabel::Genetic ? "genetic" : "nongenetic";
}

std::optional<DomainLabel> parse_label(std::string_view text) {
  std::string lower;
  for (char c : csv::trim(text)) {
    lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (lower == "genetic" || lower == "1" || lower == "positive") return DomainLabel::Genetic;
  if (lower == "nongenetic" || lower == "0" || lower == "negative") {
    return DomainLabel::NonGenetic;
  }
  return std::nullopt;
}

bool Citation::has_descriptor(std::string_view d) const {
  return std::binary_search(descriptors.begin(), descriptors.end(), d);
}

void normalize_descriptors(std::vector<std::string>& descriptors) {
  for (auto& d : descriptors) {
    auto t = csv::trim(d);
    if (t.size() != d.size()) d = std::string(t);
  }
  std::erase_if(descriptors, [](const std::string& d) { return d.empty(); });
  std::sort(descriptors.begin(), descriptors.end());
  descriptors.erase(std::unique(descriptors.begin(), descriptors.end()), descriptors.end());
}

ExclusionList::ExclusionList(const std::vector<std::string>& names) {
  for (const auto& n : names) {
    auto t = csv::trim(n);
    if (!t.empty()) names_.emplace(t);
  }
}

bool ExclusionList::contains(std::string_view descriptor) const {
  if (names_.empty()) return false;
  return names_.contains(std::string(csv::trim(descriptor)));
}

std::vector<std::string> ExclusionList::names() const {
  std::vector<std::string> out(names_.begin(), names_.end());
  std::sort(out.begin(), out.end());
  return out;
}

FoldAssignment::FoldAssignment(std::size_t k, std::uint64_t seed, std::vector<std::string> ids,
                               std::vector<std::size_t> fold_of_index)
    : k_(k), seed_(seed), ids_(std::move(ids)), fold_of_index_(std::move(fold_of_index)) {
  index_of_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) index_of_.emplace(ids_[i], i);
}

std::size_t FoldAssignment::fold_of(std::string_view id) const {
  if (auto it = index_of_.find(std::string(id)); it != index_of_.end()) {
    return fold_of_index_[it->second];
  }
  throw InputError("id '" + std::string(id) + "' is not part of the fold assignment");
}

std::vector<std::vector<std::size_t>> FoldAssignment::members() const {
  std::vector<std::vector<std::size_t>> out(k_);
  for (std::size_t i = 0; i < fold_of_index_.size(); ++i) {
    out[fold_of_index_[i]].push_back(i);
  }
  return out;
}

}  // namespace meshscore
