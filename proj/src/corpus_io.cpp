#include "meshscore/corpus_io.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "meshscore/csv.hpp"
#include "meshscore/error.hpp"
#include "meshscore/random.hpp"

namespace meshscore {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string line_prefix(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

void report(ErrorMode mode, std::vector<RecordError>& errors, std::size_t line_no,
            const std::string& message) {
  if (mode == ErrorMode::FailFast) {
    throw ParseError(line_prefix(line_no) + message, std::nullopt, line_no);
  }
  errors.push_back({line_no, 0, line_prefix(line_no) + message});
}

Citation citation_from_json(const nlohmann::json& obj) {
  if (!obj.is_object()) throw std::invalid_argument("expected a JSON object");
  auto id_it = obj.find("id");
  if (id_it == obj.end() || id_it->is_null()) throw std::invalid_argument("missing id");
  Citation c;
  if (id_it->is_string()) {
    c.id = id_it->get<std::string>();
  } else if (id_it->is_number_integer()) {
    c.id = id_it->dump();
  } else {
    throw std::invalid_argument("id must be a string");
  }
  if (c.id.empty()) throw std::invalid_argument("missing id");
  if (auto it = obj.find("title"); it != obj.end() && !it->is_null()) {
    c.title = it->get<std::string>();
  }
  if (auto it = obj.find("abstract"); it != obj.end() && !it->is_null()) {
    c.abstract = it->get<std::string>();
  }
  if (auto it = obj.find("descriptors"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) throw std::invalid_argument("descriptors must be an array");
    for (const auto& d : *it) c.descriptors.push_back(d.get<std::string>());
    normalize_descriptors(c.descriptors);
  }
  if (auto it = obj.find("label"); it != obj.end() && !it->is_null()) {
    auto label = parse_label(it->get<std::string>());
    if (!label) throw std::invalid_argument("label must be \"genetic\" or \"nongenetic\"");
    c.label = label;
  }
  return c;
}

}  // namespace

ParseResult parse_jsonl(std::istream& in, ErrorMode mode) {
  ParseResult result;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    Citation c;
    try {
      c = citation_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      report(mode, result.errors, line_no, std::string("invalid JSON (") + e.what() + ")");
      continue;
    } catch (const std::invalid_argument& e) {
      report(mode, result.errors, line_no, e.what());
      continue;
    }
    if (!seen.emplace(c.id, line_no).second) {
      report(mode, result.errors, line_no, "duplicate id '" + c.id + "'");
      continue;
    }
    result.citations.push_back(std::move(c));
  }
  return result;
}

std::string to_jsonl_line(const Citation& c) {
  ordered_json obj;
  obj["id"] = c.id;
  obj["title"] = c.title;
  if (c.abstract) obj["abstract"] = *c.abstract;
  obj["descriptors"] = c.descriptors;
  if (c.label) obj["label"] = std::string(to_string(*c.label));
  return obj.dump();
}

void write_jsonl(std::ostream& out, const std::vector<Citation>& citations) {
  for (const auto& c : citations) out << to_jsonl_line(c) << '\n';
}

ParseResult parse_tsv(std::istream& in, ErrorMode mode) {
  ParseResult result;
  std::unordered_map<std::string, std::size_t> index_of;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (csv::trim(line).empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      report(mode, result.errors, line_no, "expected id<TAB>descriptor");
      continue;
    }
    auto id = std::string(csv::trim(std::string_view(line).substr(0, tab)));
    auto descriptor = csv::trim(std::string_view(line).substr(tab + 1));
    if (id.empty()) {
      report(mode, result.errors, line_no, "missing id");
      continue;
    }
    auto [it, inserted] = index_of.emplace(id, result.citations.size());
    if (inserted) {
      Citation c;
      c.id = id;
      result.citations.push_back(std::move(c));
    }
    if (!descriptor.empty()) {
      result.citations[it->second].descriptors.emplace_back(descriptor);
    }
  }
  for (auto& c : result.citations) normalize_descriptors(c.descriptors);
  return result;
}

ReferenceList read_reference_list(std::istream& in, std::size_t column) {
  ReferenceList ref;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = csv::trim(line);
    if (view.empty() || view.front() == '#') continue;
    std::size_t start = 0;
    for (std::size_t col = 0; col < column; ++col) {
      auto tab = view.find('\t', start);
      if (tab == std::string_view::npos) {
        throw ParseError(line_prefix(line_no) + "reference list has no column " +
                             std::to_string(column),
                         std::nullopt, line_no);
      }
      start = tab + 1;
    }
    auto end = view.find('\t', start);
    auto id = csv::trim(view.substr(start, end == std::string_view::npos ? end : end - start));
    if (!id.empty()) ref.insert(std::string(id));
  }
  return ref;
}

ExclusionList read_exclusion_list(std::istream& in) {
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    auto view = csv::trim(line);
    if (view.empty() || view.front() == '#') continue;
    names.emplace_back(view);
  }
  return ExclusionList(names);
}

std::vector<Citation> label_by_reference(std::vector<Citation> citations,
                                         const ReferenceList& reference) {
  for (auto& c : citations) {
    c.label = reference.contains(c.id) ? DomainLabel::Genetic : DomainLabel::NonGenetic;
  }
  return citations;
}

Citation apply_exclusion(Citation citation, const ExclusionList& exclusion) {
  if (!exclusion.empty()) {
    std::erase_if(citation.descriptors,
                  [&](const std::string& d) { return exclusion.contains(d); });
  }
  return citation;
}

void check_unique_ids(const std::vector<Citation>& citations) {
  std::unordered_map<std::string_view, std::size_t> seen;
  seen.reserve(citations.size());
  for (std::size_t i = 0; i < citations.size(); ++i) {
    if (citations[i].id.empty()) {
      throw InputError("citation " + std::to_string(i) + " has an empty id");
    }
    if (!seen.emplace(citations[i].id, i).second) {
      throw InputError("duplicate citation id '" + citations[i].id + "'");
    }
  }
}

FoldAssignment split_folds(const std::vector<Citation>& citations, std::size_t k,
                           std::uint64_t seed) {
  if (k < 2) throw UsageError("fold count must be at least 2");
  if (k > citations.size()) {
    throw InputError("fold count " + std::to_string(k) + " exceeds citation count " +
                     std::to_string(citations.size()));
  }
  check_unique_ids(citations);

  std::vector<std::size_t> order(citations.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return citations[a].id < citations[b].id; });
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }

  std::vector<std::size_t> fold_of(citations.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) fold_of[order[pos]] = pos % k;

  std::vector<std::string> ids;
  ids.reserve(citations.size());
  for (const auto& c : citations) ids.push_back(c.id);
  return FoldAssignment(k, seed, std::move(ids), std::move(fold_of));
}

}  // namespace meshscore
