#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "meshscore/citation.hpp"

namespace meshscore {

enum class ErrorMode { FailFast, SkipAndReport };

struct RecordError {
  std::size_t record;        // 0-based record index (XML) or 1-based line (JSONL/TSV)
  std::size_t byte_offset;   // start of the offending record, 0 when unknown
  std::string message;
};

struct ParseResult {
  std::vector<Citation> citations;
  std::vector<RecordError> errors;
};

// Streaming reader over MedlineCitation records (optionally wrapped in
// PubmedArticleSet / MedlineCitationSet). Reads the PMID, ArticleTitle,
// AbstractText and MeshHeading/DescriptorName elements; qualifiers and
// supplementary concepts are ignored. Malformed XML always throws ParseError
// carrying the byte offset; a record without a PMID throws or is reported
// depending on mode.
void for_each_medline_citation(std::istream& in, ErrorMode mode,
                               const std::function<void(Citation&&)>& sink,
                               std::vector<RecordError>& errors);
ParseResult parse_medline_xml(std::istream& in, ErrorMode mode = ErrorMode::FailFast);

// One JSON object per line: id, title, abstract, descriptors, label.
ParseResult parse_jsonl(std::istream& in, ErrorMode mode = ErrorMode::FailFast);
void write_jsonl(std::ostream& out, const std::vector<Citation>& citations);
std::string to_jsonl_line(const Citation& citation);

// Relational form: id<TAB>descriptor, one row per pair. Citations appear in
// order of first occurrence.
ParseResult parse_tsv(std::istream& in, ErrorMode mode = ErrorMode::FailFast);

// One id per line. `column` selects a tab-separated column (0-based), which
// allows reading gene2pubmed directly (PubMed_ID is column 2). Lines starting
// with '#' are skipped.
ReferenceList read_reference_list(std::istream& in, std::size_t column = 0);
ExclusionList read_exclusion_list(std::istream& in);

std::vector<Citation> label_by_reference(std::vector<Citation> citations,
                                         const ReferenceList& reference);

Citation apply_exclusion(Citation citation, const ExclusionList& exclusion);

// Sorts ids, applies a seeded Fisher-Yates permutation and deals citations
// round-robin into k folds, so fold sizes differ by at most one and the
// assignment does not depend on input order.
FoldAssignment split_folds(const std::vector<Citation>& citations, std::size_t k,
                           std::uint64_t seed);

// Throws InputError on a repeated id.
void check_unique_ids(const std::vector<Citation>& citations);

}  // namespace meshscore
