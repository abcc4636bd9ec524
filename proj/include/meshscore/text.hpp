#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "meshscore/citation.hpp"

namespace meshscore {

// Splits on every ASCII character that is not a letter or digit and
// lowercases ASCII letters. Bytes >= 0x80 stay inside tokens so UTF-8
// sequences are not broken apart.
std::vector<std::string> tokenize(std::string_view text);

using StopwordSet = std::unordered_set<std::string>;

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const StopwordSet& stopwords);

// One word per line, folded to lowercase; blank lines and '#' comments ignored.
StopwordSet read_stopwords(std::istream& in);

class Stemmer {
 public:
  virtual ~Stemmer() = default;
  virtual std::string_view name() const = 0;
  virtual std::string stem(std::string_view token) const = 0;
};

// Longest-match removal from the 294-ending list subject to the context
// conditions, followed by undoubling and the recoding rules. Tokens shorter
// than three characters are returned unchanged.
class LovinsStemmer final : public Stemmer {
 public:
  std::string_view name() const override { return "lovins"; }
  std::string stem(std::string_view token) const override;
};

class IdentityStemmer final : public Stemmer {
 public:
  std::string_view name() const override { return "none"; }
  std::string stem(std::string_view token) const override { return std::string(token); }
};

// "lovins" or "none". Throws UsageError for other names.
std::unique_ptr<Stemmer> make_stemmer(std::string_view name);

enum class FieldSelector { Title, Abstract, TitleAbstract, Descriptors };

std::string_view to_string(FieldSelector field);
std::optional<FieldSelector> parse_field_selector(std::string_view text);

struct PipelineConfig {
  StopwordSet stopwords;
  std::string stemmer = "lovins";
  std::size_t min_df = 2;
  FieldSelector field = FieldSelector::TitleAbstract;
};

class TextPipeline {
 public:
  explicit TextPipeline(PipelineConfig config);

  const PipelineConfig& config() const { return config_; }

  // Bag-of-words tokens for one citation. Descriptor mode takes each full
  // descriptor name as one token, without tokenizing or stemming.
  std::vector<std::string> terms(const Citation& citation) const;

 private:
  PipelineConfig config_;
  std::unique_ptr<Stemmer> stemmer_;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  // terms must be sorted and unique; df aligned with terms.
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint64_t> df, std::uint64_t n_docs);

  std::size_t size() const { return terms_.size(); }
  std::uint64_t document_count() const { return n_docs_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::uint64_t>& document_frequencies() const { return df_; }
  std::optional<std::uint32_t> index_of(const std::string& term) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms_ == b.terms_ && a.df_ == b.df_ && a.n_docs_ == b.n_docs_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint64_t> df_;
  std::uint64_t n_docs_ = 0;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Terms with document frequency >= min_df, indexed in sorted order.
Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& documents,
                            std::size_t min_df, std::size_t workers = 1);

struct DocumentVector {
  std::vector<std::pair<std::uint32_t, double>> entries;  // ascending index
  bool zero = false;  // set by vectorize_tfidf for all-zero vectors

  double norm() const;

  friend bool operator==(const DocumentVector&, const DocumentVector&) = default;
};

// Raw term counts over the vocabulary; out-of-vocabulary terms dropped.
DocumentVector count_vector(const std::vector<std::string>& terms, const Vocabulary& vocabulary);

// tf(t,d) * ln(N / df(t)) with N the vocabulary's document count, then
// scaled to unit Euclidean length.
std::vector<DocumentVector> vectorize_tfidf(const std::vector<std::vector<std::string>>& documents,
                                            const Vocabulary& vocabulary);

// doc_id,term_index,weight
void write_vectors_csv(std::ostream& out, const std::vector<std::string>& ids,
                       const std::vector<DocumentVector>& vectors);

}  // namespace meshscore
