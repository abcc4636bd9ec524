#include "meshscore/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "meshscore/csv.hpp"
#include "meshscore/error.hpp"
#include "meshscore/parallel.hpp"

namespace meshscore {

namespace {

bool is_token_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_token_byte(c)) {
      cur += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch;
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const StopwordSet& stopwords) {
  if (!stopwords.empty()) {
    std::erase_if(tokens, [&](const std::string& t) { return stopwords.contains(t); });
  }
  return tokens;
}

StopwordSet read_stopwords(std::istream& in) {
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    auto w = csv::trim(line);
    if (w.empty() || w.front() == '#') continue;
    std::string word(w);
    for (auto& ch : word) {
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    }
    words.insert(std::move(word));
  }
  return words;
}

std::unique_ptr<Stemmer> make_stemmer(std::string_view name) {
  if (name == "lovins") return std::make_unique<LovinsStemmer>();
  if (name == "none") return std::make_unique<IdentityStemmer>();
  throw UsageError("unknown stemmer '" + std::string(name) + "' (expected lovins or none)");
}

std::string_view to_string(FieldSelector field) {
  switch (field) {
    case FieldSelector::Title: return "title";
    case FieldSelector::Abstract: return "abstract";
    case FieldSelector::TitleAbstract: return "title+abstract";
    case FieldSelector::Descriptors: return "descriptors";
  }
  return "title+abstract";
}

std::optional<FieldSelector> parse_field_selector(std::string_view text) {
  if (text == "title") return FieldSelector::Title;
  if (text == "abstract") return FieldSelector::Abstract;
  if (text == "title+abstract") return FieldSelector::TitleAbstract;
  if (text == "descriptors" || text == "mesh") return FieldSelector::Descriptors;
  return std::nullopt;
}

TextPipeline::TextPipeline(PipelineConfig config)
    : config_(std::move(config)), stemmer_(make_stemmer(config_.stemmer)) {
  if (config_.min_df < 1) throw UsageError("min_df must be at least 1");
}

std::vector<std::string> TextPipeline::terms(const Citation& c) const {
  if (config_.field == FieldSelector::Descriptors) return c.descriptors;
  std::string text;
  if (config_.field != FieldSelector::Abstract) text = c.title;
  if (config_.field != FieldSelector::Title && c.abstract) {
    text += ' ';
    text += *c.abstract;
  }
  auto tokens = remove_stopwords(tokenize(text), config_.stopwords);
  for (auto& t : tokens) t = stemmer_->stem(t);
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::uint64_t> df,
                       std::uint64_t n_docs)
    : terms_(std::move(terms)), df_(std::move(df)), n_docs_(n_docs) {
  if (terms_.size() != df_.size()) throw InputError("vocabulary terms and df differ in length");
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !(terms_[i - 1] < terms_[i])) {
      throw InputError("vocabulary terms must be sorted and unique");
    }
    index_.emplace(terms_[i], static_cast<std::uint32_t>(i));
  }
}

std::optional<std::uint32_t> Vocabulary::index_of(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& documents,
                            std::size_t min_df, std::size_t workers) {
  if (min_df < 1) throw UsageError("min_df must be at least 1");
  const std::size_t shards = shard_count(documents.size(), workers);
  std::vector<std::unordered_map<std::string, std::uint64_t>> partial(shards);
  for_each_shard(documents.size(), shards, [&](std::size_t s, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto unique = documents[i];
      std::sort(unique.begin(), unique.end());
      unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
      for (auto& t : unique) ++partial[s][t];
    }
  });
  std::map<std::string, std::uint64_t> df;
  for (const auto& p : partial) {
    for (const auto& [t, n] : p) df[t] += n;
  }
  std::vector<std::string> terms;
  std::vector<std::uint64_t> freqs;
  for (auto& [t, n] : df) {
    if (n >= min_df) {
      terms.push_back(t);
      freqs.push_back(n);
    }
  }
  return Vocabulary(std::move(terms), std::move(freqs), documents.size());
}

double DocumentVector::norm() const {
  double sum = 0;
  for (const auto& [i, w] : entries) sum += w * w;
  return std::sqrt(sum);
}

DocumentVector count_vector(const std::vector<std::string>& terms, const Vocabulary& vocabulary) {
  std::map<std::uint32_t, double> counts;
  for (const auto& t : terms) {
    if (auto idx = vocabulary.index_of(t)) counts[*idx] += 1.0;
  }
  DocumentVector v;
  v.entries.assign(counts.begin(), counts.end());
  return v;
}

std::vector<DocumentVector> vectorize_tfidf(const std::vector<std::vector<std::string>>& documents,
                                            const Vocabulary& vocabulary) {
  const double n = static_cast<double>(vocabulary.document_count());
  const auto& df = vocabulary.document_frequencies();
  std::vector<DocumentVector> out;
  out.reserve(documents.size());
  for (const auto& doc : documents) {
    DocumentVector v = count_vector(doc, vocabulary);
    std::vector<std::pair<std::uint32_t, double>> weighted;
    for (const auto& [i, tf] : v.entries) {
      const double w = tf * std::log(n / static_cast<double>(df[i]));
      if (w != 0) weighted.emplace_back(i, w);
    }
    v.entries = std::move(weighted);
    const double norm = v.norm();
    if (norm == 0) {
      v.zero = true;
    } else {
      for (auto& [i, w] : v.entries) w /= norm;
    }
    out.push_back(std::move(v));
  }
  return out;
}

void write_vectors_csv(std::ostream& out, const std::vector<std::string>& ids,
                       const std::vector<DocumentVector>& vectors) {
  if (ids.size() != vectors.size()) throw AlignmentError("vector dump: ids and vectors differ");
  out << "doc_id,term_index,weight\n";
  for (std::size_t d = 0; d < ids.size(); ++d) {
    for (const auto& [i, w] : vectors[d].entries) {
      out << csv::quote(ids[d]) << ',' << i << ',' << csv::format_double(w) << '\n';
    }
  }
}

}  // namespace meshscore
