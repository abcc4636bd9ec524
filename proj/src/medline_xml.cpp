#include <exception>
#include <functional>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include <expat.h>

#include "meshscore/corpus_io.hpp"
#include "meshscore/csv.hpp"
#include "meshscore/error.hpp"

namespace meshscore {

namespace {

enum class Capture { None, Pmid, Title, Abstract, Descriptor };

// Holds the state of the record being assembled. Only element names on the
// current path are kept, so memory stays bounded by one record.
class MedlineHandler {
 public:
  MedlineHandler(XML_Parser parser, ErrorMode mode, const std::function<void(Citation&&)>& sink,
                 std::vector<RecordError>& errors)
      : parser_(parser), mode_(mode), sink_(sink), errors_(errors) {}

  void start(std::string_view name) {
    path_.emplace_back(name);
    if (name == "MedlineCitation") {
      in_record_ = true;
      record_depth_ = path_.size();
      record_offset_ = static_cast<std::size_t>(XML_GetCurrentByteIndex(parser_));
      current_ = Citation{};
      abstract_parts_.clear();
      has_id_ = false;
      return;
    }
    if (!in_record_ || capture_ != Capture::None) return;
    const std::size_t rel = path_.size() - record_depth_;
    if (rel == 1 && name == "PMID" && !has_id_) {
      begin_capture(Capture::Pmid);
    } else if (rel == 2 && name == "ArticleTitle" && parent_is("Article")) {
      begin_capture(Capture::Title);
    } else if (rel == 3 && name == "AbstractText" && parent_is("Abstract") &&
               ancestor_is(2, "Article")) {
      begin_capture(Capture::Abstract);
    } else if (name == "DescriptorName" && parent_is("MeshHeading")) {
      begin_capture(Capture::Descriptor);
    }
  }

  void end() {
    if (capture_ != Capture::None && path_.size() == capture_depth_) finish_capture();
    if (in_record_ && path_.size() == record_depth_) finish_record();
    path_.pop_back();
  }

  void text(std::string_view data) {
    if (capture_ != Capture::None) text_.append(data);
  }

  std::exception_ptr failure;

 private:
  bool parent_is(std::string_view name) const {
    return path_.size() >= 2 && path_[path_.size() - 2] == name;
  }
  bool ancestor_is(std::size_t up, std::string_view name) const {
    return path_.size() > up && path_[path_.size() - 1 - up] == name;
  }

  void begin_capture(Capture what) {
    capture_ = what;
    capture_depth_ = path_.size();
    text_.clear();
  }

  void finish_capture() {
    auto value = std::string(csv::trim(text_));
    switch (capture_) {
      case Capture::Pmid:
        if (!value.empty()) {
          current_.id = std::move(value);
          has_id_ = true;
        }
        break;
      case Capture::Title:
        current_.title = std::move(value);
        break;
      case Capture::Abstract:
        if (!value.empty()) abstract_parts_.push_back(std::move(value));
        break;
      case Capture::Descriptor:
        current_.descriptors.push_back(std::move(value));
        break;
      case Capture::None:
        break;
    }
    capture_ = Capture::None;
  }

  void finish_record() {
    in_record_ = false;
    const std::size_t index = record_index_++;
    if (!has_id_) {
      std::string message = "record " + std::to_string(index) + " at byte " +
                            std::to_string(record_offset_) + ": missing PMID";
      if (mode_ == ErrorMode::FailFast) {
        throw ParseError(message, record_offset_, std::nullopt);
      }
      errors_.push_back({index, record_offset_, std::move(message)});
      return;
    }
    if (!seen_.insert(current_.id).second) {
      std::string message = "record " + std::to_string(index) + " at byte " +
                            std::to_string(record_offset_) + ": duplicate PMID '" +
                            current_.id + "'";
      if (mode_ == ErrorMode::FailFast) {
        throw ParseError(message, record_offset_, std::nullopt);
      }
      errors_.push_back({index, record_offset_, std::move(message)});
      return;
    }
    if (!abstract_parts_.empty()) {
      std::string joined;
      for (std::size_t i = 0; i < abstract_parts_.size(); ++i) {
        if (i > 0) joined += ' ';
        joined += abstract_parts_[i];
      }
      current_.abstract = std::move(joined);
    }
    normalize_descriptors(current_.descriptors);
    sink_(std::move(current_));
  }

  XML_Parser parser_;
  ErrorMode mode_;
  const std::function<void(Citation&&)>& sink_;
  std::vector<RecordError>& errors_;

  std::vector<std::string> path_;
  bool in_record_ = false;
  std::size_t record_depth_ = 0;
  std::size_t record_offset_ = 0;
  std::size_t record_index_ = 0;
  Capture capture_ = Capture::None;
  std::size_t capture_depth_ = 0;
  std::string text_;
  Citation current_;
  bool has_id_ = false;
  std::vector<std::string> abstract_parts_;
  std::unordered_set<std::string> seen_;
};

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char**) {
  auto* h = static_cast<MedlineHandler*>(data);
  if (h->failure) return;
  try {
    h->start(name);
  } catch (...) {
    h->failure = std::current_exception();
  }
}

void XMLCALL on_end(void* data, const XML_Char*) {
  auto* h = static_cast<MedlineHandler*>(data);
  if (h->failure) return;
  try {
    h->end();
  } catch (...) {
    h->failure = std::current_exception();
  }
}

void XMLCALL on_text(void* data, const XML_Char* s, int len) {
  auto* h = static_cast<MedlineHandler*>(data);
  if (h->failure) return;
  h->text(std::string_view(s, static_cast<std::size_t>(len)));
}

struct ParserDeleter {
  void operator()(XML_ParserStruct* p) const { XML_ParserFree(p); }
};

}  // namespace

void for_each_medline_citation(std::istream& in, ErrorMode mode,
                               const std::function<void(Citation&&)>& sink,
                               std::vector<RecordError>& errors) {
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
  if (!parser) throw std::bad_alloc();
  MedlineHandler handler(parser.get(), mode, sink, errors);
  XML_SetUserData(parser.get(), &handler);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);

  constexpr std::size_t kChunk = 1 << 16;
  std::vector<char> buffer(kChunk);
  bool done = false;
  while (!done) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    const auto got = static_cast<int>(in.gcount());
    done = got == 0 || in.eof();
    if (XML_Parse(parser.get(), buffer.data(), got, done ? 1 : 0) == XML_STATUS_ERROR) {
      if (handler.failure) std::rethrow_exception(handler.failure);
      const auto offset = static_cast<std::size_t>(XML_GetCurrentByteIndex(parser.get()));
      throw ParseError("malformed XML at byte " + std::to_string(offset) + " (line " +
                           std::to_string(XML_GetCurrentLineNumber(parser.get())) +
                           "): " + XML_ErrorString(XML_GetErrorCode(parser.get())),
                       offset, static_cast<std::size_t>(XML_GetCurrentLineNumber(parser.get())));
    }
    if (handler.failure) std::rethrow_exception(handler.failure);
  }
}

ParseResult parse_medline_xml(std::istream& in, ErrorMode mode) {
  ParseResult result;
  for_each_medline_citation(
      in, mode, [&](Citation&& c) { result.citations.push_back(std::move(c)); }, result.errors);
  return result;
}

}  // namespace meshscore
