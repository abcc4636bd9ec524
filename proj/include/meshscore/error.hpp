#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace meshscore {

// Failure categories. Each maps onto one CLI exit code.
enum class ErrorKind {
  Usage = 1,
  Input = 2,
  Degenerate = 3,
  MissingArtifact = 4,
  Alignment = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

// Malformed input. Carries a byte offset (XML) or a 1-based line (JSONL, TSV).
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::optional<std::size_t> byte_offset,
             std::optional<std::size_t> line)
      : InputError(what), byte_offset_(byte_offset), line_(line) {}

  std::optional<std::size_t> byte_offset() const noexcept { return byte_offset_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  std::optional<std::size_t> byte_offset_;
  std::optional<std::size_t> line_;
};

// Statistic undefined on the data: an empty class, or a zero table margin.
class DegenerateError : public Error {
 public:
  explicit DegenerateError(const std::string& what)
      : Error(ErrorKind::Degenerate, what) {}
};

class MissingArtifactError : public Error {
 public:
  explicit MissingArtifactError(const std::string& what)
      : Error(ErrorKind::MissingArtifact, what) {}
};

class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string& what)
      : Error(ErrorKind::Alignment, what) {}
};

}  // namespace meshscore
