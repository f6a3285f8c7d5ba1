#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nmtdebug {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input in one of the alignment formats. `line` is 1-based; 0 when
/// the error is not tied to a line (e.g. an empty stream).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string record_id, const std::string &reason);

  std::size_t line() const { return line_; }
  const std::string &record_id() const { return record_id_; }

 private:
  std::size_t line_;
  std::string record_id_;
};

/// A record violates a structural invariant (token shape, matrix dimensions).
class RecordError : public Error {
 public:
  RecordError(std::string record_id, const std::string &reason);

  const std::string &record_id() const { return record_id_; }
  const std::string &reason() const { return reason_; }

 private:
  std::string record_id_;
  std::string reason_;
};

class IndexVersionError : public Error {
 public:
  explicit IndexVersionError(const std::string &found);
};

/// Corrupt or truncated index file; `offset` is the byte offset of the
/// offending line.
class IndexFormatError : public Error {
 public:
  IndexFormatError(std::size_t offset, const std::string &reason);

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class PairingError : public Error {
 public:
  PairingError(std::size_t position, const std::string &reason);

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class SortKeyError : public Error {
 public:
  using Error::Error;
};

}  // namespace nmtdebug
