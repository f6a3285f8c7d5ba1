#include "nmtdebug/errors.hpp"

namespace nmtdebug {

namespace {

std::string parse_message(std::size_t line, const std::string &record_id, const std::string &reason) {
  std::string msg;
  if (line > 0) msg += "line " + std::to_string(line) + ": ";
  if (!record_id.empty()) msg += "record '" + record_id + "': ";
  return msg + reason;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::string record_id, const std::string &reason)
    : Error(parse_message(line, record_id, reason)), line_(line), record_id_(std::move(record_id)) {}

RecordError::RecordError(std::string record_id, const std::string &reason)
    : Error("record '" + record_id + "': " + reason), record_id_(std::move(record_id)), reason_(reason) {}

IndexVersionError::IndexVersionError(const std::string &found)
    : Error("unsupported index format version '" + found + "'") {}

IndexFormatError::IndexFormatError(std::size_t offset, const std::string &reason)
    : Error("corrupt index at byte " + std::to_string(offset) + ": " + reason), offset_(offset) {}

PairingError::PairingError(std::size_t position, const std::string &reason)
    : Error("position " + std::to_string(position) + ": " + reason), position_(position) {}

}  // namespace nmtdebug
