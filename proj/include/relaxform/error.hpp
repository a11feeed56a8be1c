#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relaxform {

enum class ErrorCode {
  ParseError,
  SchemaInvalid,
  UnknownColumn,
  MissingTimestamp,
  EmptyDataset,
  InvalidArgument,
  LayoutMismatch,
  EmptyData,
  JointTooLarge,
  TargetConstant,
  SchemaMismatch,
  UnknownTarget,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above so
// the CLI and the HTTP layer can map it to an exit status or response code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace relaxform
