#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgfuse {

// Every failure the library reports carries one of these codes. The names are
// part of the HTTP error contract ({code, message}) so they must stay stable.
enum class ErrorCode {
  kMalformedDocument,
  kEmptyPhrase,
  kNoPatternMatch,
  kEmptyCorpus,
  kPatternSyntaxError,
  kNoCodeSnippet,
  kEmptyApiSet,
  kDanglingEdge,
  kIdCollision,
  kUnknownNode,
  kUnknownLabel,
  kCorruptSnapshot,
  kVersionMismatch,
  kUnparsableQuery,
  kEmptyGraph,
  kNoApiFound,
  kMissingPrerequisite,
  kConfigError,
  kIoError,
  kBindError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kgfuse
