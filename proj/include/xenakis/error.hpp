#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace xenakis {

enum class ErrorCode {
  MalformedDocument,
  InvalidBoundingBox,
  InvalidArgument,
  DegenerateSegment,
  InvalidBinCount,
  OutOfRange,
  InvalidArity,
  TooFewOnsets,
  MissingFrequency,
  InvalidTempo,
  NetworkError,
  ProviderError,
  RateLimited,
  CacheCorrupt,
  Io,
};

/// Stable snake_case identifier used in JSON error bodies and CLI output.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Input text is not a usable GeoJSON document. Line and column are 1-based;
/// both are 0 when the problem is structural rather than lexical.
class MalformedDocument : public Error {
 public:
  MalformedDocument(const std::string& message, std::size_t line,
                    std::size_t column, std::size_t offset)
      : Error(ErrorCode::MalformedDocument, message),
        line_(line),
        column_(column),
        offset_(offset) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::size_t offset_;
};

class ProviderError : public Error {
 public:
  ProviderError(int status, std::string body)
      : Error(ErrorCode::ProviderError,
              "provider returned HTTP " + std::to_string(status)),
        status_(status),
        body_(std::move(body)) {}

  int status() const noexcept { return status_; }
  const std::string& body() const noexcept { return body_; }

 private:
  int status_;
  std::string body_;
};

class RateLimited : public Error {
 public:
  explicit RateLimited(long retry_after_seconds)
      : Error(ErrorCode::RateLimited,
              "provider rate limit, retry after " +
                  std::to_string(retry_after_seconds) + " s"),
        retry_after_(retry_after_seconds) {}

  long retry_after_seconds() const noexcept { return retry_after_; }

 private:
  long retry_after_;
};

}  // namespace xenakis
