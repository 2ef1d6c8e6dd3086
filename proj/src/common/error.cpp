#include "xenakis/error.hpp"

namespace xenakis {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedDocument: return "malformed_document";
    case ErrorCode::InvalidBoundingBox: return "bad_bbox";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::DegenerateSegment: return "degenerate_segment";
    case ErrorCode::InvalidBinCount: return "bad_bins";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::InvalidArity: return "invalid_arity";
    case ErrorCode::TooFewOnsets: return "too_few_onsets";
    case ErrorCode::MissingFrequency: return "missing_frequency";
    case ErrorCode::InvalidTempo: return "bad_tempo";
    case ErrorCode::NetworkError: return "network_error";
    case ErrorCode::ProviderError: return "provider_error";
    case ErrorCode::RateLimited: return "rate_limited";
    case ErrorCode::CacheCorrupt: return "cache_corrupt";
    case ErrorCode::Io: return "io_error";
  }
  return "unknown";
}

}  // namespace xenakis
