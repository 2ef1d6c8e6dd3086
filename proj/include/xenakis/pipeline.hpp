#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "xenakis/ingest/geojson.hpp"
#include "xenakis/ingest/segments.hpp"
#include "xenakis/orientation/histogram.hpp"
#include "xenakis/rhythm/pattern.hpp"
#include "xenakis/synth/loop.hpp"

namespace xenakis {

/// Everything that shapes the output for one region, shared by the CLI and
/// the HTTP service.
struct SonifyParams {
  std::size_t bins = orientation::kDefaultBinCount;
  double bpm = synth::kDefaultBpm;
  int sample_rate = synth::kDefaultSampleRate;
  std::uint32_t seed = synth::NoiseSource::kDefaultSeed;
  orientation::Weighting weighting = orientation::Weighting::Length;
  ingest::StreetFilter filter = ingest::StreetFilter::defaults();
  rhythm::MappingConfig mapping;

  /// Checks bin count, tempo, sample rate and mapping.
  void validate() const;
  /// Canonical text of every field, used in content hashes.
  std::string fingerprint() const;
};

struct Analysis {
  ingest::ParseSummary summary;
  std::size_t feature_count = 0;
  std::size_t segment_count = 0;
  orientation::OrientationHistogram histogram;
  orientation::NormalizedHistogram normalized;
  rhythm::RhythmPattern pattern;
};

/// GeoJSON text to compass and pattern. Throws MalformedDocument.
Analysis analyze(std::string_view geojson, const SonifyParams& params);

namespace json_io {

/// {bin_count, bin_width_deg, bins[], values[], source_total_m}
nlohmann::json histogram(const orientation::OrientationHistogram& h,
                         const orientation::NormalizedHistogram& nh);
/// Serialized histogram document as written by the CLI and served by
/// GET /v1/histogram, newline terminated.
std::string histogram_document(const orientation::OrientationHistogram& h,
                               const orientation::NormalizedHistogram& nh);
/// bin_index,center_deg,weight_m,normalized
std::string histogram_csv(const orientation::OrientationHistogram& h,
                          const orientation::NormalizedHistogram& nh);

/// {bin_count, steps:[{level, instruments[], bass_degree|null}]}
nlohmann::json pattern(const rhythm::RhythmPattern& p);

/// {"error": {"code", "message", ...}}
nlohmann::json error(std::string_view code, std::string_view message);

}  // namespace json_io

}  // namespace xenakis
