#include "xenakis/pipeline.hpp"

#include <charconv>
#include <sstream>

#include "xenakis/error.hpp"

namespace xenakis {

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::to_string(v);
}

template <typename Range>
std::string join(const Range& values) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ',';
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>)
      out += shortest(v);
    else
      out += std::to_string(v);
  }
  return out;
}

}  // namespace

void SonifyParams::validate() const {
  orientation::validate_bin_count(bins);
  synth::validate_tempo(bpm);
  if (sample_rate < 8000 || sample_rate > 192000)
    throw Error(ErrorCode::InvalidArgument,
                "sample rate must be within [8000, 192000]");
  mapping.validate();
}

std::string SonifyParams::fingerprint() const {
  std::ostringstream out;
  out << "bins=" << bins << ";bpm=" << shortest(bpm) << ";rate=" << sample_rate
      << ";seed=" << seed << ";weighting="
      << (weighting == orientation::Weighting::Length ? "length" : "count")
      << ";filter=";
  if (filter.accepts_everything())
    out << "*";
  else
    for (const auto& k : filter.kinds()) out << k << '|';
  out << ";thresholds=" << join(mapping.thresholds)
      << ";gains=" << join(mapping.level_gain)
      << ";scale_hz=" << join(mapping.bass_scale_hz)
      << ";scale_midi=" << join(mapping.bass_scale_midi) << ";traversal="
      << (mapping.traversal == rhythm::Traversal::FullCircle ? "full" : "half");
  return out.str();
}

Analysis analyze(std::string_view geojson, const SonifyParams& params) {
  params.validate();
  ingest::ParseResult parsed = ingest::parse_feature_collection(geojson);
  const auto segments = ingest::explode_segments(parsed.features, params.filter);

  Analysis a;
  a.summary = std::move(parsed.summary);
  a.feature_count = parsed.features.size();
  a.segment_count = segments.size();
  a.histogram = orientation::build_histogram(segments, params.bins, params.weighting);
  a.normalized = orientation::normalize(a.histogram);
  a.pattern = rhythm::histogram_to_pattern(a.normalized, params.mapping);
  return a;
}

namespace json_io {

nlohmann::json histogram(const orientation::OrientationHistogram& h,
                         const orientation::NormalizedHistogram& nh) {
  nlohmann::json j;
  j["bin_count"] = h.bin_count();
  j["bin_width_deg"] = h.bin_width_deg();
  j["bins"] = h.bins;
  j["values"] = nh.values;
  j["source_total_m"] = nh.source_total_m;
  return j;
}

std::string histogram_document(const orientation::OrientationHistogram& h,
                               const orientation::NormalizedHistogram& nh) {
  return histogram(h, nh).dump() + "\n";
}

std::string histogram_csv(const orientation::OrientationHistogram& h,
                          const orientation::NormalizedHistogram& nh) {
  std::string out = "bin_index,center_deg,weight_m,normalized\n";
  for (std::size_t i = 0; i < h.bin_count(); ++i) {
    out += std::to_string(i) + "," + shortest(h.center_deg(i)) + "," +
           shortest(h.bins[i]) + "," + shortest(nh.values[i]) + "\n";
  }
  return out;
}

nlohmann::json pattern(const rhythm::RhythmPattern& p) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : p.steps) {
    nlohmann::json step;
    step["level"] = static_cast<int>(s.level);
    step["instruments"] = s.instruments.names();
    step["bass_degree"] = s.bass_degree ? nlohmann::json(*s.bass_degree) : nlohmann::json();
    steps.push_back(std::move(step));
  }
  return {{"bin_count", p.bin_count()}, {"steps", std::move(steps)}};
}

nlohmann::json error(std::string_view code, std::string_view message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

}  // namespace json_io

}  // namespace xenakis
