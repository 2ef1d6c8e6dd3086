#include "xenakis/orientation/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xenakis/error.hpp"

namespace xenakis::orientation {

double OrientationHistogram::bin_width_deg() const noexcept {
  return bins.empty() ? 0.0 : 360.0 / static_cast<double>(bins.size());
}

double OrientationHistogram::source_total() const noexcept {
  // Only the first half: the second is a copy.
  return std::accumulate(bins.begin(), bins.begin() + bins.size() / 2, 0.0);
}

double OrientationHistogram::center_deg(std::size_t bin) const noexcept {
  return static_cast<double>(bin) * bin_width_deg();
}

void validate_bin_count(std::size_t bins) {
  if (bins < 4 || bins % 2 != 0)
    throw Error(ErrorCode::InvalidBinCount,
                "bin count must be even and >= 4, got " + std::to_string(bins));
}

std::size_t half_bin_index(double folded_bearing_deg, std::size_t bin_count) {
  const std::size_t half = bin_count / 2;
  const double width = 180.0 / static_cast<double>(half);
  double shifted = std::fmod(folded_bearing_deg + width / 2.0, 180.0);
  if (shifted < 0.0) shifted += 180.0;
  auto i = static_cast<std::size_t>(std::floor(shifted / width));
  return i >= half ? half - 1 : i;
}

OrientationHistogram build_histogram(
    std::span<const ingest::StreetSegment> segments, std::size_t bin_count,
    Weighting weighting) {
  validate_bin_count(bin_count);
  OrientationHistogram h;
  h.bins.assign(bin_count, 0.0);
  const std::size_t half = bin_count / 2;
  for (const auto& s : segments) {
    const double w = weighting == Weighting::Length ? s.length_m : 1.0;
    const std::size_t i = half_bin_index(s.bearing_deg, bin_count);
    h.bins[i] += w;
    h.bins[i + half] += w;
  }
  return h;
}

NormalizedHistogram normalize(const OrientationHistogram& histogram) {
  NormalizedHistogram nh;
  nh.values.assign(histogram.bins.size(), 0.0);
  nh.source_total_m = histogram.source_total();
  const double peak =
      histogram.bins.empty()
          ? 0.0
          : *std::max_element(histogram.bins.begin(), histogram.bins.end());
  if (peak > 0.0)
    std::transform(histogram.bins.begin(), histogram.bins.end(),
                   nh.values.begin(), [peak](double b) { return b / peak; });
  return nh;
}

}  // namespace xenakis::orientation
