#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "xenakis/ingest/segments.hpp"

namespace xenakis::orientation {

inline constexpr std::size_t kDefaultBinCount = 16;

enum class Weighting {
  Length,  // meters of street per bin
  Count,   // one unit per segment
};

/// Circular histogram of street orientations over the full compass. Every
/// contribution is written to bin i and its opposite i + N/2, so the two
/// halves are always exactly equal. Bin 0 is centred on true north.
struct OrientationHistogram {
  std::vector<double> bins;

  std::size_t bin_count() const noexcept { return bins.size(); }
  double bin_width_deg() const noexcept;
  /// Sum of per-segment weights, i.e. half of the bin mass.
  double source_total() const noexcept;
  double center_deg(std::size_t bin) const noexcept;
};

struct NormalizedHistogram {
  std::vector<double> values;  // [0, 1], max is 1 unless all zero
  double source_total_m = 0.0;
};

/// Throws Error(InvalidBinCount) unless bins is even and >= 4.
void validate_bin_count(std::size_t bins);

/// Half-circle bin for a folded bearing.
std::size_t half_bin_index(double folded_bearing_deg, std::size_t bin_count);

OrientationHistogram build_histogram(
    std::span<const ingest::StreetSegment> segments,
    std::size_t bin_count = kDefaultBinCount,
    Weighting weighting = Weighting::Length);

NormalizedHistogram normalize(const OrientationHistogram& histogram);

}  // namespace xenakis::orientation
