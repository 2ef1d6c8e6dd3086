#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xenakis/orientation/histogram.hpp"

namespace xenakis::rhythm {

enum class StepLevel : std::uint8_t { Rest = 0, Light = 1, Medium = 2, Full = 3 };

enum class Instrument : std::uint8_t { Kick = 1, Snare = 2, Hat = 4 };

class InstrumentSet {
 public:
  constexpr InstrumentSet() = default;
  constexpr InstrumentSet(std::initializer_list<Instrument> items) {
    for (auto i : items) bits_ |= static_cast<std::uint8_t>(i);
  }

  constexpr bool contains(Instrument i) const noexcept {
    return (bits_ & static_cast<std::uint8_t>(i)) != 0;
  }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  std::size_t size() const noexcept;
  /// Names in kick, snare, hat order.
  std::vector<std::string> names() const;

  friend constexpr bool operator==(InstrumentSet, InstrumentSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

/// Which part of the compass one loop repetition plays.
enum class Traversal {
  FullCircle,  // all N bins, a complete radar revolution
  HalfCircle,  // the N/2 distinct orientations only
};

/// Tunables for the compass to sequencer mapping. Defaults: rest below 0.05,
/// hats from 0.05, snare from 0.35, kick and high bass from 0.70; bass on the
/// A minor pentatonic.
struct MappingConfig {
  std::array<double, 3> thresholds{0.05, 0.35, 0.70};
  std::array<double, 5> bass_scale_hz{55.0, 65.41, 73.42, 82.41, 98.0};
  std::array<int, 5> bass_scale_midi{33, 36, 38, 40, 43};
  /// Mix gain per level, index 0 unused.
  std::array<double, 4> level_gain{0.0, 0.7, 0.85, 1.0};
  Traversal traversal = Traversal::FullCircle;

  /// Throws Error(InvalidArgument) for thresholds that are not strictly
  /// increasing inside (0, 1], or gains outside [0, 1].
  void validate() const;

  friend bool operator==(const MappingConfig&, const MappingConfig&) = default;
};

struct Step {
  StepLevel level = StepLevel::Rest;
  InstrumentSet instruments;
  std::optional<int> bass_degree;  // 0..4

  friend bool operator==(const Step&, const Step&) = default;
};

struct RhythmPattern {
  std::vector<Step> steps;

  std::size_t bin_count() const noexcept { return steps.size(); }
  /// One character per step: '.', 'h', 'H', 'X' for levels 0 to 3.
  std::string text() const;

  friend bool operator==(const RhythmPattern&, const RhythmPattern&) = default;
};

/// Throws Error(OutOfRange) unless 0 <= w <= 1.
StepLevel quantize(double w, const std::array<double, 3>& thresholds =
                                 MappingConfig{}.thresholds);

/// Voices of one step. Level 1 plays the hat; level 2 adds snare and bass
/// degree 1; level 3 adds kick and puts the bass at floor(4w).
Step make_step(StepLevel level, double w);

RhythmPattern histogram_to_pattern(const orientation::NormalizedHistogram& nh,
                                   const MappingConfig& mapping = {});

/// Smallest divisor d of N with steps[i] == steps[i mod d] for all i.
std::size_t pattern_period(const RhythmPattern& pattern);

/// Steps actually played per repetition under the given traversal.
RhythmPattern playback_steps(const RhythmPattern& pattern,
                             Traversal traversal);

char level_char(StepLevel level) noexcept;

}  // namespace xenakis::rhythm
