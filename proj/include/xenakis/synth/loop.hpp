#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "xenakis/rhythm/pattern.hpp"
#include "xenakis/synth/voices.hpp"

namespace xenakis::synth {

inline constexpr double kDefaultBpm = 120.0;
inline constexpr int kDefaultSampleRate = 44100;
inline constexpr double kMinBpm = 40.0;
inline constexpr double kMaxBpm = 300.0;

struct AudioLoop {
  std::vector<float> samples;  // mono, [-1, 1]
  int sample_rate = kDefaultSampleRate;
  double bpm = kDefaultBpm;
  std::size_t steps = 0;

  double step_seconds() const noexcept;
  double seconds() const noexcept;
};

/// A step is a sixteenth note: 60 / (bpm * 4).
double step_seconds(double bpm) noexcept;

std::size_t loop_sample_count(std::size_t steps, double bpm, int sample_rate);

/// Throws Error(InvalidTempo) outside [40, 300] bpm.
void validate_tempo(double bpm);

/// Mixes every step's voices from its onset sample. Tails running past the
/// end wrap to the start so the loop repeats seamlessly, then the mix is hard
/// limited to [-1, 1]. Noise is seeded per step from `seed`, so identical
/// arguments give identical samples.
AudioLoop render_loop(const rhythm::RhythmPattern& pattern,
                      double bpm = kDefaultBpm,
                      int sample_rate = kDefaultSampleRate,
                      const rhythm::MappingConfig& mapping = {},
                      std::uint32_t seed = NoiseSource::kDefaultSeed);

}  // namespace xenakis::synth
