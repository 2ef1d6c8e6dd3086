#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace xenakis::synth {

enum class Voice { Kick, Snare, Hat, Bass };

std::string_view to_string(Voice voice) noexcept;

/// Envelope and tone settings for one voice. `decay_s` is the time for the
/// amplitude to fall by 60 dB.
struct VoiceParams {
  double attack_s = 0.0;
  double decay_s = 0.1;
  double gain = 1.0;
  double highpass_hz = 0.0;      // snare, hat
  double pitch_start_hz = 150.0;  // kick sweep
  double pitch_end_hz = 50.0;
  double pitch_decay_s = 0.03;
};

/// Default recipe for a voice with its decay capped at four steps.
VoiceParams default_params(Voice voice, double step_seconds);

/// Reproducible white noise in [-1, 1). Built on std::mt19937, whose output
/// sequence is fixed by the standard, with a hand-written float conversion
/// so the stream does not depend on the library's distributions.
class NoiseSource {
 public:
  static constexpr std::uint32_t kDefaultSeed = 0x58454e41;  // "XENA"

  explicit NoiseSource(std::uint32_t seed = kDefaultSeed) : engine_(seed) {}

  double next() noexcept {
    return static_cast<double>(engine_() >> 8) * (2.0 / 16777216.0) - 1.0;
  }

 private:
  std::mt19937 engine_;
};

/// Renders one hit of `dur` seconds (llround(dur * rate) samples). The last
/// 2 ms fade to zero so truncated tails do not click. Peak is at most 1.
/// Throws Error(MissingFrequency) for a bass without frequency and
/// Error(InvalidArgument) for non-positive duration or rate.
std::vector<double> render_voice(Voice voice, const VoiceParams& params,
                                 std::optional<double> freq_hz, double dur_s,
                                 int sample_rate, NoiseSource& noise);

std::vector<double> render_voice(Voice voice, const VoiceParams& params,
                                 std::optional<double> freq_hz, double dur_s,
                                 int sample_rate);

}  // namespace xenakis::synth
