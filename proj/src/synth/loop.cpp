#include "xenakis/synth/loop.hpp"

#include <algorithm>
#include <cmath>

#include "xenakis/error.hpp"
#include "xenakis/orientation/histogram.hpp"

namespace xenakis::synth {

namespace {

// Headroom before the limiter; a full-level step stacks four voices.
constexpr double kMasterGain = 0.7;

std::uint32_t step_seed(std::uint32_t seed, std::size_t step) {
  return seed ^ static_cast<std::uint32_t>(0x9E3779B9u * (step + 1));
}

}  // namespace

double AudioLoop::step_seconds() const noexcept {
  return synth::step_seconds(bpm);
}

double AudioLoop::seconds() const noexcept {
  return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
}

double step_seconds(double bpm) noexcept { return 60.0 / (bpm * 4.0); }

std::size_t loop_sample_count(std::size_t steps, double bpm, int sample_rate) {
  return static_cast<std::size_t>(std::llround(
      static_cast<double>(steps) * step_seconds(bpm) * sample_rate));
}

void validate_tempo(double bpm) {
  if (!(bpm >= kMinBpm && bpm <= kMaxBpm))
    throw Error(ErrorCode::InvalidTempo,
                "bpm must be within [40, 300], got " + std::to_string(bpm));
}

AudioLoop render_loop(const rhythm::RhythmPattern& pattern, double bpm,
                      int sample_rate, const rhythm::MappingConfig& mapping,
                      std::uint32_t seed) {
  validate_tempo(bpm);
  orientation::validate_bin_count(pattern.bin_count());
  mapping.validate();
  if (sample_rate < 8000 || sample_rate > 192000)
    throw Error(ErrorCode::InvalidArgument,
                "sample rate must be within [8000, 192000]");

  const rhythm::RhythmPattern played = rhythm::playback_steps(pattern, mapping.traversal);
  const double step_s = step_seconds(bpm);
  const std::size_t total = loop_sample_count(played.steps.size(), bpm, sample_rate);
  const double voice_dur = 4.0 * step_s;

  std::vector<double> mix(total, 0.0);
  auto add_wrapped = [&](std::size_t onset, const std::vector<double>& buf) {
    for (std::size_t j = 0; j < buf.size(); ++j) mix[(onset + j) % total] += buf[j];
  };

  for (std::size_t i = 0; i < played.steps.size(); ++i) {
    const rhythm::Step& step = played.steps[i];
    if (step.level == rhythm::StepLevel::Rest) continue;
    const auto onset = static_cast<std::size_t>(
        std::llround(static_cast<double>(i) * step_s * sample_rate));
    const double level_gain = mapping.level_gain[static_cast<std::size_t>(step.level)];
    NoiseSource noise(step_seed(seed, i));

    auto play = [&](Voice voice, std::optional<double> freq) {
      VoiceParams params = default_params(voice, step_s);
      params.gain *= level_gain;
      add_wrapped(onset, render_voice(voice, params, freq, voice_dur, sample_rate, noise));
    };
    if (step.instruments.contains(rhythm::Instrument::Kick)) play(Voice::Kick, std::nullopt);
    if (step.instruments.contains(rhythm::Instrument::Snare)) play(Voice::Snare, std::nullopt);
    if (step.instruments.contains(rhythm::Instrument::Hat)) play(Voice::Hat, std::nullopt);
    if (step.bass_degree)
      play(Voice::Bass, mapping.bass_scale_hz[static_cast<std::size_t>(*step.bass_degree)]);
  }

  AudioLoop loop;
  loop.sample_rate = sample_rate;
  loop.bpm = bpm;
  loop.steps = played.steps.size();
  loop.samples.resize(total);
  std::transform(mix.begin(), mix.end(), loop.samples.begin(), [](double v) {
    return static_cast<float>(std::clamp(v * kMasterGain, -1.0, 1.0));
  });
  return loop;
}

}  // namespace xenakis::synth
