#include "xenakis/synth/voices.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "xenakis/error.hpp"

namespace xenakis::synth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// ln(1000): amplitude falls by 60 dB over one decay time.
constexpr double kLn1000 = 6.907755278982137;
constexpr double kMinAttackS = 0.001;
constexpr double kTailFadeS = 0.002;

double envelope(double t, double attack, double decay) {
  if (attack > 0.0 && t < attack) return t / attack;
  return std::exp(-kLn1000 * (t - attack) / decay);
}

// Correction term that removes the aliasing step of a naive sawtooth.
double poly_blep(double phase, double dt) {
  if (phase < dt) {
    const double x = phase / dt;
    return x + x - x * x - 1.0;
  }
  if (phase > 1.0 - dt) {
    const double x = (phase - 1.0) / dt;
    return x * x + x + x + 1.0;
  }
  return 0.0;
}

class OnePoleHighpass {
 public:
  OnePoleHighpass(double cutoff_hz, int sample_rate) {
    const double rc = 1.0 / (kTwoPi * cutoff_hz);
    const double dt = 1.0 / sample_rate;
    alpha_ = rc / (rc + dt);
  }

  double process(double x) noexcept {
    y_ = alpha_ * (y_ + x - x_);
    x_ = x;
    return y_;
  }

 private:
  double alpha_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
};

}  // namespace

std::string_view to_string(Voice voice) noexcept {
  switch (voice) {
    case Voice::Kick: return "kick";
    case Voice::Snare: return "snare";
    case Voice::Hat: return "hat";
    case Voice::Bass: return "bass";
  }
  return "?";
}

VoiceParams default_params(Voice voice, double step_seconds) {
  VoiceParams p;
  switch (voice) {
    case Voice::Kick:
      p.decay_s = 0.35;
      p.gain = 0.8;
      break;
    case Voice::Snare:
      p.attack_s = kMinAttackS;
      p.decay_s = 0.18;
      p.gain = 0.35;
      p.highpass_hz = 1200.0;
      break;
    case Voice::Hat:
      p.attack_s = kMinAttackS;
      p.decay_s = 0.05;
      p.gain = 0.2;
      p.highpass_hz = 7000.0;
      break;
    case Voice::Bass:
      p.attack_s = 0.005;
      p.decay_s = 0.45;
      p.gain = 0.4;
      break;
  }
  p.decay_s = std::min(p.decay_s, 4.0 * step_seconds);
  return p;
}

std::vector<double> render_voice(Voice voice, const VoiceParams& params,
                                 std::optional<double> freq_hz, double dur_s,
                                 int sample_rate, NoiseSource& noise) {
  if (!(dur_s > 0.0) || sample_rate <= 0)
    throw Error(ErrorCode::InvalidArgument,
                "voice duration and sample rate must be positive");
  if (!(params.decay_s > 0.0))
    throw Error(ErrorCode::InvalidArgument, "voice decay must be positive");
  if (!(params.gain >= 0.0 && params.gain <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "voice gain must lie in [0, 1]");
  if (voice == Voice::Bass && (!freq_hz || !(*freq_hz > 0.0)))
    throw Error(ErrorCode::MissingFrequency, "bass voice needs a frequency");

  const auto n = static_cast<std::size_t>(std::llround(dur_s * sample_rate));
  std::vector<double> out(n, 0.0);
  const double dt = 1.0 / sample_rate;

  switch (voice) {
    case Voice::Kick: {
      double phase = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double f = params.pitch_end_hz + (params.pitch_start_hz - params.pitch_end_hz) *
                                                   std::exp(-t / params.pitch_decay_s);
        out[i] = std::sin(phase) * envelope(t, params.attack_s, params.decay_s);
        phase = std::fmod(phase + kTwoPi * f * dt, kTwoPi);
      }
      break;
    }
    case Voice::Snare:
    case Voice::Hat: {
      OnePoleHighpass hp(params.highpass_hz > 0.0 ? params.highpass_hz : 20.0,
                         sample_rate);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        out[i] = hp.process(noise.next()) * envelope(t, params.attack_s, params.decay_s);
      }
      break;
    }
    case Voice::Bass: {
      const double inc = *freq_hz * dt;
      double phase = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double saw = 2.0 * phase - 1.0 - poly_blep(phase, inc);
        out[i] = saw * envelope(t, params.attack_s, params.decay_s);
        phase += inc;
        if (phase >= 1.0) phase -= 1.0;
      }
      break;
    }
  }

  const auto fade = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::llround(kTailFadeS * sample_rate)));
  for (std::size_t j = 0; j < fade; ++j)
    out[n - 1 - j] *= static_cast<double>(j) / static_cast<double>(fade);

  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::fabs(v));
  const double scale = peak > 1.0 ? params.gain / peak : params.gain;
  for (double& v : out) v *= scale;
  return out;
}

std::vector<double> render_voice(Voice voice, const VoiceParams& params,
                                 std::optional<double> freq_hz, double dur_s,
                                 int sample_rate) {
  NoiseSource noise;
  return render_voice(voice, params, freq_hz, dur_s, sample_rate, noise);
}

}  // namespace xenakis::synth
