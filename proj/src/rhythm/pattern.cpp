#include "xenakis/rhythm/pattern.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "xenakis/error.hpp"

namespace xenakis::rhythm {

std::size_t InstrumentSet::size() const noexcept {
  return static_cast<std::size_t>(std::popcount(bits_));
}

std::vector<std::string> InstrumentSet::names() const {
  std::vector<std::string> out;
  if (contains(Instrument::Kick)) out.emplace_back("kick");
  if (contains(Instrument::Snare)) out.emplace_back("snare");
  if (contains(Instrument::Hat)) out.emplace_back("hat");
  return out;
}

void MappingConfig::validate() const {
  double prev = 0.0;
  for (double t : thresholds) {
    if (!(t > prev) || t > 1.0)
      throw Error(ErrorCode::InvalidArgument,
                  "thresholds must be strictly increasing within (0, 1]");
    prev = t;
  }
  for (double g : level_gain)
    if (!(g >= 0.0 && g <= 1.0))
      throw Error(ErrorCode::InvalidArgument, "level gains must lie in [0, 1]");
  for (double f : bass_scale_hz)
    if (!(f > 0.0))
      throw Error(ErrorCode::InvalidArgument, "bass frequencies must be > 0");
  for (int key : bass_scale_midi)
    if (key < 0 || key > 127)
      throw Error(ErrorCode::InvalidArgument, "bass MIDI keys must be 0..127");
}

std::string RhythmPattern::text() const {
  std::string out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(level_char(s.level));
  return out;
}

char level_char(StepLevel level) noexcept {
  switch (level) {
    case StepLevel::Rest: return '.';
    case StepLevel::Light: return 'h';
    case StepLevel::Medium: return 'H';
    case StepLevel::Full: return 'X';
  }
  return '?';
}

StepLevel quantize(double w, const std::array<double, 3>& thresholds) {
  if (!(w >= 0.0 && w <= 1.0))
    throw Error(ErrorCode::OutOfRange,
                "bin value " + std::to_string(w) + " outside [0, 1]");
  if (w < thresholds[0]) return StepLevel::Rest;
  if (w < thresholds[1]) return StepLevel::Light;
  if (w < thresholds[2]) return StepLevel::Medium;
  return StepLevel::Full;
}

Step make_step(StepLevel level, double w) {
  switch (level) {
    case StepLevel::Rest:
      return {};
    case StepLevel::Light:
      return {level, {Instrument::Hat}, std::nullopt};
    case StepLevel::Medium:
      return {level, {Instrument::Hat, Instrument::Snare}, 1};
    case StepLevel::Full: {
      int degree = static_cast<int>(std::floor(w * 4.0));
      return {level,
              {Instrument::Hat, Instrument::Snare, Instrument::Kick},
              std::clamp(degree, 0, 4)};
    }
  }
  return {};
}

RhythmPattern histogram_to_pattern(const orientation::NormalizedHistogram& nh,
                                   const MappingConfig& mapping) {
  mapping.validate();
  RhythmPattern p;
  p.steps.reserve(nh.values.size());
  for (double v : nh.values)
    p.steps.push_back(make_step(quantize(v, mapping.thresholds), v));
  return p;
}

std::size_t pattern_period(const RhythmPattern& pattern) {
  const std::size_t n = pattern.steps.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < n && repeats; ++i)
      repeats = pattern.steps[i] == pattern.steps[i % d];
    if (repeats) return d;
  }
  return n == 0 ? 1 : n;
}

RhythmPattern playback_steps(const RhythmPattern& pattern, Traversal traversal) {
  if (traversal == Traversal::FullCircle) return pattern;
  RhythmPattern half;
  half.steps.assign(pattern.steps.begin(),
                    pattern.steps.begin() + pattern.steps.size() / 2);
  return half;
}

}  // namespace xenakis::rhythm
