#pragma once

#include <cstdint>
#include <vector>

#include "xenakis/rhythm/pattern.hpp"
#include "xenakis/synth/loop.hpp"

namespace xenakis::synth {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::size_t kWavHeaderBytes = 44;

/// Canonical 44-byte RIFF/WAVE header followed by 16-bit little-endian mono
/// PCM. Samples are scaled by 32767 and rounded half away from zero.
///
///   offset  size  field
///        0     4  "RIFF"
///        4     4  36 + data bytes
///        8     4  "WAVE"
///       12     4  "fmt "
///       16     4  16 (PCM fmt chunk size)
///       20     2  1 (PCM)
///       22     2  1 (channels)
///       24     4  sample rate
///       28     4  sample rate * 2 (byte rate)
///       32     2  2 (block align)
///       34     2  16 (bits per sample)
///       36     4  "data"
///       40     4  2 * sample count
Bytes encode_wav(const AudioLoop& loop);

std::int16_t to_pcm16(float sample) noexcept;

inline constexpr int kTicksPerQuarter = 480;
inline constexpr int kTicksPerStep = kTicksPerQuarter / 4;
inline constexpr int kDrumChannel = 9;  // channel 10 on the wire
inline constexpr int kBassChannel = 0;
inline constexpr int kKickKey = 36;
inline constexpr int kSnareKey = 38;
inline constexpr int kHatKey = 42;

/// Standard MIDI file, format 0, one track: tempo meta event, then per step
/// note-ons for drums (channel 10) and bass (channel 1) lasting one step,
/// then end-of-track at N steps.
Bytes encode_midi(const rhythm::RhythmPattern& pattern, double bpm = kDefaultBpm,
                  const rhythm::MappingConfig& mapping = {});

}  // namespace xenakis::synth
