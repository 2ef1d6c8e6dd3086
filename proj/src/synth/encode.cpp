#include "xenakis/synth/encode.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>
#include <tuple>

namespace xenakis::synth {

namespace {

void put_tag(Bytes& out, std::string_view tag) {
  out.insert(out.end(), tag.begin(), tag.end());
}

void put_le16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_le32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_be16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

void put_be32(Bytes& out, std::uint32_t v) {
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_vlq(Bytes& out, std::uint32_t v) {
  std::uint8_t buf[5];
  int n = 0;
  buf[n++] = v & 0x7f;
  while (v >>= 7) buf[n++] = static_cast<std::uint8_t>((v & 0x7f) | 0x80);
  while (n--) out.push_back(buf[n]);
}

struct MidiEvent {
  std::uint32_t tick;
  int order;  // note-offs sort before note-ons at the same tick
  std::uint8_t status;
  std::uint8_t data1;
  std::uint8_t data2;
};

}  // namespace

std::int16_t to_pcm16(float sample) noexcept {
  const double clamped = std::clamp(static_cast<double>(sample), -1.0, 1.0);
  return static_cast<std::int16_t>(std::lround(clamped * 32767.0));
}

Bytes encode_wav(const AudioLoop& loop) {
  const auto data_bytes = static_cast<std::uint32_t>(loop.samples.size() * 2);
  const auto rate = static_cast<std::uint32_t>(loop.sample_rate);
  Bytes out;
  out.reserve(kWavHeaderBytes + data_bytes);
  put_tag(out, "RIFF");
  put_le32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_le32(out, 16);
  put_le16(out, 1);
  put_le16(out, 1);
  put_le32(out, rate);
  put_le32(out, rate * 2);
  put_le16(out, 2);
  put_le16(out, 16);
  put_tag(out, "data");
  put_le32(out, data_bytes);
  for (float s : loop.samples) put_le16(out, static_cast<std::uint16_t>(to_pcm16(s)));
  return out;
}

Bytes encode_midi(const rhythm::RhythmPattern& pattern, double bpm,
                  const rhythm::MappingConfig& mapping) {
  validate_tempo(bpm);
  const rhythm::RhythmPattern played = rhythm::playback_steps(pattern, mapping.traversal);

  std::vector<MidiEvent> events;
  const std::uint8_t drum_on = 0x90 | kDrumChannel;
  const std::uint8_t drum_off = 0x80 | kDrumChannel;
  const std::uint8_t bass_on = 0x90 | kBassChannel;
  const std::uint8_t bass_off = 0x80 | kBassChannel;

  for (std::size_t i = 0; i < played.steps.size(); ++i) {
    const rhythm::Step& step = played.steps[i];
    if (step.level == rhythm::StepLevel::Rest) continue;
    const auto tick = static_cast<std::uint32_t>(i * kTicksPerStep);
    const auto velocity = static_cast<std::uint8_t>(std::clamp<long>(
        std::lround(127.0 * mapping.level_gain[static_cast<std::size_t>(step.level)]), 1,
        127));
    auto note = [&](std::uint8_t on, std::uint8_t off, int key) {
      const auto k = static_cast<std::uint8_t>(key);
      events.push_back({tick, 1, on, k, velocity});
      events.push_back({tick + kTicksPerStep, 0, off, k, 0});
    };
    if (step.instruments.contains(rhythm::Instrument::Kick)) note(drum_on, drum_off, kKickKey);
    if (step.instruments.contains(rhythm::Instrument::Snare)) note(drum_on, drum_off, kSnareKey);
    if (step.instruments.contains(rhythm::Instrument::Hat)) note(drum_on, drum_off, kHatKey);
    if (step.bass_degree)
      note(bass_on, bass_off,
           mapping.bass_scale_midi[static_cast<std::size_t>(*step.bass_degree)]);
  }
  std::stable_sort(events.begin(), events.end(), [](const MidiEvent& a, const MidiEvent& b) {
    return std::tie(a.tick, a.order) < std::tie(b.tick, b.order);
  });

  Bytes track;
  // Track name.
  constexpr std::string_view kName = "xenakis loop";
  put_vlq(track, 0);
  track.insert(track.end(), {0xff, 0x03, static_cast<std::uint8_t>(kName.size())});
  put_tag(track, kName);
  // Tempo in microseconds per quarter note.
  const auto usec = static_cast<std::uint32_t>(std::lround(60'000'000.0 / bpm));
  put_vlq(track, 0);
  track.insert(track.end(), {0xff, 0x51, 0x03, static_cast<std::uint8_t>(usec >> 16),
                             static_cast<std::uint8_t>(usec >> 8),
                             static_cast<std::uint8_t>(usec)});
  // 4/4, 24 clocks per click, 8 32nds per quarter.
  put_vlq(track, 0);
  track.insert(track.end(), {0xff, 0x58, 0x04, 0x04, 0x02, 0x18, 0x08});

  std::uint32_t now = 0;
  for (const auto& e : events) {
    put_vlq(track, e.tick - now);
    now = e.tick;
    track.insert(track.end(), {e.status, e.data1, e.data2});
  }
  const auto end = static_cast<std::uint32_t>(played.steps.size() * kTicksPerStep);
  put_vlq(track, end > now ? end - now : 0);
  track.insert(track.end(), {0xff, 0x2f, 0x00});

  Bytes out;
  put_tag(out, "MThd");
  put_be32(out, 6);
  put_be16(out, 0);  // format 0
  put_be16(out, 1);  // one track
  put_be16(out, kTicksPerQuarter);
  put_tag(out, "MTrk");
  put_be32(out, static_cast<std::uint32_t>(track.size()));
  out.insert(out.end(), track.begin(), track.end());
  return out;
}

}  // namespace xenakis::synth
