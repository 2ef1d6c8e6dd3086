// Acceptance gate: one line per criterion, non-zero exit if any fails.
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "test_support.hpp"
#include "xenakis/cli.hpp"
#include "xenakis/error.hpp"
#include "xenakis/hash.hpp"
#include "xenakis/ingest/geojson.hpp"
#include "xenakis/orientation/geodesy.hpp"
#include "xenakis/orientation/histogram.hpp"
#include "xenakis/pipeline.hpp"
#include "xenakis/rhythm/euclid.hpp"
#include "xenakis/service/server.hpp"
#include "xenakis/stub_provider.hpp"
#include "xenakis/synth/encode.hpp"
#include "xenakis/synth/loop.hpp"
#include "xenakis/synth/voices.hpp"

using namespace xenakis;
namespace fs = std::filesystem;

namespace {

struct Failed {
  std::string why;
};

void expect(bool ok, const std::string& why) {
  if (!ok) throw Failed{why};
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string grid_text() {
  return ingest::read_text_file(testing::fixture("grid.geojson").string());
}

std::string golden_wav_hash() {
  std::string h = ingest::read_text_file(testing::golden("grid_loop.sha256").string());
  h = h.substr(0, h.find_first_of(" \n"));
  return h;
}

std::string grid_wav() {
  const Analysis a = analyze(grid_text(), SonifyParams{});
  const synth::Bytes wav = synth::encode_wav(synth::render_loop(a.pattern));
  return {wav.begin(), wav.end()};
}

std::string symmetry() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> count(1, 200);
  for (int trial = 0; trial < 1000; ++trial) {
    auto segs = testing::random_segments(rng, static_cast<std::size_t>(count(rng)));
    const auto h = orientation::build_histogram(segs);
    for (std::size_t i = 0; i < 8; ++i)
      expect(h.bins[i] == h.bins[i + 8], "bins differ across the half turn");
    for (auto& s : segs) {
      std::swap(s.a, s.b);
      s.bearing_deg = orientation::fold_bearing(s.bearing_deg + 180.0);
    }
    expect(orientation::build_histogram(segs).bins == h.bins, "reversal changed the histogram");
  }
  const double took = seconds_since(t0);
  expect(took < 10.0, "took " + std::to_string(took) + " s");
  std::ostringstream s;
  s << "1000 sets, " << took << " s";
  return s.str();
}

std::string mass() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> count(0, 300);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto segs = testing::random_segments(rng, static_cast<std::size_t>(count(rng)));
    for (std::size_t n : {4u, 16u, 72u}) {
      const auto h = orientation::build_histogram(segs, n);
      const double lengths = std::accumulate(segs.begin(), segs.end(), 0.0,
                                             [](double a, const auto& s) { return a + s.length_m; });
      const double sum = std::accumulate(h.bins.begin(), h.bins.end(), 0.0);
      if (lengths == 0.0) {
        expect(sum == 0.0, "empty set has mass");
        continue;
      }
      worst = std::max(worst, std::abs(sum - 2.0 * lengths) / (2.0 * lengths));
    }
  }
  expect(worst <= 1e-6, "relative error " + std::to_string(worst));
  std::ostringstream s;
  s << "worst relative error " << worst;
  return s.str();
}

std::string grid_oracle() {
  const Analysis a = analyze(grid_text(), SonifyParams{});
  const auto& b = a.histogram.bins;
  expect(std::abs(b[0] - 1000.0) <= 1.0 && std::abs(b[8] - 1000.0) <= 1.0, "N-S bins off");
  expect(std::abs(b[4] - 500.0) <= 1.0 && std::abs(b[12] - 500.0) <= 1.0, "E-W bins off");
  // values computed by the independent oracle script
  expect(std::abs(b[0] - 1000.0000000903674) < 1e-6, "bin 0 disagrees with the oracle");
  expect(std::abs(b[4] - 499.99999993431805) < 1e-6, "bin 4 disagrees with the oracle");
  for (std::size_t i = 0; i < 16; ++i)
    if (i % 4 != 0) expect(b[i] == 0.0, "stray weight in bin " + std::to_string(i));
  const auto& v = a.normalized.values;
  expect(v[0] == 1.0 && v[8] == 1.0, "normalized peak is not 1");
  expect(std::abs(v[4] - 0.5) < 1e-6 && std::abs(v[12] - 0.5) < 1e-6, "normalized E-W not 0.5");
  expect(a.pattern.text() == "X...H...X...H...", "pattern " + a.pattern.text());
  return "bins 1000/500 m, pattern " + a.pattern.text();
}

std::string euclid() {
  const auto t0 = Clock::now();
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 12; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      const auto p = rhythm::bjorklund(k, n);
      expect(p.onsets.size() == k, "E(" + std::to_string(k) + "," + std::to_string(n) + ") onsets");
      ++checked;
      if (k < 2) continue;
      double best = 0.0;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
        rhythm::OnsetPattern q{n, {}};
        for (std::size_t i = 0; i < n; ++i)
          if (mask & (1u << i)) q.onsets.push_back(i);
        best = std::max(best, rhythm::evenness(q));
      }
      expect(std::abs(rhythm::evenness(p) - best) < 1e-9,
             "E(" + std::to_string(k) + "," + std::to_string(n) + ") not maximally even");
    }
  }
  expect(rhythm::bjorklund(3, 8).text() == "x..x..x.", "E(3,8) is " + rhythm::bjorklund(3, 8).text());
  const double took = seconds_since(t0);
  expect(took < 30.0, "took " + std::to_string(took) + " s");
  std::ostringstream s;
  s << checked << " (k,n) pairs, " << took << " s";
  return s.str();
}

std::string audio() {
  const Analysis a = analyze(grid_text(), SonifyParams{});
  const auto first = synth::render_loop(a.pattern);
  const auto second = synth::render_loop(a.pattern);
  expect(first.samples.size() == 88200, "samples " + std::to_string(first.samples.size()));
  const auto w1 = synth::encode_wav(first), w2 = synth::encode_wav(second);
  expect(w1 == w2, "renders differ");
  expect(w1.size() == 176444, "WAV is " + std::to_string(w1.size()) + " bytes");
  auto le32 = [&](std::size_t at) {
    return w1[at] | (w1[at + 1] << 8) | (w1[at + 2] << 16) | (std::uint32_t(w1[at + 3]) << 24);
  };
  auto le16 = [&](std::size_t at) { return w1[at] | (w1[at + 1] << 8); };
  expect(std::memcmp(w1.data(), "RIFF", 4) == 0 && le32(4) == 176436 &&
             std::memcmp(w1.data() + 8, "WAVEfmt ", 8) == 0 && le32(16) == 16 && le16(20) == 1 &&
             le16(22) == 1 && le32(24) == 44100 && le32(28) == 88200 && le16(32) == 2 &&
             le16(34) == 16 && std::memcmp(w1.data() + 36, "data", 4) == 0 && le32(40) == 176400,
         "header fields wrong");
  const std::string hash = sha256_hex(std::span<const std::uint8_t>(w1));
  expect(hash == golden_wav_hash(), "sha256 " + hash + " does not match the golden file");
  return "176444 bytes, sha256 " + hash.substr(0, 16) + "...";
}

std::string spectrum() {
  synth::VoiceParams p = synth::default_params(synth::Voice::Bass, synth::step_seconds(120));
  p.decay_s = 2.0;
  const auto x = synth::render_voice(synth::Voice::Bass, p, 55.0, 1.0, 44100);
  double best_f = 0.0, best = -1.0;
  for (double f = 20.0; f <= 400.0; f += 0.1) {
    double re = 0.0, im = 0.0;
    const double w = 2.0 * std::numbers::pi * f / 44100.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
      re += x[n] * std::cos(w * static_cast<double>(n));
      im -= x[n] * std::sin(w * static_cast<double>(n));
    }
    if (re * re + im * im > best) {
      best = re * re + im * im;
      best_f = f;
    }
  }
  expect(std::abs(best_f - 55.0) <= 1.0, "peak at " + std::to_string(best_f) + " Hz");

  rhythm::RhythmPattern silence;
  silence.steps.assign(16, rhythm::make_step(rhythm::StepLevel::Rest, 0.0));
  const auto quiet = synth::render_loop(silence);
  double energy = 0.0;
  for (float s : quiet.samples) energy += double(s) * s;
  expect(energy == 0.0, "silence has energy");
  std::ostringstream s;
  s << "bass peak " << best_f << " Hz, silence RMS 0";
  return s.str();
}

std::string service_end_to_end() {
  StubProvider stub(StubProvider::load_files({testing::fixture("grid.geojson").string()}));
  stub.start();
  testing::TempDir cache;
  service::ServiceConfig cfg;
  cfg.provider.endpoint = stub.url();
  cfg.cache_dir = cache.path();
  service::Service svc(cfg);
  httplib::Client client("127.0.0.1", svc.start());
  client.set_read_timeout(30, 0);

  const std::string body = R"({"bbox":[-0.001,-0.001,0.005,0.003]})";
  auto r = client.Post("/v1/sonify", body, "application/json");
  expect(r && r->status == 200, "sonify failed");
  const auto j = nlohmann::json::parse(r->body);
  expect(j["pattern_text"] == "X...H...X...H...", "pattern " + j["pattern_text"].dump());
  auto wav = client.Get(j["loop_url"].get<std::string>());
  expect(wav && wav->status == 200, "loop fetch failed");
  expect(wav->body == grid_wav(), "served WAV differs from the local render");
  expect(sha256_hex(wav->body) == golden_wav_hash(), "served WAV does not match the golden hash");
  const auto renders = svc.render_count();
  auto again = client.Post("/v1/sonify", body, "application/json");
  expect(again && again->status == 200, "repeat failed");
  expect(nlohmann::json::parse(again->body)["loop_id"] == j["loop_id"], "loop_id changed");
  expect(svc.render_count() == renders && renders == 1, "repeat re-rendered");
  svc.stop();
  return "loop " + j["loop_id"].get<std::string>() + ", 1 render for 2 requests";
}

std::string robustness() {
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(testing::fixture("malformed"))) {
    const std::string name = entry.path().filename().string();
    ++files;
    bool typed = false;
    try {
      ingest::parse_feature_collection(ingest::read_text_file(entry.path().string()));
    } catch (const MalformedDocument&) {
      typed = true;
    } catch (const std::exception& e) {
      throw Failed{name + " raised " + e.what()};
    }
    expect(typed, name + " parsed");
    std::ostringstream out, err;
    const int code = cli::run({"xenakis", "histogram", "--input", entry.path().string()}, out, err);
    expect(code == 2, name + " exited " + std::to_string(code));
  }
  expect(files >= 10, "only " + std::to_string(files) + " malformed files");

  testing::TempDir dir;
  std::ostringstream out, err;
  const auto wav = (dir.path() / "empty.wav").string();
  const int code = cli::run({"xenakis", "sonify", "--input",
                             testing::fixture("empty.geojson").string(), "-o", wav},
                            out, err);
  expect(code == 0, "empty input exited " + std::to_string(code));
  const std::string bytes = ingest::read_text_file(wav);
  expect(bytes.size() == 176444 && bytes.substr(44) == std::string(176400, '\0'),
         "empty input is not a silent loop");

  StubProvider stub(std::vector<std::string>{R"({"type":"FeatureCollection","features":[]})"});
  stub.start();
  service::ServiceConfig cfg;
  cfg.provider.endpoint = stub.url();
  cfg.cache_dir = dir.path() / "cache";
  service::Service svc(cfg);
  httplib::Client client("127.0.0.1", svc.start());
  auto r = client.Post("/v1/sonify", R"({"bbox":[10,10,10.01,10.01]})", "application/json");
  expect(r && r->status == 200, "empty region did not return 200");
  expect(nlohmann::json::parse(r->body)["pattern_text"] == "................",
         "empty region is not silent");
  svc.stop();
  return std::to_string(files) + " malformed files rejected with exit 2, empty regions silent";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria{
      {"1 histogram symmetry and reversal", symmetry},
      {"2 mass conservation", mass},
      {"3 grid fixture oracle", grid_oracle},
      {"4 euclidean rhythms", euclid},
      {"5 audio determinism and length", audio},
      {"6 bass spectrum and silence", spectrum},
      {"7 service end to end", service_end_to_end},
      {"8 malformed input and empty regions", robustness},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    std::string detail;
    bool ok = false;
    try {
      detail = check();
      ok = true;
    } catch (const Failed& f) {
      detail = f.why;
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  }
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed")
            << std::endl;
  return failures ? 1 : 0;
}
