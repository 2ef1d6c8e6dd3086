#include "xenakis/cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <pthread.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "xenakis/ingest/provider.hpp"
#include "xenakis/pipeline.hpp"
#include "xenakis/rhythm/euclid.hpp"
#include "xenakis/service/server.hpp"
#include "xenakis/synth/encode.hpp"
#include "xenakis/version.hpp"

namespace xenakis::cli {

ExitCode exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedDocument:
    case ErrorCode::Io:
      return kInput;
    case ErrorCode::NetworkError:
    case ErrorCode::ProviderError:
    case ErrorCode::RateLimited:
    case ErrorCode::CacheCorrupt:
      return kProvider;
    default:
      return kUsage;
  }
}

namespace {

struct SourceOptions {
  std::string input;
  std::string bbox;
  std::string provider;
  std::string cache_dir;
  long ttl_seconds = ingest::kDefaultCacheTtl.count();
};

struct PipelineOptions {
  std::size_t bins = orientation::kDefaultBinCount;
  double bpm = synth::kDefaultBpm;
  int sample_rate = synth::kDefaultSampleRate;
  std::uint32_t seed = synth::NoiseSource::kDefaultSeed;
  std::string filter = "default";
  std::string weighting = "length";
  bool half_circle = false;

  SonifyParams params() const {
    SonifyParams p;
    p.bins = bins;
    p.bpm = bpm;
    p.sample_rate = sample_rate;
    p.seed = seed;
    p.filter = ingest::StreetFilter::parse(filter);
    p.weighting = weighting == "count" ? orientation::Weighting::Count
                                       : orientation::Weighting::Length;
    if (half_circle) p.mapping.traversal = rhythm::Traversal::HalfCircle;
    return p;
  }
};

void add_source_options(CLI::App* cmd, SourceOptions& o) {
  auto* in = cmd->add_option("-i,--input", o.input, "GeoJSON file, - for stdin");
  auto* box = cmd->add_option("--bbox", o.bbox, "min_lon,min_lat,max_lon,max_lat to fetch");
  in->excludes(box);
  cmd->add_option("--provider", o.provider, "provider URL (default $XENAKIS_PROVIDER_URL)");
  cmd->add_option("--cache-dir", o.cache_dir, "region cache (default $XENAKIS_CACHE_DIR)");
  cmd->add_option("--ttl", o.ttl_seconds, "cache TTL in seconds")->check(CLI::NonNegativeNumber);
}

void add_pipeline_options(CLI::App* cmd, PipelineOptions& o, bool audio) {
  cmd->add_option("--bins", o.bins, "compass bins (even, >= 4)")->capture_default_str();
  cmd->add_option("--filter", o.filter, "street kinds: default, all, or a,b,c")
      ->capture_default_str();
  cmd->add_option("--weighting", o.weighting, "length or count")
      ->check(CLI::IsMember({"length", "count"}))
      ->capture_default_str();
  if (!audio) return;
  cmd->add_option("--bpm", o.bpm, "tempo, 40..300")->capture_default_str();
  cmd->add_option("--sample-rate", o.sample_rate, "Hz")->capture_default_str();
  cmd->add_option("--seed", o.seed, "noise seed")->capture_default_str();
  cmd->add_flag("--half", o.half_circle, "play only the N/2 distinct orientations");
}

ingest::ProviderConfig provider_config(const SourceOptions& o) {
  ingest::ProviderConfig c = ingest::ProviderConfig::from_env();
  if (!o.provider.empty()) c.endpoint = o.provider;
  return c;
}

std::string load_source(const SourceOptions& o) {
  if (!o.input.empty()) return ingest::read_text_file(o.input);
  if (o.bbox.empty()) throw Error(ErrorCode::InvalidArgument, "need --input or --bbox");
  const BoundingBox box = parse_bbox(o.bbox);
  ingest::DiskCache cache(o.cache_dir.empty() ? ingest::DiskCache::default_dir()
                                              : std::filesystem::path(o.cache_dir),
                          std::chrono::seconds(o.ttl_seconds));
  return ingest::fetch_region(box, provider_config(o), cache);
}

void write_file(const std::string& path, const synth::Bytes& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path);
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path);
}

void report(std::ostream& err, bool as_json, std::string_view code, const std::string& message,
            int exit_code) {
  if (as_json) {
    nlohmann::json j = json_io::error(code, message);
    j["error"]["exit_code"] = exit_code;
    err << j.dump() << "\n";
  } else {
    err << "xenakis: " << message << "\n";
  }
}

int serve(const service::ServiceConfig& config, const std::string& host, int port,
          std::ostream& err) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  service::Service svc(config);
  const int bound = svc.start(host, port);
  err << "xenakis " << kVersion << " listening on http://" << host << ":" << bound
      << " (provider " << config.provider.endpoint << ")\n";
  err.flush();
  int sig = 0;
  sigwait(&signals, &sig);
  svc.stop();
  pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Turns a city's street orientations into a drum and bass loop.", "xenakis"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  bool json_errors = false;
  app.add_flag("--json-errors", json_errors, "machine-readable errors on stderr");

  SourceOptions hist_src;
  PipelineOptions hist_opts;
  std::string format = "json";
  auto* histogram = app.add_subcommand("histogram", "print the orientation histogram");
  add_source_options(histogram, hist_src);
  add_pipeline_options(histogram, hist_opts, false);
  histogram->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  SourceOptions son_src;
  PipelineOptions son_opts;
  std::string wav_path, midi_path, pattern_path;
  auto* sonify = app.add_subcommand("sonify", "render the region as a WAV loop");
  add_source_options(sonify, son_src);
  add_pipeline_options(sonify, son_opts, true);
  sonify->add_option("-o,--out", wav_path, "WAV output")->required();
  sonify->add_option("--midi", midi_path, "also write a MIDI file");
  sonify->add_option("--pattern", pattern_path, "write the pattern text, - for stdout");

  std::size_t k = 0, n = 0;
  bool show_evenness = false;
  auto* euclid = app.add_subcommand("euclid", "print the Euclidean rhythm E(k,n)");
  euclid->add_option("k", k, "onsets")->required();
  euclid->add_option("n", n, "steps")->required();
  euclid->add_flag("--evenness", show_evenness, "also print the evenness score");

  SourceOptions fetch_src;
  std::string fetch_out;
  auto* fetch = app.add_subcommand("fetch", "download street GeoJSON for a box");
  fetch->add_option("--bbox", fetch_src.bbox, "min_lon,min_lat,max_lon,max_lat")->required();
  fetch->add_option("--provider", fetch_src.provider, "provider URL");
  fetch->add_option("--cache-dir", fetch_src.cache_dir, "region cache directory");
  fetch->add_option("--ttl", fetch_src.ttl_seconds, "cache TTL in seconds");
  fetch->add_option("-o,--out", fetch_out, "output file, - for stdout")->required();

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string serve_provider, serve_cache;
  std::size_t loop_capacity = 0;
  std::vector<std::string> cors;
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  serve_cmd->add_option("--host", host)->capture_default_str();
  serve_cmd->add_option("--port", port)->capture_default_str();
  serve_cmd->add_option("--provider", serve_provider, "provider URL");
  serve_cmd->add_option("--cache-dir", serve_cache, "region cache directory");
  serve_cmd->add_option("--loop-capacity", loop_capacity, "rendered loops kept in memory");
  serve_cmd->add_option("--cors-origin", cors, "allowed origin (repeatable), * for any");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    report(err, json_errors, "usage", e.what(), kUsage);
    if (!json_errors) err << "run 'xenakis --help' for usage\n";
    return kUsage;
  }

  try {
    if (*histogram) {
      const SonifyParams params = hist_opts.params();
      params.validate();
      const Analysis a = analyze(load_source(hist_src), params);
      out << (format == "csv" ? json_io::histogram_csv(a.histogram, a.normalized)
                              : json_io::histogram_document(a.histogram, a.normalized));
    } else if (*sonify) {
      const SonifyParams params = son_opts.params();
      params.validate();
      const Analysis a = analyze(load_source(son_src), params);
      const synth::AudioLoop loop = synth::render_loop(a.pattern, params.bpm, params.sample_rate,
                                                       params.mapping, params.seed);
      write_file(wav_path, synth::encode_wav(loop));
      if (!midi_path.empty())
        write_file(midi_path, synth::encode_midi(a.pattern, params.bpm, params.mapping));
      if (!pattern_path.empty()) write_text(pattern_path, a.pattern.text() + "\n", out);
      err << "wrote " << wav_path << ": " << loop.samples.size() << " samples, "
          << loop.seconds() << " s, pattern " << a.pattern.text() << "\n";
    } else if (*euclid) {
      const rhythm::OnsetPattern p = rhythm::bjorklund(k, n);
      out << p.text() << "\n";
      if (show_evenness) out << "evenness " << rhythm::evenness(p) << "\n";
    } else if (*fetch) {
      write_text(fetch_out, load_source(fetch_src), out);
    } else if (*serve_cmd) {
      service::ServiceConfig config = service::ServiceConfig::from_env();
      if (!serve_provider.empty()) config.provider.endpoint = serve_provider;
      if (!serve_cache.empty()) config.cache_dir = serve_cache;
      if (loop_capacity > 0) config.loop_capacity = loop_capacity;
      if (!cors.empty()) config.cors_origins = cors;
      return serve(config, host, port, err);
    }
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    report(err, json_errors, to_string(e.code()), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    report(err, json_errors, "internal", e.what(), kInput);
    return kInput;
  }
  return kOk;
}

}  // namespace xenakis::cli
