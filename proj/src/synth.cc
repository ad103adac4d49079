// Copyright 2026 The aedloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aedloc/synth.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "aedloc/dsp.h"
#include "aedloc/error.h"
#include "aedloc/util.h"

namespace aedloc {

namespace {

constexpr double kTargetRms = 0.05;
constexpr double kFadeSeconds = 0.01;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gaussian noise confined to [f_lo, f_hi] with power density ~ f^-tilt.
std::vector<double> ShapedNoise(long n, double fs, double f_lo, double f_hi,
                                double tilt, std::mt19937_64& rng) {
  const int size = NextPowerOfTwo(static_cast<int>(std::max(n, 2L)));
  RealFft fft(size);
  std::normal_distribution<double> normal;
  std::vector<std::complex<double>> spec(fft.num_bins());
  for (int b = 1; b < fft.num_bins() - 1; ++b) {
    const double f = b * fs / size;
    const double re = normal(rng);
    const double im = normal(rng);
    if (f < f_lo || f > f_hi) continue;
    const double gain = tilt == 0.0 ? 1.0 : std::pow(f / f_lo, -0.5 * tilt);
    spec[b] = {gain * re, gain * im};
  }
  std::vector<double> out(size);
  fft.Inverse(spec, out);
  out.resize(n);
  return out;
}

std::vector<double> Tones(long n, double fs, double f0, int harmonics,
                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::vector<double> out(n, 0.0);
  for (int h = 1; h <= harmonics; ++h) {
    const double f = f0 * h;
    if (f >= 0.5 * fs) break;
    const double p = phase(rng);
    for (long i = 0; i < n; ++i) {
      out[i] += std::sin(kTwoPi * f * i / fs + p) / h;
    }
  }
  return out;
}

// Decaying bursts at the given times above a floor level.
std::vector<double> BurstEnvelope(long n, double fs,
                                  const std::vector<double>& onsets,
                                  double decay, double floor) {
  std::vector<double> env(n, 0.0);
  for (double t0 : onsets) {
    const long i0 = static_cast<long>(t0 * fs);
    for (long i = std::max(0L, i0); i < n; ++i) {
      const double v = std::exp(-(i - i0) / (decay * fs));
      if (v < 1e-4) break;
      env[i] += v;
    }
  }
  for (double& e : env) e = floor + (1.0 - floor) * std::min(1.0, e);
  return env;
}

void NormalizeAndFade(std::vector<double>& x, double fs) {
  const long n = static_cast<long>(x.size());
  const long fade = std::min(n / 2, static_cast<long>(kFadeSeconds * fs));
  for (long i = 0; i < fade; ++i) {
    const double g = 0.5 - 0.5 * std::cos(std::numbers::pi * i / fade);
    x[i] *= g;
    x[n - 1 - i] *= g;
  }
  const double rms = std::sqrt(MeanPower(x));
  if (rms > 0) {
    for (double& v : x) v *= kTargetRms / rms;
  }
}

std::vector<double> EventTemplate(int event_index, long n, double fs,
                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double seconds = n / fs;
  std::vector<double> carrier;
  std::vector<double> env(n, 1.0);
  switch (event_index) {
    case 0: {  // knock: low band, decaying bursts
      carrier = ShapedNoise(n, fs, 300.0, 1200.0, 0.0, rng);
      std::vector<double> onsets;
      for (double t = 0.0; t < seconds; t += 0.15) {
        onsets.push_back(t + 0.03 * unit(rng));
      }
      env = BurstEnvelope(n, fs, onsets, 0.04, 0.35);
      break;
    }
    case 1: {  // ring: harmonic complex with fast gating
      carrier = Tones(n, fs, 1100.0, 5, rng);
      auto hiss = ShapedNoise(n, fs, 1000.0, 5600.0, 0.0, rng);
      const double hiss_gain =
          0.2 * std::sqrt(MeanPower(carrier) / std::max(MeanPower(hiss), 1e-30));
      for (long i = 0; i < n; ++i) carrier[i] += hiss_gain * hiss[i];
      const double p = kTwoPi * unit(rng);
      for (long i = 0; i < n; ++i) {
        env[i] = 0.75 + 0.25 * std::tanh(4.0 * std::sin(kTwoPi * 20.0 * i / fs + p));
      }
      break;
    }
    case 2: {  // keys: high band, random jingles
      carrier = ShapedNoise(n, fs, 4500.0, 7500.0, 0.0, rng);
      std::exponential_distribution<double> gap(25.0);
      std::vector<double> onsets;
      for (double t = -0.02; t < seconds; t += gap(rng)) onsets.push_back(t);
      env = BurstEnvelope(n, fs, onsets, 0.02, 0.4);
      break;
    }
    case 3: {  // paper: mid band, slow modulation
      carrier = ShapedNoise(n, fs, 1500.0, 3500.0, 0.0, rng);
      const double p = kTwoPi * unit(rng);
      for (long i = 0; i < n; ++i) {
        env[i] = 1.0 + 0.5 * std::sin(kTwoPi * 3.0 * i / fs + p);
      }
      break;
    }
    default: {  // further classes: 800 Hz bands stepped through the spectrum
      const double top = std::min(7000.0, 0.45 * fs);
      const double span = top - 400.0 - 800.0;
      const double lo = 400.0 + std::fmod(1300.0 * (event_index - 4), span);
      carrier = ShapedNoise(n, fs, lo, lo + 800.0, 0.0, rng);
      const double rate = 2.0 + (event_index - 4);
      const double p = kTwoPi * unit(rng);
      for (long i = 0; i < n; ++i) {
        env[i] = 1.0 + 0.4 * std::sin(kTwoPi * rate * i / fs + p);
      }
      break;
    }
  }
  for (long i = 0; i < n; ++i) carrier[i] *= env[i];
  return carrier;
}

std::vector<double> SpeechTemplate(long n, double fs, std::mt19937_64& rng) {
  auto x = ShapedNoise(n, fs, 100.0, std::min(4000.0, 0.45 * fs), 1.0, rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double p = kTwoPi * unit(rng);
  for (long i = 0; i < n; ++i) {
    x[i] *= 0.4 + 0.6 * (0.5 + 0.5 * std::sin(kTwoPi * 4.0 * i / fs + p));
  }
  return x;
}

int EventIndex(const SceneConfig& scene, int class_id) {
  int e = 0;
  for (int c = 0; c < class_id; ++c) {
    if (scene.IsEventClass(c)) ++e;
  }
  return e;
}

void AddPath(const SourceEvent& event, Point2 source, Point2 mic, double gain,
             const SceneConfig& scene, const PropagationOptions& opt,
             long onset, long first, std::vector<double>& out) {
  const double r = Distance(source, mic);
  const double delay = r / scene.speed_of_sound * scene.sample_rate;
  const double g = gain / std::max(r, opt.min_distance);
  AddDelayed(event.waveform, delay + static_cast<double>(onset - first), g,
             opt.interpolator_taps, out);
}

long SampleOf(double seconds, double fs) {
  return std::lround(seconds * fs);
}

}  // namespace

void SourceEvent::Validate(const SceneConfig& scene) const {
  if (!(duration > 0)) throw DomainError("event duration must be positive");
  if (cell < 0 || cell >= scene.num_cells()) {
    throw DomainError("event cell out of range");
  }
  if (class_id < 0 || class_id >= scene.num_classes()) {
    throw DomainError("event class out of range");
  }
  if (sample_rate != scene.sample_rate) {
    throw DomainError("event sample rate differs from the scene");
  }
  if (static_cast<long>(waveform.size()) != SampleOf(duration, sample_rate)) {
    throw DomainError("event waveform length does not match its duration");
  }
  if (start < 0) throw DomainError("event start must be non-negative");
}

std::vector<double> SynthClassWaveform(const SceneConfig& scene, int class_id,
                                       double duration, std::uint64_t seed) {
  if (class_id < 0 || class_id >= scene.num_classes()) {
    throw DomainError("unknown class id " + std::to_string(class_id));
  }
  if (!(duration > 0)) throw DomainError("duration must be positive");
  const double fs = scene.sample_rate;
  const long n = SampleOf(duration, fs);
  if (class_id == scene.silence_class) return std::vector<double>(n, 0.0);
  auto rng = MakeRng(seed, 0x100u + static_cast<unsigned>(class_id));
  std::vector<double> x = class_id == scene.speech_class
                              ? SpeechTemplate(n, fs, rng)
                              : EventTemplate(EventIndex(scene, class_id), n, fs, rng);
  NormalizeAndFade(x, fs);
  return x;
}

PropagatedEvent Propagate(const SourceEvent& event, const SceneConfig& scene,
                          const PropagationOptions& opt) {
  event.Validate(scene);
  const Point2 src = scene.grid.Centroid(event.cell);
  if (src.x < 0 || src.y < 0 || src.x > scene.room_width ||
      src.y > scene.room_height) {
    throw DomainError("event cell centroid lies outside the room");
  }
  std::vector<std::pair<Point2, double>> sources = {{src, 1.0}};
  if (opt.wall_reflection != 0.0) {
    const double w = scene.room_width;
    const double h = scene.room_height;
    const double b = opt.wall_reflection;
    sources.push_back({{-src.x, src.y}, b});
    sources.push_back({{2 * w - src.x, src.y}, b});
    sources.push_back({{src.x, -src.y}, b});
    sources.push_back({{src.x, 2 * h - src.y}, b});
  }
  const auto mics = scene.AllMics();
  double max_delay = 0.0;
  for (const auto& [p, g] : sources) {
    for (const auto& m : mics) {
      max_delay = std::max(max_delay, Distance(p, m) / scene.speed_of_sound *
                                          scene.sample_rate);
    }
  }
  const long half = opt.interpolator_taps / 2;
  const long onset = SampleOf(event.start, event.sample_rate);
  PropagatedEvent out;
  out.first_sample = onset - half;
  const long length = static_cast<long>(event.waveform.size()) +
                      static_cast<long>(std::ceil(max_delay)) + 2 * half + 2;
  out.channels.assign(mics.size(), std::vector<double>(length, 0.0));
  for (size_t m = 0; m < mics.size(); ++m) {
    for (const auto& [p, g] : sources) {
      AddPath(event, p, mics[m], g, scene, opt, onset, out.first_sample,
              out.channels[m]);
    }
  }
  return out;
}

MultichannelRecording Render(const SceneConfig& scene,
                             std::span<const SourceEvent> events,
                             double duration, const RenderOptions& options,
                             std::uint64_t seed) {
  const double fs = scene.sample_rate;
  const long n = SampleOf(duration, fs);
  const int channels = scene.num_channels();
  std::vector<std::vector<double>> mix(channels, std::vector<double>(n, 0.0));
  std::vector<int> active(n, 0);
  MultichannelRecording rec;
  rec.sample_rate = fs;
  for (const auto& ev : events) {
    const long onset = SampleOf(ev.start, fs);
    const long end = onset + static_cast<long>(ev.waveform.size());
    if (end > n) throw DomainError("event extends past the recording");
    for (long i = onset; i < end; ++i) {
      if (++active[i] > scene.max_simultaneous) {
        throw DomainError("more simultaneous events than the scene allows");
      }
    }
    rec.truth.push_back({ev.class_id, ev.cell, ev.start, ev.start + ev.duration});
    const auto prop = Propagate(ev, scene, options.propagation);
    for (int c = 0; c < channels; ++c) {
      const auto& src = prop.channels[c];
      for (long i = 0; i < static_cast<long>(src.size()); ++i) {
        const long t = prop.first_sample + i;
        if (t >= 0 && t < n) mix[c][t] += src[i];
      }
    }
  }
  double signal = 0.0;
  long count = 0;
  for (long i = 0; i < n; ++i) {
    if (active[i] > 0) {
      signal += mix[0][i] * mix[0][i];
      ++count;
    }
  }
  signal = count > 0 ? signal / count : 0.0;
  const bool noisy = std::isfinite(options.snr_db);
  double sigma = 0.0;
  if (noisy) {
    const double reference = signal > 0 ? signal : kTargetRms * kTargetRms / 4.0;
    sigma = std::sqrt(reference / std::pow(10.0, options.snr_db / 10.0));
  }
  auto rng = MakeRng(seed, 0xA0153u);
  std::normal_distribution<double> normal(0.0, 1.0);
  double noise0 = 0.0;
  rec.channels.resize(channels);
  for (int c = 0; c < channels; ++c) {
    rec.channels[c].resize(n);
    for (long i = 0; i < n; ++i) {
      const double v = sigma > 0 ? sigma * normal(rng) : 0.0;
      if (c == 0 && active[i] > 0) noise0 += v * v;
      rec.channels[c][i] = static_cast<float>(mix[c][i] + v);
    }
  }
  if (!noisy) {
    rec.realized_snr_db = std::numeric_limits<double>::infinity();
  } else if (count == 0 || signal == 0) {
    rec.realized_snr_db = -std::numeric_limits<double>::infinity();
  } else {
    rec.realized_snr_db = 10.0 * std::log10(signal / (noise0 / count));
  }
  return rec;
}

SourceEvent MatchInterferer(const SourceEvent& event,
                            const SourceEvent& interferer, std::uint64_t seed) {
  if (event.sample_rate != interferer.sample_rate) {
    throw DomainError("event and interferer sample rates differ");
  }
  const size_t n = event.waveform.size();
  if (interferer.waveform.size() < n) {
    throw DomainError("interferer is shorter than the event");
  }
  auto rng = MakeRng(seed, 0x1F7u);
  std::uniform_int_distribution<size_t> offset_dist(
      0, interferer.waveform.size() - n);
  const size_t offset = offset_dist(rng);
  SourceEvent out = interferer;
  out.start = event.start;
  out.duration = event.duration;
  out.waveform.assign(interferer.waveform.begin() + offset,
                      interferer.waveform.begin() + offset + n);
  NormalizeAndFade(out.waveform, out.sample_rate);
  const double pe = MeanPower(event.waveform);
  const double pi = MeanPower(out.waveform);
  if (pi > 0) {
    const double g = std::sqrt(pe / pi);
    for (double& v : out.waveform) v *= g;
  }
  return out;
}

MultichannelRecording MixTwoSource(const SourceEvent& event,
                                   const SourceEvent& interferer,
                                   const SceneConfig& scene, double snr_db,
                                   std::uint64_t seed,
                                   const PropagationOptions& propagation,
                                   double tail) {
  if (event.sample_rate != scene.sample_rate ||
      interferer.sample_rate != scene.sample_rate) {
    throw DomainError("incompatible sample rates");
  }
  const SourceEvent matched = MatchInterferer(event, interferer, seed);
  const std::vector<SourceEvent> both = {event, matched};
  RenderOptions opt;
  opt.propagation = propagation;
  opt.snr_db = snr_db;
  return Render(scene, both, event.start + event.duration + tail, opt, seed);
}

std::vector<std::vector<int>> DefaultHomeCells(const SceneConfig& scene) {
  int n_events = 0;
  for (int c = 0; c < scene.num_classes(); ++c) n_events += scene.IsEventClass(c);
  const int p = scene.num_cells();
  std::vector<std::vector<int>> homes;
  for (int e = 0; e < n_events; ++e) {
    const int base = (e * p) / n_events + p / (2 * n_events);
    homes.push_back({base % p, (base + 1) % p});
  }
  return homes;
}

Session GenerateSession(const SceneConfig& scene, const DatasetConfig& cfg,
                        std::uint64_t seed, int index) {
  const double fs = scene.sample_rate;
  auto rng = MakeRng(seed, 1000u + static_cast<unsigned>(index));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto homes = cfg.home_cells.empty() ? DefaultHomeCells(scene) : cfg.home_cells;
  const int p = scene.num_cells();
  auto draw_cell = [&](int event_index) {
    for (;;) {
      int cell;
      const auto& home = homes[event_index % homes.size()];
      if (unit(rng) < cfg.home_probability && !home.empty()) {
        cell = home[static_cast<size_t>(unit(rng) * home.size()) % home.size()];
      } else {
        cell = static_cast<int>(unit(rng) * p) % p;
      }
      if (cell != cfg.speaker_cell) return cell;
    }
  };
  auto draw_duration = [&] {
    const double d = cfg.min_duration + (cfg.max_duration - cfg.min_duration) * unit(rng);
    return SampleOf(d, fs) / fs;
  };
  auto draw_gap = [&] { return cfg.min_gap + (cfg.max_gap - cfg.min_gap) * unit(rng); };
  auto speaker_cell = [&](int avoid) {
    if (cfg.speaker_cell >= 0) return cfg.speaker_cell;
    for (;;) {
      const int c = static_cast<int>(unit(rng) * p) % p;
      if (c != avoid) return c;
    }
  };

  std::vector<SourceEvent> events;
  int e = 0;
  for (int c = 0; c < scene.num_classes(); ++c) {
    if (!scene.IsEventClass(c)) continue;
    for (int i = 0; i < cfg.instances_per_class; ++i) {
      SourceEvent ev;
      ev.class_id = c;
      ev.cell = draw_cell(e);
      ev.duration = draw_duration();
      ev.sample_rate = fs;
      ev.waveform = SynthClassWaveform(scene, c, ev.duration, rng());
      events.push_back(std::move(ev));
    }
    ++e;
  }
  const size_t n_ae = events.size();
  for (int i = 0; i < cfg.speech_instances; ++i) {
    SourceEvent ev;
    ev.class_id = scene.speech_class;
    ev.cell = speaker_cell(-1);
    ev.duration = draw_duration();
    ev.sample_rate = fs;
    ev.waveform = SynthClassWaveform(scene, ev.class_id, ev.duration, rng());
    events.push_back(std::move(ev));
  }

  Session session;
  session.name = (index + 1 < 10 ? "S0" : "S") + std::to_string(index + 1);

  // One-source recording: all instances in random order separated by gaps.
  std::vector<size_t> order(events.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<size_t>(unit(rng) * i) % i]);
  }
  std::vector<SourceEvent> one;
  double t = draw_gap();
  for (size_t i : order) {
    SourceEvent ev = events[i];
    ev.start = SampleOf(t, fs) / fs;
    t = ev.start + ev.duration + draw_gap();
    one.push_back(std::move(ev));
  }
  RenderOptions opt;
  opt.propagation = cfg.propagation;
  opt.snr_db = cfg.snr_one_source_db;
  session.one_source = Render(scene, one, t, opt, rng());

  // Two-source recording: every event instance overlapped by a speech segment
  // cut from a longer pool at a random position.
  SourceEvent pool;
  pool.class_id = scene.speech_class;
  pool.sample_rate = fs;
  pool.duration = cfg.speech_pool_seconds;
  pool.waveform = SynthClassWaveform(scene, pool.class_id, pool.duration, rng());
  std::vector<SourceEvent> two;
  t = draw_gap();
  for (size_t i : order) {
    if (i >= n_ae) continue;
    SourceEvent ev = events[i];
    ev.start = SampleOf(t, fs) / fs;
    t = ev.start + ev.duration + draw_gap();
    SourceEvent speech = pool;
    speech.cell = speaker_cell(ev.cell);
    SourceEvent matched = MatchInterferer(ev, speech, rng());
    two.push_back(std::move(ev));
    two.push_back(std::move(matched));
  }
  opt.snr_db = cfg.snr_two_source_db;
  session.two_source = Render(scene, two, t, opt, rng());
  return session;
}

std::vector<Session> GenerateDataset(const SceneConfig& scene,
                                     const DatasetConfig& config,
                                     std::uint64_t seed, int jobs) {
  scene.Validate();
  if (config.sessions < 1) throw DomainError("dataset needs at least one session");
  std::vector<Session> sessions(config.sessions);
  ParallelFor(config.sessions, jobs, [&](int i) {
    sessions[i] = GenerateSession(scene, config, seed, i);
  });
  return sessions;
}

void WriteRawPlanar(const std::string& path, const MultichannelRecording& rec) {
  static_assert(std::endian::native == std::endian::little);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (const auto& ch : rec.channels) {
    out.write(reinterpret_cast<const char*>(ch.data()),
              static_cast<std::streamsize>(ch.size() * sizeof(float)));
  }
}

MultichannelRecording ReadRawPlanar(const std::string& path, int num_channels,
                                    double sample_rate) {
  const std::string bytes = ReadFileBytes(path);
  if (num_channels <= 0 ||
      bytes.size() % (sizeof(float) * static_cast<size_t>(num_channels)) != 0) {
    throw DataError("'" + path + "' does not hold whole float32 frames for " +
                    std::to_string(num_channels) + " channels");
  }
  const size_t n = bytes.size() / sizeof(float) / num_channels;
  MultichannelRecording rec;
  rec.sample_rate = sample_rate;
  rec.channels.assign(num_channels, std::vector<float>(n));
  for (int c = 0; c < num_channels; ++c) {
    std::memcpy(rec.channels[c].data(), bytes.data() + c * n * sizeof(float),
                n * sizeof(float));
  }
  return rec;
}

namespace {
void PutLe(std::ofstream& out, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
}  // namespace

void WriteWav(const std::string& path, const MultichannelRecording& rec,
              bool float32) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  const std::uint32_t channels = rec.num_channels();
  const std::uint32_t frames = static_cast<std::uint32_t>(rec.num_samples());
  const std::uint32_t width = float32 ? 4 : 2;
  const std::uint32_t data_bytes = frames * channels * width;
  const std::uint32_t rate = static_cast<std::uint32_t>(rec.sample_rate);
  out.write("RIFF", 4);
  PutLe(out, 36 + data_bytes, 4);
  out.write("WAVEfmt ", 8);
  PutLe(out, 16, 4);
  PutLe(out, float32 ? 3 : 1, 2);
  PutLe(out, channels, 2);
  PutLe(out, rate, 4);
  PutLe(out, rate * channels * width, 4);
  PutLe(out, channels * width, 2);
  PutLe(out, width * 8, 2);
  out.write("data", 4);
  PutLe(out, data_bytes, 4);
  for (std::uint32_t i = 0; i < frames; ++i) {
    for (std::uint32_t c = 0; c < channels; ++c) {
      const float v = rec.channels[c][i];
      if (float32) {
        PutLe(out, std::bit_cast<std::uint32_t>(v), 4);
      } else {
        const long q = std::lround(std::clamp(v, -1.0f, 1.0f) * 32767.0f);
        PutLe(out, static_cast<std::uint32_t>(static_cast<std::int16_t>(q)) & 0xffff, 2);
      }
    }
  }
}

void WriteTruth(const std::string& path, const SceneConfig& scene,
                std::span<const GroundTruthEvent> truth) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (const auto& t : truth) {
    out << scene.classes.at(t.class_id) << ' ' << t.cell << ' '
        << FormatDouble(t.start) << ' ' << FormatDouble(t.end) << '\n';
  }
}

std::vector<GroundTruthEvent> ReadTruth(const std::string& path,
                                        const SceneConfig& scene) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ground truth '" + path + "'");
  std::vector<GroundTruthEvent> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string label;
    GroundTruthEvent ev;
    if (!(ss >> label >> ev.cell >> ev.start >> ev.end)) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected 'class cell start end'");
    }
    ev.class_id = scene.ClassIndex(label);
    out.push_back(ev);
  }
  return out;
}

}  // namespace aedloc
