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

#ifndef AEDLOC_SYNTH_H_
#define AEDLOC_SYNTH_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aedloc/scene.h"

namespace aedloc {

// One dry source instance placed at the centroid of `cell`.
struct SourceEvent {
  int class_id = 0;
  int cell = 0;
  double start = 0.0;     // seconds
  double duration = 0.0;  // seconds
  double sample_rate = 0.0;
  std::vector<double> waveform;

  void Validate(const SceneConfig& scene) const;
};

struct GroundTruthEvent {
  int class_id = 0;
  int cell = 0;
  double start = 0.0;
  double end = 0.0;
};

struct MultichannelRecording {
  double sample_rate = 0.0;
  // One entry per microphone, in SceneConfig::ChannelOf order.
  std::vector<std::vector<float>> channels;
  std::vector<GroundTruthEvent> truth;
  double realized_snr_db = 0.0;

  int num_channels() const { return static_cast<int>(channels.size()); }
  long num_samples() const {
    return channels.empty() ? 0 : static_cast<long>(channels[0].size());
  }
  std::vector<double> Channel(int c) const {
    return {channels[c].begin(), channels[c].end()};
  }
};

// Deterministic surrogate waveform for a scene class. Each event class has its
// own spectral band and envelope pattern; speech is tilted wideband noise with
// syllabic modulation; silence is all zeros. Throws DomainError for an
// unknown class.
std::vector<double> SynthClassWaveform(const SceneConfig& scene, int class_id,
                                       double duration, std::uint64_t seed);

struct PropagationOptions {
  int interpolator_taps = 64;
  double min_distance = 0.1;
  // Pressure reflection coefficient of the four walls for first-order image
  // sources; zero keeps the field anechoic.
  double wall_reflection = 0.0;
};

struct PropagatedEvent {
  long first_sample = 0;  // absolute sample index of channels[*][0]
  std::vector<std::vector<double>> channels;
};

PropagatedEvent Propagate(const SourceEvent& event, const SceneConfig& scene,
                          const PropagationOptions& options = {});

struct RenderOptions {
  PropagationOptions propagation;
  // Per-channel SNR target on channel 0; infinity disables noise.
  double snr_db = 18.7;
};

// Sums the propagated events into `duration` seconds of audio and adds white
// noise scaled so the event-active SNR on channel 0 meets the target.
MultichannelRecording Render(const SceneConfig& scene,
                             std::span<const SourceEvent> events,
                             double duration, const RenderOptions& options,
                             std::uint64_t seed);

// Cuts `interferer` to the event's start and length at a seed-chosen offset and
// scales it to the event's dry mean power.
SourceEvent MatchInterferer(const SourceEvent& event,
                            const SourceEvent& interferer, std::uint64_t seed);

// Overlaps an event with an interferer cut to the same start and length and
// scaled to the same dry mean power. The recording extends `tail` seconds past
// the event. Throws DomainError on mismatched sample rates or a too short
// interferer.
MultichannelRecording MixTwoSource(const SourceEvent& event,
                                   const SourceEvent& interferer,
                                   const SceneConfig& scene, double snr_db,
                                   std::uint64_t seed,
                                   const PropagationOptions& propagation = {},
                                   double tail = 0.25);

struct DatasetConfig {
  int sessions = 8;
  int instances_per_class = 3;
  int speech_instances = 3;
  double min_duration = 0.4;
  double max_duration = 0.8;
  double min_gap = 0.4;
  double max_gap = 0.8;
  double snr_one_source_db = 18.7;
  double snr_two_source_db = 17.5;
  // Cell of the fixed speaker; -1 draws a random cell for every instance.
  int speaker_cell = 4;
  // Probability that an event lands in its class's home cells rather than a
  // uniformly drawn cell.
  double home_probability = 0.8;
  // Home cells per event class (in event-class order). Empty: derived.
  std::vector<std::vector<int>> home_cells;
  double speech_pool_seconds = 20.0;
  PropagationOptions propagation;
};

struct Session {
  std::string name;
  MultichannelRecording one_source;
  MultichannelRecording two_source;
};

std::vector<std::vector<int>> DefaultHomeCells(const SceneConfig& scene);

Session GenerateSession(const SceneConfig& scene, const DatasetConfig& config,
                        std::uint64_t seed, int index);

std::vector<Session> GenerateDataset(const SceneConfig& scene,
                                     const DatasetConfig& config,
                                     std::uint64_t seed, int jobs = 1);

// Little-endian float32, one channel after another, no header.
void WriteRawPlanar(const std::string& path, const MultichannelRecording& rec);
MultichannelRecording ReadRawPlanar(const std::string& path, int num_channels,
                                    double sample_rate);

// Interleaved RIFF/WAVE, either 16-bit PCM or 32-bit IEEE float.
void WriteWav(const std::string& path, const MultichannelRecording& rec,
              bool float32 = true);

// One event per line: class label, cell, start s, end s.
void WriteTruth(const std::string& path, const SceneConfig& scene,
                std::span<const GroundTruthEvent> truth);
std::vector<GroundTruthEvent> ReadTruth(const std::string& path,
                                        const SceneConfig& scene);

}  // namespace aedloc

#endif  // AEDLOC_SYNTH_H_
