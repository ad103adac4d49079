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


#ifndef AEDLOC_TESTS_TEST_FIXTURE_H_
#define AEDLOC_TESTS_TEST_FIXTURE_H_

#include <vector>

#include "aedloc/beamform.h"
#include "aedloc/eval.h"
#include "aedloc/joint.h"
#include "aedloc/synth.h"

namespace aedloc::testing {

// Three small sessions on the reference scene; models are trained on the
// first two and session 2 is held out.
struct TrainedFixture {
  SceneConfig scene = ReferenceScene();
  ExperimentConfig config;
  std::vector<SteeringBeamformer> beamformers;
  std::vector<Session> sessions;
  std::vector<RecordingCache> one_source;
  std::vector<RecordingCache> two_source;
  SystemModels models;
  ChannelScores held_one;
  ChannelScores held_two;
};

inline const TrainedFixture& Fixture() {
  static const TrainedFixture fx = [] {
    TrainedFixture f;
    DatasetConfig data;
    data.sessions = 3;
    data.instances_per_class = 2;
    data.speech_instances = 2;
    f.beamformers = DesignBeamformers(f.scene);
    f.sessions = GenerateDataset(f.scene, data, 5);
    for (const auto& s : f.sessions) {
      f.one_source.push_back(PrepareRecording(f.scene, f.beamformers, s.one_source, f.config));
      f.two_source.push_back(PrepareRecording(f.scene, f.beamformers, s.two_source, f.config));
    }
    std::vector<TrainingRecording> train;
    std::vector<std::vector<GroundTruthEvent>> truths;
    for (int n = 0; n < 2; ++n) {
      train.push_back({&f.one_source[n].features, &f.sessions[n].one_source.truth});
      truths.push_back(f.sessions[n].one_source.truth);
    }
    f.models.inventory = TrainInventory(f.scene, train, f.config);
    f.models.priors = EstimatePriors(f.scene, truths, true);
    f.held_one = ScoreChannels(f.models.inventory, f.one_source[2].features);
    f.held_two = ScoreChannels(f.models.inventory, f.two_source[2].features);
    return f;
  }();
  return fx;
}

}  // namespace aedloc::testing

#endif  // AEDLOC_TESTS_TEST_FIXTURE_H_
