// Copyright 2026 The DePra Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEPRA_SYNTH_H_
#define DEPRA_SYNTH_H_

// Synthetic raters for tests and desk-scale runs. Output is a pure
// function of the options and seed (on a given standard library, since
// std::normal_distribution is implementation-defined).

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "depra/deployment.h"
#include "depra/model.h"

namespace depra {

struct PopulationMix {
  double averse = 0.46;
  double neutral = 0.40;
  double seeking = 0.14;
};

// Throws kBadMix unless every fraction is in [0, 1] and they sum to 1
// within 1e-9.
void ValidateMix(const PopulationMix& mix);

// Largest-remainder apportionment of `n` raters; ties in the remainder go
// to the earlier class (averse, neutral, seeking).
std::array<std::size_t, 3> ClassCounts(std::size_t n, const PopulationMix& mix);

struct SynthOptions {
  std::size_t raters = 197;
  PopulationMix mix;
  std::uint64_t seed = 1;
  // Latent score = controller base + item effect + class bias + noise,
  // rounded and clamped to -2..+2.
  double first_party_base = 0.6;
  double third_party_base = -0.9;
  double item_effect_sd = 0.4;
  double averse_bias = -0.9;
  double neutral_bias = 0.0;
  double seeking_bias = 0.6;
  double noise_sd = 0.8;
  // Share of behaviors each rater answers; below 1 a random subset.
  double completion = 1.0;
  std::int64_t start_time_ms = 1700000000000;
};

struct Population {
  std::vector<RaterProfile> profiles;  // rater order
  std::vector<Rating> ratings;         // rater order, then behavior order
};

// Throws kBadMix, or kInvalidArgument for an empty behavior set.
Population GeneratePopulation(const SynthOptions& options,
                              std::span<const DataAccessBehavior> behaviors);

// Per-behavior latent offsets shared by the user and expert generators so
// the two groups agree on which items are worse.
std::vector<double> ItemEffects(std::span<const DataAccessBehavior> behaviors,
                                std::uint64_t seed, double sd);

struct ExpertOptions {
  std::size_t experts = 5;
  std::uint64_t seed = 7;
  double first_party_base = -0.3;
  double third_party_base = -1.8;
  double item_effect_sd = 0.4;  // must match the user generator to correlate
  std::uint64_t item_seed = 1;  // SynthOptions::seed of the user population
  double noise_sd = 0.45;
};

std::vector<Rating> GenerateExpertRatings(
    const ExpertOptions& options,
    std::span<const DataAccessBehavior> behaviors);

// Service event-log lines for the population: per rater a session, one
// ratings batch and a survey submission.
std::vector<nlohmann::json> PopulationEvents(const Population& population,
                                             std::int64_t at_ms);

void WriteEventLines(const std::filesystem::path& path,
                     std::span<const nlohmann::json> events);

// Six categories, thirteen apps and seventy-eight verified behaviors (six
// per app, half first-party).
Deployment MakeStudyFixture();

}  // namespace depra

#endif  // DEPRA_SYNTH_H_
