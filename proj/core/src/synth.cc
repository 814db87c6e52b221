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

#include "depra/synth.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "depra/calibration.h"
#include "depra/error.h"
#include "depra/explanation.h"
#include "depra/io.h"
#include "depra/store.h"

namespace depra {
namespace {

int ToScore(double latent) {
  return std::clamp(static_cast<int>(std::lround(latent)), kMinScore,
                    kMaxScore);
}

// k = number of B answers; see ClassifyRisk.
std::vector<RiskAnswer> SurveyAnswersFor(RiskClass cls, std::mt19937_64& rng) {
  std::size_t k = 2;
  if (cls == RiskClass::kAverse) k = rng() % 2;       // 0 or 1
  if (cls == RiskClass::kSeeking) k = 3 + rng() % 2;  // 3 or 4
  std::vector<RiskAnswer> answers(kRiskSurveyItems, RiskAnswer::kA);
  std::fill(answers.begin(), answers.begin() + k, RiskAnswer::kB);
  std::shuffle(answers.begin(), answers.end(), rng);
  return answers;
}

std::string PaddedId(std::string_view prefix, std::size_t i, std::size_t n) {
  std::string digits = std::to_string(i);
  const std::size_t width = std::to_string(n).size();
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return std::string(prefix) + digits;
}

}  // namespace

void ValidateMix(const PopulationMix& mix) {
  for (double f : {mix.averse, mix.neutral, mix.seeking}) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw Error(ErrorCode::kBadMix, "mix fractions must lie in [0, 1]");
    }
  }
  if (std::fabs(mix.averse + mix.neutral + mix.seeking - 1.0) > 1e-9) {
    throw Error(ErrorCode::kBadMix, "mix fractions must sum to 1");
  }
}

std::array<std::size_t, 3> ClassCounts(std::size_t n,
                                       const PopulationMix& mix) {
  ValidateMix(mix);
  const std::array<double, 3> f = {mix.averse, mix.neutral, mix.seeking};
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double exact = f[i] * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) {
    ++counts[order[i % 3]];
  }
  return counts;
}

std::vector<double> ItemEffects(std::span<const DataAccessBehavior> behaviors,
                                std::uint64_t seed, double sd) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> effect(0.0, sd);
  std::vector<double> out;
  out.reserve(behaviors.size());
  for (std::size_t i = 0; i < behaviors.size(); ++i) {
    out.push_back(sd > 0.0 ? effect(rng) : 0.0);
  }
  return out;
}

Population GeneratePopulation(const SynthOptions& options,
                              std::span<const DataAccessBehavior> behaviors) {
  ValidateMix(options.mix);
  if (behaviors.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no behaviors to rate");
  }
  if (!(options.completion > 0.0 && options.completion <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "completion must be in (0, 1]");
  }
  const auto counts = ClassCounts(options.raters, options.mix);
  std::vector<RiskClass> classes;
  for (std::size_t c = 0; c < 3; ++c) {
    classes.insert(classes.end(), counts[c], kAllRiskClasses[c]);
  }
  std::mt19937_64 rng(options.seed);
  std::shuffle(classes.begin(), classes.end(), rng);

  const auto effects =
      ItemEffects(behaviors, options.seed, options.item_effect_sd);
  std::normal_distribution<double> noise(0.0, options.noise_sd);
  const std::size_t per_rater = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(
             options.completion * static_cast<double>(behaviors.size()))));

  Population pop;
  pop.ratings.reserve(options.raters * per_rater);
  std::vector<std::size_t> order(behaviors.size());
  for (std::size_t r = 0; r < options.raters; ++r) {
    RaterProfile profile;
    profile.rater_id = PaddedId("u", r + 1, options.raters);
    profile.risk_class = classes[r];
    profile.risk_answers = SurveyAnswersFor(classes[r], rng);
    const double bias = classes[r] == RiskClass::kAverse ? options.averse_bias
                        : classes[r] == RiskClass::kSeeking
                            ? options.seeking_bias
                            : options.neutral_bias;

    std::iota(order.begin(), order.end(), 0);
    if (per_rater < behaviors.size()) {
      std::shuffle(order.begin(), order.end(), rng);
      order.resize(per_rater);
      std::sort(order.begin(), order.end());
    }
    for (std::size_t i : order) {
      const auto& b = behaviors[i];
      const double base = b.controller.is_first_party()
                              ? options.first_party_base
                              : options.third_party_base;
      Rating rating;
      rating.rater_id = profile.rater_id;
      rating.behavior_id = b.behavior_id;
      rating.score = ToScore(base + effects[i] + bias + noise(rng));
      rating.submitted_at = options.start_time_ms +
                            static_cast<std::int64_t>(pop.ratings.size());
      pop.ratings.push_back(std::move(rating));
    }
    order.resize(behaviors.size());
    pop.profiles.push_back(std::move(profile));
  }
  return pop;
}

std::vector<Rating> GenerateExpertRatings(
    const ExpertOptions& options,
    std::span<const DataAccessBehavior> behaviors) {
  const auto effects =
      ItemEffects(behaviors, options.item_seed, options.item_effect_sd);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, options.noise_sd);
  std::vector<Rating> out;
  for (std::size_t e = 0; e < options.experts; ++e) {
    const std::string id = PaddedId("expert-", e + 1, options.experts);
    for (std::size_t i = 0; i < behaviors.size(); ++i) {
      const auto& b = behaviors[i];
      const double base = b.controller.is_first_party()
                              ? options.first_party_base
                              : options.third_party_base;
      out.push_back({id, b.behavior_id,
                     ToScore(base + effects[i] + noise(rng)), 0});
    }
  }
  return out;
}

std::vector<nlohmann::json> PopulationEvents(const Population& population,
                                             std::int64_t at_ms) {
  std::map<std::string, std::vector<Rating>> by_rater;
  for (const auto& r : population.ratings) by_rater[r.rater_id].push_back(r);
  std::vector<nlohmann::json> events;
  for (const auto& profile : population.profiles) {
    const std::string session = "s-" + profile.rater_id;
    events.push_back(SessionCreatedEvent(session, profile.rater_id, at_ms));
    const auto& ratings = by_rater[profile.rater_id];
    events.push_back(RatingsBatchEvent(session, ratings));
    events.push_back(SurveySubmittedEvent(session, profile,
                                          nlohmann::json::object(), at_ms,
                                          /*complete=*/true));
  }
  return events;
}

void WriteEventLines(const std::filesystem::path& path,
                     std::span<const nlohmann::json> events) {
  std::string text;
  for (const auto& e : events) {
    text += e.dump();
    text.push_back('\n');
  }
  io::WriteTextFile(path, text);
}

Deployment MakeStudyFixture() {
  struct AppSpec {
    const char* id;
    const char* title;
    std::int64_t installs;
  };
  struct CategorySpec {
    const char* id;
    const char* name;
    const char* market;
    const char* description;
    std::vector<AppSpec> apps;
  };
  const std::vector<CategorySpec> specs = {
      {"weather-forecast", "Weather Forecast", "Weather",
       "Forecasts, radar maps and severe weather alerts.",
       {{"skycast", "SkyCast Weather", 50000000},
        {"rainradar", "Rain Radar Live", 10000000},
        {"stormwatch", "StormWatch Alerts", 5000000}}},
      {"fitness-tracking", "Fitness Tracking", "Health & Fitness",
       "Step counters, workout logs and activity goals.",
       {{"stridelog", "StrideLog", 10000000},
        {"pulsefit", "PulseFit Coach", 5000000}}},
      {"messaging", "Messaging", "Communication",
       "Chat, voice notes and group conversations.",
       {{"chatterbox", "Chatterbox Messenger", 100000000},
        {"quicktext", "QuickText SMS", 10000000}}},
      {"photo-editing", "Photo Editing", "Photography",
       "Filters, collages and camera effects.",
       {{"snapstudio", "Snap Studio", 50000000},
        {"collagepro", "Collage Pro", 10000000}}},
      {"navigation", "Navigation", "Maps & Navigation",
       "Turn-by-turn directions and offline maps.",
       {{"routewise", "RouteWise GPS", 10000000},
        {"trailmap", "TrailMap Offline", 1000000}}},
      {"event-planning", "Event Planning", "Events",
       "Invitations, ticketing and shared calendars.",
       {{"gatherly", "Gatherly Events", 5000000},
        {"ticketnest", "TicketNest", 1000000}}},
  };
  const std::vector<DataType> first_party_types = {
      DataType::kLocation, DataType::kCamera,   DataType::kContacts,
      DataType::kStorage,  DataType::kMicrophone, DataType::kCalendar,
      DataType::kPhone,    DataType::kSms,      DataType::kSensors,
      DataType::kActivityRecognition, DataType::kCallLog};
  const std::vector<DataType> third_party_types = {
      DataType::kLocation, DataType::kPhone, DataType::kStorage};
  const std::vector<std::pair<SdkCategory, const char*>> sdks = {
      {SdkCategory::kAdvertisement, "com.adnetwork.sdk.AdLoader.load"},
      {SdkCategory::kMobileAnalytics, "io.metricsco.analytics.Tracker.collect"},
      {SdkCategory::kMap, "com.mapvendor.maps.LocationLayer.update"},
      {SdkCategory::kSocialNetwork, "com.socialnet.login.Share.attach"},
      {SdkCategory::kPayment, "com.paygate.checkout.Risk.profile"},
      {SdkCategory::kDevelopmentAid, "com.crashkit.report.Device.snapshot"}};

  std::vector<DeploymentCategory> categories;
  std::vector<AppRecord> apps;
  std::vector<DataAccessBehavior> behaviors;
  std::size_t app_index = 0;
  for (const auto& spec : specs) {
    DeploymentCategory cat;
    cat.category_id = spec.id;
    cat.name = spec.name;
    cat.description = spec.description;
    cat.market_category = spec.market;
    for (const auto& a : spec.apps) {
      AppRecord app;
      app.app_id = a.id;
      app.package_name = std::string("com.example.") + a.id;
      app.title = a.title;
      app.description = std::string(a.title) + ": " + spec.description;
      app.screenshot_uris = {"screens/" + app.app_id + "/1.png",
                             "screens/" + app.app_id + "/2.png"};
      app.install_count = a.installs;
      app.market_category = spec.market;

      std::vector<DataAccessBehavior> own;
      for (std::size_t k = 0; k < 3; ++k) {
        DataAccessBehavior b;
        b.app_id = app.app_id;
        b.data_type =
            first_party_types[(app_index * 3 + k) % first_party_types.size()];
        b.permission = std::string(PermissionsOf(b.data_type).front());
        b.call_chain = {app.package_name + ".MainActivity.onResume",
                        app.package_name + ".features.Feature" +
                            std::to_string(k) + ".run"};
        b.controller = ControllerClass::FirstParty();
        own.push_back(std::move(b));
      }
      for (std::size_t k = 0; k < 3; ++k) {
        const auto& [category, frame] = sdks[(app_index + k) % sdks.size()];
        DataAccessBehavior b;
        b.app_id = app.app_id;
        b.data_type = third_party_types[(app_index + k) % 3];
        b.permission = std::string(PermissionsOf(b.data_type).front());
        b.call_chain = {app.package_name + ".App.onCreate", frame};
        b.controller = ControllerClass::ThirdParty(category);
        own.push_back(std::move(b));
      }
      for (auto& b : own) {
        b.purpose_type = b.controller.purpose_type();
        b.behavior_id = MakeBehaviorId(b.app_id, b.data_type, b.purpose_type);
        app.declared_permissions.push_back(b.permission);
        b.explanation.header = RenderHeader(b);
        b.explanation.body = FallbackBody(b, {});
        b.explanation.verified = true;
        b.explanation.provenance = "fixture";
        behaviors.push_back(std::move(b));
      }
      NormalizeApp(app);
      cat.app_ids.push_back(app.app_id);
      apps.push_back(std::move(app));
      ++app_index;
    }
    categories.push_back(std::move(cat));
  }
  return Deployment(std::move(categories), std::move(apps),
                    std::move(behaviors));
}

}  // namespace depra
