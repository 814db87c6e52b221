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

#ifndef DEPRA_MODEL_H_
#define DEPRA_MODEL_H_

// Domain types shared by every stage of the rating pipeline, and their
// canonical JSON encodings (snake_case field names).

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace depra {

using PermissionId = std::string;

// Sensitive data/resource types and the Android permissions guarding them.
enum class DataType {
  kCalendar,
  kCallLog,
  kCamera,
  kContacts,
  kLocation,
  kMicrophone,
  kPhone,
  kSensors,
  kActivityRecognition,
  kSms,
  kStorage,
};

inline constexpr std::array<DataType, 11> kAllDataTypes = {
    DataType::kCalendar,   DataType::kCallLog, DataType::kCamera,
    DataType::kContacts,   DataType::kLocation, DataType::kMicrophone,
    DataType::kPhone,      DataType::kSensors,
    DataType::kActivityRecognition,
    DataType::kSms,        DataType::kStorage,
};

// "LOCATION", "CALL_LOG", ...
std::string_view DataTypeName(DataType type);
std::optional<DataType> ParseDataType(std::string_view name);

// Permissions (without the "android.permission." prefix) for `type`.
std::span<const std::string_view> PermissionsOf(DataType type);

// Reverse lookup; nullopt for permissions outside the sensitive table.
std::optional<DataType> DataTypeOfPermission(std::string_view permission);

// Strips an "android.permission." prefix if present.
PermissionId NormalizePermission(std::string_view permission);

// Third-party SDK families.
enum class SdkCategory {
  kDevelopmentAid,
  kAdvertisement,
  kMobileAnalytics,
  kMap,
  kPayment,
  kSocialNetwork,
  kGuiComponent,
  kGameEngine,
  kDigitalIdentity,
  kAppMarket,
};

inline constexpr std::array<SdkCategory, 10> kAllSdkCategories = {
    SdkCategory::kDevelopmentAid,  SdkCategory::kAdvertisement,
    SdkCategory::kMobileAnalytics, SdkCategory::kMap,
    SdkCategory::kPayment,         SdkCategory::kSocialNetwork,
    SdkCategory::kGuiComponent,    SdkCategory::kGameEngine,
    SdkCategory::kDigitalIdentity, SdkCategory::kAppMarket,
};

// Display name, e.g. "Mobile Analytics".
std::string_view SdkCategoryName(SdkCategory category);
// Lowercase purpose key, e.g. "analytics", "ads", "develop".
std::string_view SdkPurposeKey(SdkCategory category);
// Accepts either the display name or the purpose key.
std::optional<SdkCategory> ParseSdkCategory(std::string_view text);

inline constexpr std::string_view kFirstPartyPurpose = "app";

// Who initiated a data access: the app's own code or an embedded SDK.
class ControllerClass {
 public:
  static ControllerClass FirstParty() { return ControllerClass(); }
  static ControllerClass ThirdParty(SdkCategory category) {
    return ControllerClass(category);
  }

  bool is_first_party() const { return !sdk_.has_value(); }
  // Only meaningful for third-party controllers.
  std::optional<SdkCategory> sdk_category() const { return sdk_; }
  // "app" for first party, else the SDK purpose key.
  std::string purpose_type() const;

  friend bool operator==(const ControllerClass&,
                         const ControllerClass&) = default;

 private:
  ControllerClass() = default;
  explicit ControllerClass(SdkCategory category) : sdk_(category) {}

  std::optional<SdkCategory> sdk_;
};

struct AppRecord {
  std::string app_id;
  std::string package_name;
  std::string title;
  std::string description;
  std::vector<std::string> screenshot_uris;
  std::int64_t install_count = 0;
  std::string market_category;
  // Sorted, unique.
  std::vector<PermissionId> declared_permissions;

  bool Declares(std::string_view permission) const;
  friend bool operator==(const AppRecord&, const AppRecord&) = default;
};

// Throws kInvalidArgument on negative installs; sorts and de-duplicates
// declared permissions in place.
void NormalizeApp(AppRecord& app);

struct PurposeExplanation {
  static constexpr std::size_t kMaxHeaderLength = 120;

  std::string header;
  std::string body;
  bool verified = false;
  // Where the body came from: "client", "fallback: <reason>", "edited by
  // <reviewer>", ...
  std::string provenance;

  friend bool operator==(const PurposeExplanation&,
                         const PurposeExplanation&) = default;
};

struct DataAccessBehavior {
  std::string behavior_id;
  std::string app_id;
  DataType data_type = DataType::kLocation;
  PermissionId permission;
  std::vector<std::string> call_chain;
  ControllerClass controller = ControllerClass::FirstParty();
  std::string purpose_type{kFirstPartyPurpose};
  PurposeExplanation explanation;

  friend bool operator==(const DataAccessBehavior&,
                         const DataAccessBehavior&) = default;
};

// Canonical id for the rated triple <app, data type, purpose type>.
std::string MakeBehaviorId(std::string_view app_id, DataType type,
                           std::string_view purpose_type);

// Throws kInvalidArgument when the permission is not one of the data type's
// permissions or purpose_type disagrees with the controller.
void ValidateBehavior(const DataAccessBehavior& behavior);

inline constexpr int kMinScore = -2;
inline constexpr int kMaxScore = 2;

struct Rating {
  std::string rater_id;
  std::string behavior_id;
  int score = 0;
  // Milliseconds since the Unix epoch. Never affects scores.
  std::int64_t submitted_at = 0;

  friend bool operator==(const Rating&, const Rating&) = default;
};

enum class RiskAnswer { kA, kB };
enum class RiskClass { kAverse, kNeutral, kSeeking };

inline constexpr std::array<RiskClass, 3> kAllRiskClasses = {
    RiskClass::kAverse, RiskClass::kNeutral, RiskClass::kSeeking};

std::string_view RiskClassName(RiskClass risk_class);  // "averse", ...
std::optional<RiskClass> ParseRiskClass(std::string_view name);

struct RaterProfile {
  std::string rater_id;
  std::vector<RiskAnswer> risk_answers;
  RiskClass risk_class = RiskClass::kNeutral;
  bool attention_pass = true;

  friend bool operator==(const RaterProfile&, const RaterProfile&) = default;
};

// Risk aversion factor and adjustment coefficient; validated on
// construction (0 < lambda < 1, delta > 0).
class CalibrationParams {
 public:
  static constexpr double kDefaultLambda = 0.6;
  static constexpr double kDefaultDelta = 0.5;

  CalibrationParams() : CalibrationParams(kDefaultLambda, kDefaultDelta) {}
  CalibrationParams(double lambda, double delta);

  double lambda() const { return lambda_; }
  double delta() const { return delta_; }

  friend bool operator==(const CalibrationParams&,
                         const CalibrationParams&) = default;

 private:
  double lambda_;
  double delta_;
};

// A rating as submitted over the wire: the score is untyped until
// validated.
struct RatingSubmission {
  std::string rater_id;
  std::string behavior_id;
  nlohmann::json score;
  std::int64_t submitted_at = 0;
};

struct RatingLookup {
  std::function<bool(std::string_view)> behavior_exists;
  // Optional; when empty every rater id is accepted.
  std::function<bool(std::string_view)> rater_exists;
};

// Throws kOutOfRangeScore, kUnknownBehavior or kUnknownRater.
Rating ValidateRating(const RatingSubmission& candidate,
                      const RatingLookup& lookup);

// At most one rating per (rater, behavior); resubmission replaces.
class RatingTable {
 public:
  // Returns true when an earlier rating was replaced.
  bool Upsert(Rating rating);

  const Rating* Find(std::string_view rater_id,
                     std::string_view behavior_id) const;
  std::size_t size() const { return ratings_.size(); }
  bool empty() const { return ratings_.empty(); }

  // Ordered by (rater_id, behavior_id).
  std::vector<Rating> All() const;

  template <typename Fn>
  void ForEach(Fn&& fn) const {
    for (const auto& [key, rating] : ratings_) fn(rating);
  }

 private:
  std::map<std::pair<std::string, std::string>, Rating, std::less<>>
      ratings_;
};

// JSON codecs. Decoders throw depra::Error(kMalformedRecord).
void to_json(nlohmann::json& j, DataType v);
void from_json(const nlohmann::json& j, DataType& v);
void to_json(nlohmann::json& j, SdkCategory v);
void from_json(const nlohmann::json& j, SdkCategory& v);
void to_json(nlohmann::json& j, const ControllerClass& v);
ControllerClass ControllerFromJson(const nlohmann::json& j);
void to_json(nlohmann::json& j, const AppRecord& v);
void from_json(const nlohmann::json& j, AppRecord& v);
void to_json(nlohmann::json& j, const PurposeExplanation& v);
void from_json(const nlohmann::json& j, PurposeExplanation& v);
void to_json(nlohmann::json& j, const DataAccessBehavior& v);
void from_json(const nlohmann::json& j, DataAccessBehavior& v);
void to_json(nlohmann::json& j, const Rating& v);
void from_json(const nlohmann::json& j, Rating& v);
void to_json(nlohmann::json& j, RiskAnswer v);
void from_json(const nlohmann::json& j, RiskAnswer& v);
void to_json(nlohmann::json& j, RiskClass v);
void from_json(const nlohmann::json& j, RiskClass& v);
void to_json(nlohmann::json& j, const RaterProfile& v);
void from_json(const nlohmann::json& j, RaterProfile& v);
void to_json(nlohmann::json& j, const CalibrationParams& v);
CalibrationParams CalibrationParamsFromJson(const nlohmann::json& j);

}  // namespace depra

#endif  // DEPRA_MODEL_H_
