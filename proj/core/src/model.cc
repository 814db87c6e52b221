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

#include "depra/model.h"

#include <algorithm>
#include <cmath>

#include "depra/error.h"
#include "json_util.h"

namespace depra {
namespace {

using namespace std::string_view_literals;

constexpr std::string_view kCalendarPerms[] = {"READ_CALENDAR",
                                               "WRITE_CALENDAR"};
constexpr std::string_view kCallLogPerms[] = {"READ_CALL_LOG",
                                              "WRITE_CALL_LOG"};
constexpr std::string_view kCameraPerms[] = {"CAMERA"};
constexpr std::string_view kContactsPerms[] = {
    "READ_CONTACTS", "WRITE_CONTACTS", "GET_ACCOUNTS"};
constexpr std::string_view kLocationPerms[] = {
    "ACCESS_FINE_LOCATION", "ACCESS_COARSE_LOCATION",
    "ACCESS_BACKGROUND_LOCATION"};
constexpr std::string_view kMicrophonePerms[] = {"RECORD_AUDIO"};
constexpr std::string_view kPhonePerms[] = {"READ_PHONE_STATE",
                                            "READ_PHONE_NUMBERS"};
constexpr std::string_view kSensorsPerms[] = {"BODY_SENSORS",
                                              "BODY_SENSORS_BACKGROUND"};
constexpr std::string_view kActivityPerms[] = {"ACTIVITY_RECOGNITION"};
constexpr std::string_view kSmsPerms[] = {
    "SEND_SMS",     "RECEIVE_SMS",  "READ_SMS",
    "RECEIVE_WAP_PUSH", "RECEIVE_MMS", "READ_CELL_BROADCASTS"};
constexpr std::string_view kStoragePerms[] = {
    "READ_EXTERNAL_STORAGE", "WRITE_EXTERNAL_STORAGE",
    "MANAGE_EXTERNAL_STORAGE", "ACCESS_MEDIA_LOCATION",
    "READ_MEDIA_IMAGES",     "READ_MEDIA_VIDEO",
    "READ_MEDIA_AUDIO",      "READ_MEDIA_VISUAL_USER_SELECTED"};

constexpr std::string_view kPermissionPrefix = "android.permission.";

}  // namespace

std::string_view DataTypeName(DataType type) {
  switch (type) {
    case DataType::kCalendar: return "CALENDAR";
    case DataType::kCallLog: return "CALL_LOG";
    case DataType::kCamera: return "CAMERA";
    case DataType::kContacts: return "CONTACTS";
    case DataType::kLocation: return "LOCATION";
    case DataType::kMicrophone: return "MICROPHONE";
    case DataType::kPhone: return "PHONE";
    case DataType::kSensors: return "SENSORS";
    case DataType::kActivityRecognition: return "ACTIVITY_RECOGNITION";
    case DataType::kSms: return "SMS";
    case DataType::kStorage: return "STORAGE";
  }
  return "";
}

std::optional<DataType> ParseDataType(std::string_view name) {
  for (DataType t : kAllDataTypes) {
    if (DataTypeName(t) == name) return t;
  }
  return std::nullopt;
}

std::span<const std::string_view> PermissionsOf(DataType type) {
  switch (type) {
    case DataType::kCalendar: return kCalendarPerms;
    case DataType::kCallLog: return kCallLogPerms;
    case DataType::kCamera: return kCameraPerms;
    case DataType::kContacts: return kContactsPerms;
    case DataType::kLocation: return kLocationPerms;
    case DataType::kMicrophone: return kMicrophonePerms;
    case DataType::kPhone: return kPhonePerms;
    case DataType::kSensors: return kSensorsPerms;
    case DataType::kActivityRecognition: return kActivityPerms;
    case DataType::kSms: return kSmsPerms;
    case DataType::kStorage: return kStoragePerms;
  }
  return {};
}

std::optional<DataType> DataTypeOfPermission(std::string_view permission) {
  if (permission.starts_with(kPermissionPrefix)) {
    permission.remove_prefix(kPermissionPrefix.size());
  }
  for (DataType t : kAllDataTypes) {
    for (std::string_view p : PermissionsOf(t)) {
      if (p == permission) return t;
    }
  }
  return std::nullopt;
}

PermissionId NormalizePermission(std::string_view permission) {
  if (permission.starts_with(kPermissionPrefix)) {
    permission.remove_prefix(kPermissionPrefix.size());
  }
  return PermissionId(permission);
}

std::string_view SdkCategoryName(SdkCategory category) {
  switch (category) {
    case SdkCategory::kDevelopmentAid: return "Development Aid";
    case SdkCategory::kAdvertisement: return "Advertisement";
    case SdkCategory::kMobileAnalytics: return "Mobile Analytics";
    case SdkCategory::kMap: return "Map";
    case SdkCategory::kPayment: return "Payment";
    case SdkCategory::kSocialNetwork: return "Social Network";
    case SdkCategory::kGuiComponent: return "GUI Component";
    case SdkCategory::kGameEngine: return "Game Engine";
    case SdkCategory::kDigitalIdentity: return "Digital Identity";
    case SdkCategory::kAppMarket: return "App Market";
  }
  return "";
}

std::string_view SdkPurposeKey(SdkCategory category) {
  switch (category) {
    case SdkCategory::kDevelopmentAid: return "develop";
    case SdkCategory::kAdvertisement: return "ads";
    case SdkCategory::kMobileAnalytics: return "analytics";
    case SdkCategory::kMap: return "map";
    case SdkCategory::kPayment: return "payment";
    case SdkCategory::kSocialNetwork: return "social";
    case SdkCategory::kGuiComponent: return "gui";
    case SdkCategory::kGameEngine: return "game";
    case SdkCategory::kDigitalIdentity: return "identity";
    case SdkCategory::kAppMarket: return "market";
  }
  return "";
}

std::optional<SdkCategory> ParseSdkCategory(std::string_view text) {
  for (SdkCategory c : kAllSdkCategories) {
    if (SdkCategoryName(c) == text || SdkPurposeKey(c) == text) return c;
  }
  return std::nullopt;
}

std::string ControllerClass::purpose_type() const {
  if (!sdk_) return std::string(kFirstPartyPurpose);
  return std::string(SdkPurposeKey(*sdk_));
}

bool AppRecord::Declares(std::string_view permission) const {
  return std::binary_search(declared_permissions.begin(),
                            declared_permissions.end(), permission);
}

void NormalizeApp(AppRecord& app) {
  if (app.install_count < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "install_count must be non-negative for app " + app.app_id);
  }
  for (auto& p : app.declared_permissions) p = NormalizePermission(p);
  std::sort(app.declared_permissions.begin(), app.declared_permissions.end());
  app.declared_permissions.erase(
      std::unique(app.declared_permissions.begin(),
                  app.declared_permissions.end()),
      app.declared_permissions.end());
}

std::string MakeBehaviorId(std::string_view app_id, DataType type,
                           std::string_view purpose_type) {
  std::string id(app_id);
  id += ':';
  id += DataTypeName(type);
  id += ':';
  id += purpose_type;
  return id;
}

void ValidateBehavior(const DataAccessBehavior& behavior) {
  auto perms = PermissionsOf(behavior.data_type);
  if (std::find(perms.begin(), perms.end(), behavior.permission) ==
      perms.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "permission " + behavior.permission + " does not belong to " +
                    std::string(DataTypeName(behavior.data_type)));
  }
  if (behavior.purpose_type != behavior.controller.purpose_type()) {
    throw Error(ErrorCode::kInvalidArgument,
                "purpose_type '" + behavior.purpose_type +
                    "' disagrees with controller of " + behavior.behavior_id);
  }
  if (behavior.explanation.header.size() >
      PurposeExplanation::kMaxHeaderLength) {
    throw Error(ErrorCode::kInvalidArgument,
                "explanation header longer than 120 characters for " +
                    behavior.behavior_id);
  }
}

std::string_view RiskClassName(RiskClass risk_class) {
  switch (risk_class) {
    case RiskClass::kAverse: return "averse";
    case RiskClass::kNeutral: return "neutral";
    case RiskClass::kSeeking: return "seeking";
  }
  return "";
}

std::optional<RiskClass> ParseRiskClass(std::string_view name) {
  for (RiskClass c : kAllRiskClasses) {
    if (RiskClassName(c) == name) return c;
  }
  return std::nullopt;
}

CalibrationParams::CalibrationParams(double lambda, double delta)
    : lambda_(lambda), delta_(delta) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "lambda must lie in the open interval (0, 1)");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must be positive");
  }
}

Rating ValidateRating(const RatingSubmission& candidate,
                      const RatingLookup& lookup) {
  const nlohmann::json& s = candidate.score;
  int score = 0;
  if (s.is_number_integer()) {
    auto wide = s.get<std::int64_t>();
    if (wide < kMinScore || wide > kMaxScore) {
      throw Error(ErrorCode::kOutOfRangeScore,
                  "score " + s.dump() + " outside -2..+2");
    }
    score = static_cast<int>(wide);
  } else if (s.is_number_float()) {
    double v = s.get<double>();
    if (v != std::floor(v) || v < kMinScore || v > kMaxScore) {
      throw Error(ErrorCode::kOutOfRangeScore,
                  "score " + s.dump() + " is not an integer in -2..+2");
    }
    score = static_cast<int>(v);
  } else {
    throw Error(ErrorCode::kOutOfRangeScore,
                "score must be an integer in -2..+2");
  }
  if (!lookup.behavior_exists ||
      !lookup.behavior_exists(candidate.behavior_id)) {
    throw Error(ErrorCode::kUnknownBehavior,
                "unknown behavior '" + candidate.behavior_id + "'");
  }
  if (candidate.rater_id.empty() ||
      (lookup.rater_exists && !lookup.rater_exists(candidate.rater_id))) {
    throw Error(ErrorCode::kUnknownRater,
                "unknown rater '" + candidate.rater_id + "'");
  }
  return Rating{candidate.rater_id, candidate.behavior_id, score,
                candidate.submitted_at};
}

bool RatingTable::Upsert(Rating rating) {
  auto key = std::make_pair(rating.rater_id, rating.behavior_id);
  auto [it, inserted] = ratings_.insert_or_assign(std::move(key),
                                                  std::move(rating));
  return !inserted;
}

const Rating* RatingTable::Find(std::string_view rater_id,
                                std::string_view behavior_id) const {
  auto it = ratings_.find(
      std::make_pair(std::string(rater_id), std::string(behavior_id)));
  return it == ratings_.end() ? nullptr : &it->second;
}

std::vector<Rating> RatingTable::All() const {
  std::vector<Rating> out;
  out.reserve(ratings_.size());
  for (const auto& [key, rating] : ratings_) out.push_back(rating);
  return out;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, DataType v) { j = DataTypeName(v); }

void from_json(const nlohmann::json& j, DataType& v) {
  auto parsed = j.is_string() ? ParseDataType(j.get<std::string>())
                              : std::nullopt;
  if (!parsed) {
    throw Error(ErrorCode::kMalformedRecord,
                "unknown data_type " + j.dump());
  }
  v = *parsed;
}

void to_json(nlohmann::json& j, SdkCategory v) { j = SdkCategoryName(v); }

void from_json(const nlohmann::json& j, SdkCategory& v) {
  auto parsed = j.is_string() ? ParseSdkCategory(j.get<std::string>())
                              : std::nullopt;
  if (!parsed) {
    throw Error(ErrorCode::kMalformedRecord,
                "unknown sdk_category " + j.dump());
  }
  v = *parsed;
}

void to_json(nlohmann::json& j, const ControllerClass& v) {
  if (v.is_first_party()) {
    j = {{"kind", "first_party"}};
  } else {
    j = {{"kind", "third_party"}, {"sdk_category", *v.sdk_category()}};
  }
}

ControllerClass ControllerFromJson(const nlohmann::json& j) {
  auto kind = json_util::Required<std::string>(j, "kind");
  if (kind == "first_party") {
    if (j.contains("sdk_category")) {
      throw Error(ErrorCode::kMalformedRecord,
                  "first_party controller must not carry sdk_category");
    }
    return ControllerClass::FirstParty();
  }
  if (kind == "third_party") {
    return ControllerClass::ThirdParty(
        json_util::Required<SdkCategory>(j, "sdk_category"));
  }
  throw Error(ErrorCode::kMalformedRecord, "unknown controller kind " + kind);
}

void to_json(nlohmann::json& j, const AppRecord& v) {
  j = {{"app_id", v.app_id},
       {"package_name", v.package_name},
       {"title", v.title},
       {"description", v.description},
       {"screenshot_uris", v.screenshot_uris},
       {"install_count", v.install_count},
       {"market_category", v.market_category},
       {"declared_permissions", v.declared_permissions}};
}

void from_json(const nlohmann::json& j, AppRecord& v) {
  using json_util::Optional;
  using json_util::Required;
  v.app_id = Required<std::string>(j, "app_id");
  v.package_name = Optional<std::string>(j, "package_name", "");
  v.title = Optional<std::string>(j, "title", "");
  v.description = Optional<std::string>(j, "description", "");
  v.screenshot_uris =
      Optional<std::vector<std::string>>(j, "screenshot_uris", {});
  v.install_count = Optional<std::int64_t>(j, "install_count", 0);
  v.market_category = Required<std::string>(j, "market_category");
  v.declared_permissions =
      Optional<std::vector<std::string>>(j, "declared_permissions", {});
  if (v.install_count < 0) {
    throw Error(ErrorCode::kMalformedRecord,
                "install_count must be non-negative");
  }
  auto sorted = v.declared_permissions;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kMalformedRecord,
                "declared_permissions contains duplicates");
  }
  NormalizeApp(v);
}

void to_json(nlohmann::json& j, const PurposeExplanation& v) {
  j = {{"header", v.header},
       {"body", v.body},
       {"verified", v.verified},
       {"provenance", v.provenance}};
}

void from_json(const nlohmann::json& j, PurposeExplanation& v) {
  using json_util::Optional;
  v.header = Optional<std::string>(j, "header", "");
  v.body = Optional<std::string>(j, "body", "");
  v.verified = Optional<bool>(j, "verified", false);
  v.provenance = Optional<std::string>(j, "provenance", "");
}

void to_json(nlohmann::json& j, const DataAccessBehavior& v) {
  j = {{"behavior_id", v.behavior_id},
       {"app_id", v.app_id},
       {"data_type", v.data_type},
       {"permission", v.permission},
       {"call_chain", v.call_chain},
       {"controller", v.controller},
       {"purpose_type", v.purpose_type},
       {"explanation", v.explanation}};
}

void from_json(const nlohmann::json& j, DataAccessBehavior& v) {
  using json_util::Optional;
  using json_util::Required;
  v.behavior_id = Required<std::string>(j, "behavior_id");
  v.app_id = Required<std::string>(j, "app_id");
  v.data_type = Required<DataType>(j, "data_type");
  v.permission = NormalizePermission(Required<std::string>(j, "permission"));
  v.call_chain = Optional<std::vector<std::string>>(j, "call_chain", {});
  if (!j.contains("controller")) {
    throw Error(ErrorCode::kMalformedRecord, "missing field 'controller'");
  }
  v.controller = ControllerFromJson(j.at("controller"));
  v.purpose_type =
      Optional<std::string>(j, "purpose_type", v.controller.purpose_type());
  if (j.contains("explanation")) {
    v.explanation = j.at("explanation").get<PurposeExplanation>();
  } else {
    v.explanation = {};
  }
}

void to_json(nlohmann::json& j, const Rating& v) {
  j = {{"rater_id", v.rater_id},
       {"behavior_id", v.behavior_id},
       {"score", v.score},
       {"submitted_at", v.submitted_at}};
}

void from_json(const nlohmann::json& j, Rating& v) {
  using json_util::Optional;
  using json_util::Required;
  v.rater_id = Required<std::string>(j, "rater_id");
  v.behavior_id = Required<std::string>(j, "behavior_id");
  v.score = Required<int>(j, "score");
  if (v.score < kMinScore || v.score > kMaxScore) {
    throw Error(ErrorCode::kMalformedRecord, "score outside -2..+2");
  }
  v.submitted_at = Optional<std::int64_t>(j, "submitted_at", 0);
}

void to_json(nlohmann::json& j, RiskAnswer v) {
  j = v == RiskAnswer::kA ? "A" : "B";
}

void from_json(const nlohmann::json& j, RiskAnswer& v) {
  if (j == "A" || j == "a") {
    v = RiskAnswer::kA;
  } else if (j == "B" || j == "b") {
    v = RiskAnswer::kB;
  } else {
    throw Error(ErrorCode::kMalformedRecord,
                "risk answer must be A or B, got " + j.dump());
  }
}

void to_json(nlohmann::json& j, RiskClass v) { j = RiskClassName(v); }

void from_json(const nlohmann::json& j, RiskClass& v) {
  auto parsed =
      j.is_string() ? ParseRiskClass(j.get<std::string>()) : std::nullopt;
  if (!parsed) {
    throw Error(ErrorCode::kMalformedRecord, "unknown risk_class " + j.dump());
  }
  v = *parsed;
}

void to_json(nlohmann::json& j, const RaterProfile& v) {
  j = {{"rater_id", v.rater_id},
       {"risk_answers", v.risk_answers},
       {"risk_class", v.risk_class},
       {"attention_pass", v.attention_pass}};
}

void from_json(const nlohmann::json& j, RaterProfile& v) {
  using json_util::Optional;
  using json_util::Required;
  v.rater_id = Required<std::string>(j, "rater_id");
  v.risk_answers = Required<std::vector<RiskAnswer>>(j, "risk_answers");
  v.risk_class = Required<RiskClass>(j, "risk_class");
  v.attention_pass = Optional<bool>(j, "attention_pass", true);
}

void to_json(nlohmann::json& j, const CalibrationParams& v) {
  j = {{"lambda", v.lambda()}, {"delta", v.delta()}};
}

CalibrationParams CalibrationParamsFromJson(const nlohmann::json& j) {
  return CalibrationParams(json_util::Required<double>(j, "lambda"),
                           json_util::Required<double>(j, "delta"));
}

}  // namespace depra
