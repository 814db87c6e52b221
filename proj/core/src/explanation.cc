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

#include "depra/explanation.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>

#include "depra/error.h"
#include "depra/io.h"
#include "httplib.h"
#include "json_util.h"

namespace depra {
namespace {

struct FriendlyName {
  std::string_view permission;
  std::string_view name;
};

constexpr FriendlyName kFriendlyNames[] = {
    {"READ_CALENDAR", "Calendar events"},
    {"WRITE_CALENDAR", "Calendar editing"},
    {"READ_CALL_LOG", "Call history"},
    {"WRITE_CALL_LOG", "Call history editing"},
    {"CAMERA", "Camera"},
    {"READ_CONTACTS", "Contacts"},
    {"WRITE_CONTACTS", "Contacts editing"},
    {"GET_ACCOUNTS", "Device accounts list"},
    {"ACCESS_FINE_LOCATION", "Precise location"},
    {"ACCESS_COARSE_LOCATION", "Approximate location"},
    {"ACCESS_BACKGROUND_LOCATION", "Background location"},
    {"RECORD_AUDIO", "Microphone"},
    {"READ_PHONE_STATE", "Phone status and identity"},
    {"READ_PHONE_NUMBERS", "Phone number"},
    {"BODY_SENSORS", "Body sensor data"},
    {"BODY_SENSORS_BACKGROUND", "Background body sensor data"},
    {"ACTIVITY_RECOGNITION", "Physical activity"},
    {"SEND_SMS", "Sending text messages"},
    {"RECEIVE_SMS", "Incoming text messages"},
    {"READ_SMS", "Text messages"},
    {"RECEIVE_WAP_PUSH", "Incoming push messages"},
    {"RECEIVE_MMS", "Incoming multimedia messages"},
    {"READ_CELL_BROADCASTS", "Emergency broadcast messages"},
    {"READ_EXTERNAL_STORAGE", "Files on shared storage"},
    {"WRITE_EXTERNAL_STORAGE", "File saving on shared storage"},
    {"MANAGE_EXTERNAL_STORAGE", "All files on the device"},
    {"ACCESS_MEDIA_LOCATION", "Locations stored in your photos"},
    {"READ_MEDIA_IMAGES", "Photos"},
    {"READ_MEDIA_VIDEO", "Videos"},
    {"READ_MEDIA_AUDIO", "Audio files"},
    {"READ_MEDIA_VISUAL_USER_SELECTED", "Selected photos and videos"},
};

std::string_view SdkPhrase(SdkCategory category) {
  switch (category) {
    case SdkCategory::kDevelopmentAid: return "development tool";
    case SdkCategory::kAdvertisement: return "advertising";
    case SdkCategory::kMobileAnalytics: return "analytics";
    case SdkCategory::kMap: return "map";
    case SdkCategory::kPayment: return "payment";
    case SdkCategory::kSocialNetwork: return "social network";
    case SdkCategory::kGuiComponent: return "interface component";
    case SdkCategory::kGameEngine: return "game engine";
    case SdkCategory::kDigitalIdentity: return "identity verification";
    case SdkCategory::kAppMarket: return "app store";
  }
  return "third-party";
}

std::string_view SdkLikelyUse(SdkCategory category) {
  switch (category) {
    case SdkCategory::kDevelopmentAid:
      return "to help the developer debug or build the app";
    case SdkCategory::kAdvertisement:
      return "to choose or measure the ads you see";
    case SdkCategory::kMobileAnalytics:
      return "to measure how the app is used";
    case SdkCategory::kMap:
      return "to show maps or directions";
    case SdkCategory::kPayment:
      return "to process in-app payments";
    case SdkCategory::kSocialNetwork:
      return "to connect the app with social media accounts";
    case SdkCategory::kGuiComponent:
      return "to display parts of the app's screens";
    case SdkCategory::kGameEngine:
      return "to run game features";
    case SdkCategory::kDigitalIdentity:
      return "to sign you in or confirm who you are";
    case SdkCategory::kAppMarket:
      return "to manage app downloads and updates";
  }
  return "for its own purposes";
}

std::string Lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::int64_t NowMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::string FriendlyDataName(std::string_view permission) {
  const PermissionId normalized = NormalizePermission(permission);
  for (const auto& entry : kFriendlyNames) {
    if (entry.permission == normalized) return std::string(entry.name);
  }
  return "Sensitive data";
}

std::string PurposePhrase(const ControllerClass& controller) {
  if (controller.is_first_party()) return "app features";
  return std::string(SdkPhrase(*controller.sdk_category())) +
         " related services";
}

std::string RenderHeader(const DataAccessBehavior& behavior) {
  return FriendlyDataName(behavior.permission) + " for " +
         PurposePhrase(behavior.controller);
}

ExplanationRequest MakeExplanationRequest(const DataAccessBehavior& behavior,
                                          const AppRecord& app) {
  ExplanationRequest r;
  r.behavior_id = behavior.behavior_id;
  r.app_id = app.app_id;
  r.package_name = app.package_name;
  r.app_title = app.title;
  r.app_description = app.description;
  r.data_type = std::string(DataTypeName(behavior.data_type));
  r.permission = behavior.permission;
  r.call_chain = behavior.call_chain;
  r.controller =
      behavior.controller.is_first_party() ? "first_party" : "third_party";
  if (auto sdk = behavior.controller.sdk_category()) {
    r.sdk_category = std::string(SdkCategoryName(*sdk));
  }
  r.purpose_type = behavior.purpose_type;
  return r;
}

void to_json(nlohmann::json& j, const ExplanationRequest& v) {
  j = {{"behavior_id", v.behavior_id},
       {"app_id", v.app_id},
       {"package_name", v.package_name},
       {"app_title", v.app_title},
       {"app_description", v.app_description},
       {"data_type", v.data_type},
       {"permission", v.permission},
       {"call_chain", v.call_chain},
       {"controller", v.controller},
       {"sdk_category", v.sdk_category},
       {"purpose_type", v.purpose_type}};
}

void from_json(const nlohmann::json& j, ExplanationRequest& v) {
  using json_util::Optional;
  using json_util::Required;
  v.behavior_id = Required<std::string>(j, "behavior_id");
  v.app_id = Required<std::string>(j, "app_id");
  v.package_name = Optional<std::string>(j, "package_name", "");
  v.app_title = Optional<std::string>(j, "app_title", "");
  v.app_description = Optional<std::string>(j, "app_description", "");
  v.data_type = Required<std::string>(j, "data_type");
  v.permission = Required<std::string>(j, "permission");
  v.call_chain = Optional<std::vector<std::string>>(j, "call_chain", {});
  v.controller = Required<std::string>(j, "controller");
  v.sdk_category = Optional<std::string>(j, "sdk_category", "");
  v.purpose_type = Optional<std::string>(j, "purpose_type", "");
}

HttpExplanationClient::HttpExplanationClient(std::string base_url,
                                             std::string path,
                                             std::string bearer_token,
                                             std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)),
      path_(std::move(path)),
      bearer_token_(std::move(bearer_token)),
      timeout_(timeout) {}

std::string HttpExplanationClient::Explain(const ExplanationRequest& request) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  if (!bearer_token_.empty()) client.set_bearer_token_auth(bearer_token_);

  nlohmann::json payload = request;
  auto res = client.Post(path_, payload.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kClientTimeout,
                "explanation service unreachable: " +
                    httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::kClientRejected,
                "explanation service returned HTTP " +
                    std::to_string(res->status));
  }
  nlohmann::json body = nlohmann::json::parse(res->body, nullptr, false);
  if (body.is_discarded() || !body.contains("body") ||
      !body["body"].is_string() || body["body"].get<std::string>().empty()) {
    throw Error(ErrorCode::kClientRejected,
                "explanation service response lacks a 'body' string");
  }
  return body["body"].get<std::string>();
}

std::unique_ptr<ExplanationClient> ExplanationClientFromEnv() {
  const char* url = std::getenv("DEPRA_EXPLAINER_URL");
  if (url == nullptr || *url == '\0') return nullptr;
  const char* token = std::getenv("DEPRA_EXPLAINER_TOKEN");
  return std::make_unique<HttpExplanationClient>(
      url, "/explain", token == nullptr ? "" : token);
}

std::string FallbackBody(const DataAccessBehavior& behavior,
                         std::span<const std::string> cluster_keywords) {
  const std::string data = Lowercase(FriendlyDataName(behavior.permission));
  std::string body;
  if (behavior.controller.is_first_party()) {
    body = "The app's own code accesses your " + data +
           " to support app features";
    if (!cluster_keywords.empty()) {
      body += " related to ";
      const std::size_t n = std::min<std::size_t>(cluster_keywords.size(), 3);
      for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) body += (i + 1 == n) ? " and " : ", ";
        body += cluster_keywords[i];
      }
    }
    body += ".";
  } else {
    SdkCategory sdk = *behavior.controller.sdk_category();
    body = "An embedded " + std::string(SdkPhrase(sdk)) +
           " service (third-party code inside the app) accesses your " +
           data + ", most likely " + std::string(SdkLikelyUse(sdk)) + ".";
  }
  return body;
}

PurposeExplanation GenerateExplanation(
    const DataAccessBehavior& behavior, const AppRecord& app,
    ExplanationClient* client, std::span<const std::string> cluster_keywords) {
  PurposeExplanation out;
  out.header = RenderHeader(behavior);
  out.verified = false;
  if (client == nullptr) {
    out.body = FallbackBody(behavior, cluster_keywords);
    out.provenance = "fallback: no client configured";
    return out;
  }
  try {
    out.body = client->Explain(MakeExplanationRequest(behavior, app));
    out.provenance = "client";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kClientTimeout &&
        e.code() != ErrorCode::kClientRejected) {
      throw;
    }
    out.body = FallbackBody(behavior, cluster_keywords);
    out.provenance = "fallback: " + std::string(ErrorCodeName(e.code())) +
                     ": " + e.what();
  }
  return out;
}

void GenerateExplanations(
    std::vector<DataAccessBehavior>& behaviors,
    const std::map<std::string, AppRecord>& apps, ExplanationClient* client,
    const std::map<std::string, std::vector<std::string>>& keywords_by_app,
    std::size_t max_parallel) {
  max_parallel = std::max<std::size_t>(max_parallel, 1);
  static const std::vector<std::string> kNoKeywords;
  auto run_one = [&](DataAccessBehavior& b) {
    auto app = apps.find(b.app_id);
    if (app == apps.end()) {
      throw Error(ErrorCode::kNotFound, "no app record for " + b.app_id);
    }
    auto kw = keywords_by_app.find(b.app_id);
    b.explanation = GenerateExplanation(
        b, app->second, client,
        kw == keywords_by_app.end() ? kNoKeywords : kw->second);
  };
  for (std::size_t start = 0; start < behaviors.size(); start += max_parallel) {
    const std::size_t end = std::min(behaviors.size(), start + max_parallel);
    std::vector<std::future<void>> inflight;
    for (std::size_t i = start; i < end; ++i) {
      inflight.push_back(
          std::async(std::launch::async, run_one, std::ref(behaviors[i])));
    }
    for (auto& f : inflight) f.get();
  }
}

std::string_view VerdictName(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kApprove: return "approve";
    case VerdictKind::kEdit: return "edit";
    case VerdictKind::kReject: return "reject";
  }
  return "";
}

const PurposeExplanation& ApplyVerdict(
    std::vector<DataAccessBehavior>& behaviors,
    std::string_view explanation_id, std::string_view reviewer_id,
    const Verdict& verdict, const std::filesystem::path& audit_log) {
  auto it = std::find_if(behaviors.begin(), behaviors.end(),
                         [&](const DataAccessBehavior& b) {
                           return b.behavior_id == explanation_id;
                         });
  if (it == behaviors.end()) {
    throw Error(ErrorCode::kUnknownExplanation,
                "unknown explanation " + std::string(explanation_id));
  }
  PurposeExplanation& e = it->explanation;
  switch (verdict.kind) {
    case VerdictKind::kApprove:
      e.verified = true;
      break;
    case VerdictKind::kEdit:
      if (verdict.body.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "edit verdict needs a body");
      }
      e.body = verdict.body;
      e.verified = true;
      e.provenance = "edited by " + std::string(reviewer_id);
      break;
    case VerdictKind::kReject:
      e.verified = false;
      break;
  }
  if (e.header.empty()) e.header = RenderHeader(*it);
  if (!audit_log.empty()) {
    nlohmann::json entry = {{"explanation_id", explanation_id},
                            {"reviewer", reviewer_id},
                            {"verdict", VerdictName(verdict.kind)},
                            {"at", NowMillis()}};
    if (verdict.kind == VerdictKind::kEdit) entry["body"] = verdict.body;
    std::ofstream out(audit_log, std::ios::app);
    if (!out) {
      throw Error(ErrorCode::kIoError, "cannot append to " + audit_log.string());
    }
    out << entry.dump() << '\n';
  }
  return e;
}

std::vector<GlossaryEntry> DefaultGlossary() {
  return {
      {"IMEI",
       "A unique serial number of your phone that can be used to "
       "recognise the device across apps."},
      {"SDK",
       "A ready-made package of code from another company that app "
       "developers build into their apps."},
      {"third-party",
       "A company other than the app's developer, such as an "
       "advertising or analytics provider."},
      {"first-party", "The company that made the app you are using."},
      {"background location",
       "Your location collected while you are not actively using the "
       "app."},
      {"precise location",
       "Your location accurate to a few metres, usually from GPS."},
      {"approximate location",
       "Your location accurate to roughly a city block or "
       "neighbourhood."},
      {"call log", "The list of calls you have made and received."},
      {"body sensors",
       "Health sensors such as heart-rate monitors in your phone or "
       "wearables."},
      {"activity recognition",
       "Detecting whether you are walking, running, cycling or driving"
       " from motion sensors."},
      {"shared storage",
       "Files on your phone that several apps can open, such as "
       "photos, videos and downloads."},
      {"analytics",
       "Measuring how people use an app, for example which screens "
       "they open and for how long."},
      {"advertising ID",
       "A resettable identifier that ad companies use to recognise "
       "your device."},
      {"permission",
       "A switch in your phone's settings that lets an app use a kind "
       "of data or a sensor."},
  };
}

std::vector<GlossaryEntry> LoadGlossary(const std::filesystem::path& path) {
  auto j = io::ReadJsonFile(path);
  std::vector<GlossaryEntry> out;
  for (const auto& item : json_util::Required<nlohmann::json>(j, "terms")) {
    out.push_back({json_util::Required<std::string>(item, "term"),
                   json_util::Required<std::string>(item, "definition")});
  }
  return out;
}

nlohmann::json GlossaryToJson(std::span<const GlossaryEntry> glossary) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& e : glossary) {
    terms.push_back({{"term", e.term}, {"definition", e.definition}});
  }
  return {{"terms", terms}};
}

}  // namespace depra
