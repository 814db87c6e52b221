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

#ifndef DEPRA_EXPLANATION_H_
#define DEPRA_EXPLANATION_H_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "depra/model.h"

namespace depra {

// Plain-language name for the data a permission exposes, e.g.
// ACCESS_FINE_LOCATION -> "Precise location", RECORD_AUDIO -> "Microphone".
std::string FriendlyDataName(std::string_view permission);

// "app features" for first party, "<sdk phrase> related services" otherwise
// (e.g. "advertising related services").
std::string PurposePhrase(const ControllerClass& controller);

// "<friendly data name> for <purpose phrase>".
std::string RenderHeader(const DataAccessBehavior& behavior);

// Request sent to an explanation service. JSON field names match the
// member names.
struct ExplanationRequest {
  std::string behavior_id;
  std::string app_id;
  std::string package_name;
  std::string app_title;
  std::string app_description;
  std::string data_type;
  std::string permission;
  std::vector<std::string> call_chain;
  std::string controller;  // "first_party" | "third_party"
  std::string sdk_category;  // empty for first party
  std::string purpose_type;
};

ExplanationRequest MakeExplanationRequest(const DataAccessBehavior& behavior,
                                          const AppRecord& app);
void to_json(nlohmann::json& j, const ExplanationRequest& v);
void from_json(const nlohmann::json& j, ExplanationRequest& v);

// External purpose-inference service. Implementations throw
// Error(kClientTimeout) or Error(kClientRejected).
class ExplanationClient {
 public:
  virtual ~ExplanationClient() = default;
  // Returns the explanation body.
  virtual std::string Explain(const ExplanationRequest& request) = 0;
};

// POSTs the request as JSON to `<base_url><path>` and reads {"body": ...}.
// Non-2xx responses or a missing body raise kClientRejected; connection
// failures and timeouts raise kClientTimeout.
class HttpExplanationClient : public ExplanationClient {
 public:
  HttpExplanationClient(std::string base_url, std::string path = "/explain",
                        std::string bearer_token = {},
                        std::chrono::milliseconds timeout =
                            std::chrono::seconds(30));

  std::string Explain(const ExplanationRequest& request) override;

 private:
  std::string base_url_;
  std::string path_;
  std::string bearer_token_;
  std::chrono::milliseconds timeout_;
};

// Builds a client from DEPRA_EXPLAINER_URL / DEPRA_EXPLAINER_TOKEN; null
// when the URL is unset.
std::unique_ptr<ExplanationClient> ExplanationClientFromEnv();

// Template body naming the data type and the controller; never contains
// raw permission identifiers.
std::string FallbackBody(const DataAccessBehavior& behavior,
                         std::span<const std::string> cluster_keywords);

// Header plus body from `client`, or the fallback template when the client
// is null or fails (the provenance records why). Always unverified.
PurposeExplanation GenerateExplanation(
    const DataAccessBehavior& behavior, const AppRecord& app,
    ExplanationClient* client, std::span<const std::string> cluster_keywords);

// Fills every behavior's explanation with at most `max_parallel` requests in
// flight. `keywords_by_app` may be empty.
void GenerateExplanations(
    std::vector<DataAccessBehavior>& behaviors,
    const std::map<std::string, AppRecord>& apps, ExplanationClient* client,
    const std::map<std::string, std::vector<std::string>>& keywords_by_app,
    std::size_t max_parallel = 4);

enum class VerdictKind { kApprove, kEdit, kReject };

struct Verdict {
  VerdictKind kind = VerdictKind::kApprove;
  std::string body;  // replacement text for kEdit

  static Verdict Approve() { return {VerdictKind::kApprove, {}}; }
  static Verdict Edit(std::string body) {
    return {VerdictKind::kEdit, std::move(body)};
  }
  static Verdict Reject() { return {VerdictKind::kReject, {}}; }
};

std::string_view VerdictName(VerdictKind kind);

// Applies a reviewer verdict to the behavior whose id is `explanation_id`.
// Approve and edit mark the explanation verified; reject leaves it
// unverified so the behavior is never served. When `audit_log` is set the
// verdict is appended to it as a JSON line. Throws kUnknownExplanation.
const PurposeExplanation& ApplyVerdict(
    std::vector<DataAccessBehavior>& behaviors,
    std::string_view explanation_id, std::string_view reviewer_id,
    const Verdict& verdict, const std::filesystem::path& audit_log = {});

// Glossary of unavoidable technical terms shown as tooltips.
struct GlossaryEntry {
  std::string term;
  std::string definition;
};

std::vector<GlossaryEntry> DefaultGlossary();
std::vector<GlossaryEntry> LoadGlossary(const std::filesystem::path& path);
nlohmann::json GlossaryToJson(std::span<const GlossaryEntry> glossary);

}  // namespace depra

#endif  // DEPRA_EXPLANATION_H_
