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

// depra: command-line front end for the rating pipeline.
//
//   ingest -> cluster -> select -> explain -> verify -> serve
//   score / calibrate / report read the service event log offline.

#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "depra/calibration.h"
#include "depra/clustering.h"
#include "depra/config.h"
#include "depra/deployment.h"
#include "depra/error.h"
#include "depra/explanation.h"
#include "depra/ingestion.h"
#include "depra/io.h"
#include "depra/scoring.h"
#include "depra/selection.h"
#include "depra/service.h"
#include "depra/stats.h"
#include "depra/store.h"
#include "depra/synth.h"

namespace fs = std::filesystem;

namespace depra {
namespace {

// A stage input that an earlier subcommand should have produced.
class MissingArtifact : public Error {
 public:
  MissingArtifact(fs::path path, std::string producer)
      : Error(ErrorCode::kMissingPrerequisite,
              "missing " + path.string() + " (run `depra " + producer +
                  "` first)"),
        path_(std::move(path)) {}
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void Require(const fs::path& path, const std::string& producer) {
  if (!fs::exists(path)) throw MissingArtifact(path, producer);
}

void Emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    io::WriteTextFile(out, text);
  }
}

struct Globals {
  std::string config_path;
  std::string format = "json";
};

Config ResolveConfig(const Globals& g) {
  if (g.config_path.empty()) return ConfigFromJson(nlohmann::json::object(),
                                                   fs::current_path());
  return LoadConfig(g.config_path);
}

fs::path Pick(const std::string& flag, const fs::path& fallback) {
  return flag.empty() ? fallback : fs::path(flag);
}

// Corpus as written by `ingest`.
nlohmann::json CorpusToJson(const Corpus& corpus) {
  return {{"apps", corpus.apps},
          {"call_chains", corpus.call_chains},
          {"third_party_db", corpus.third_party_db.entries()},
          {"drop_report", corpus.drop_report}};
}

Corpus CorpusFromJson(const nlohmann::json& j) {
  Corpus c;
  c.apps = j.at("apps").get<std::vector<AppRecord>>();
  for (auto& app : c.apps) NormalizeApp(app);
  c.call_chains = j.at("call_chains").get<std::vector<CallChainRecord>>();
  c.third_party_db = ThirdPartyDb(
      j.at("third_party_db").get<std::vector<ThirdPartyEntry>>());
  return c;
}

Corpus LoadIngested(const fs::path& path) {
  Require(path, "ingest");
  return CorpusFromJson(io::ReadJsonFile(path));
}

std::vector<CategoryClustering> LoadClusters(const fs::path& path) {
  Require(path, "cluster");
  return ClustersFromJson(io::ReadJsonFile(path));
}

Deployment LoadDeploymentArtifact(const fs::path& path) {
  Require(path, "explain");
  return LoadDeployment(path);
}

std::optional<CalibrationParams> CalibrationFrom(const Config& config,
                                                 std::optional<double> lambda,
                                                 std::optional<double> delta) {
  if (!lambda && !delta) return config.calibration;
  const CalibrationParams base = config.calibration.value_or(
      CalibrationParams());
  return CalibrationParams(lambda.value_or(base.lambda()),
                           delta.value_or(base.delta()));
}

RatingDataset DatasetFromLog(const fs::path& event_log) {
  Require(event_log, "serve");
  return CollectDataset(ReplayLogFile(event_log));
}

PopulationMix ParseMix(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kBadMix, "mix must be three numbers: " + text);
    }
  }
  if (parts.size() != 3) {
    throw Error(ErrorCode::kBadMix, "mix must be three numbers: " + text);
  }
  return {parts[0], parts[1], parts[2]};
}

volatile std::sig_atomic_t g_stop = 0;
void OnSignal(int) { g_stop = 1; }

int Run(int argc, char** argv) {
  CLI::App app{"DePra privacy-rating pipeline"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON config file");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load and filter the corpus");
  std::string ingest_corpus, ingest_out, ingest_report;
  ingest->add_option("--corpus", ingest_corpus, "Corpus directory");
  ingest->add_option("--out", ingest_out, "Output corpus.json");
  ingest->add_option("--report", ingest_report, "Drop report output");

  // cluster [merge|relabel]
  auto* cluster = app.add_subcommand("cluster", "Cluster apps per category");
  std::string cluster_corpus, cluster_out, cluster_assignments;
  cluster->add_option("--corpus", cluster_corpus, "corpus.json from ingest");
  cluster->add_option("--out", cluster_out, "Output clusters.json");
  cluster->add_option("--assignments", cluster_assignments,
                      "Precomputed {app_id: topic} assignments");
  auto* merge = cluster->add_subcommand("merge", "Merge two clusters");
  std::string merge_clusters, merge_a, merge_b, curator = "curator";
  merge->add_option("--clusters", merge_clusters, "clusters.json to edit");
  merge->add_option("--a", merge_a, "First cluster id")->required();
  merge->add_option("--b", merge_b, "Second cluster id")->required();
  merge->add_option("--curator", curator, "Curator id for the audit log");
  auto* relabel = cluster->add_subcommand("relabel", "Rename a cluster");
  std::string relabel_clusters, relabel_id, relabel_label;
  relabel->add_option("--clusters", relabel_clusters, "clusters.json to edit");
  relabel->add_option("--id", relabel_id, "Cluster id")->required();
  relabel->add_option("--label", relabel_label, "New label")->required();
  relabel->add_option("--curator", curator, "Curator id for the audit log");

  // select
  auto* select = app.add_subcommand("select", "Pick representative apps");
  std::string select_clusters, select_corpus, select_out;
  select->add_option("--cluster,--clusters", select_clusters,
                     "clusters.json from cluster");
  select->add_option("--corpus", select_corpus, "corpus.json from ingest");
  select->add_option("--out", select_out, "Output selection.json");

  // explain
  auto* explain = app.add_subcommand("explain", "Build the deployment");
  std::string explain_corpus, explain_clusters, explain_selection,
      explain_out;
  std::size_t max_parallel = 4;
  explain->add_option("--corpus", explain_corpus, "corpus.json");
  explain->add_option("--clusters", explain_clusters, "clusters.json");
  explain->add_option("--selection", explain_selection, "selection.json");
  explain->add_option("--out", explain_out, "Output deployment.json");
  explain->add_option("--max-parallel", max_parallel,
                      "Concurrent explanation requests");

  // verify
  auto* verify = app.add_subcommand("verify", "Review explanations");
  std::string verify_deployment, verify_id, verify_edit, reviewer = "reviewer";
  bool verify_approve = false, verify_reject = false, verify_all = false;
  verify->add_option("--deployment", verify_deployment, "deployment.json");
  verify->add_option("--id", verify_id, "Behavior id");
  verify->add_flag("--approve", verify_approve, "Approve the explanation");
  verify->add_option("--edit", verify_edit, "Replace the body and approve");
  verify->add_flag("--reject", verify_reject, "Reject the explanation");
  verify->add_flag("--approve-all", verify_all,
                   "Approve every unverified explanation");
  verify->add_option("--reviewer", reviewer, "Reviewer id");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the /v1 HTTP service");
  std::string serve_host;
  int serve_port = -1;
  serve->add_option("--host", serve_host, "Bind address");
  serve->add_option("--port", serve_port, "Port (0 picks a free one)");

  // Shared by score, calibrate, report.
  std::string event_log, deployment_path, out;
  std::optional<double> lambda, delta;
  auto add_data_flags = [&](CLI::App* cmd) {
    cmd->add_option("--event-log", event_log, "Service event log");
    cmd->add_option("--deployment", deployment_path, "deployment.json");
    cmd->add_option("--out", out, "Output file ('-' for stdout)");
    cmd->add_option("--format", g.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--lambda", lambda, "Risk aversion factor");
    cmd->add_option("--delta", delta, "Adjustment coefficient");
  };
  serve->add_option("--event-log", event_log, "Service event log");
  serve->add_option("--deployment", deployment_path, "deployment.json");

  auto* score = app.add_subcommand("score", "AppScore per app");
  bool calibrated = false;
  std::string score_app;
  add_data_flags(score);
  score->add_flag("--calibrated", calibrated, "Score calibrated ratings");
  score->add_option("--app", score_app, "Score a single app");

  auto* calibrate = app.add_subcommand("calibrate", "Calibrated rating table");
  add_data_flags(calibrate);

  auto* report = app.add_subcommand("report", "Statistical reports");
  report->require_subcommand(1);
  std::string experts;
  auto* comparison = report->add_subcommand("comparison", "Users vs experts");
  add_data_flags(comparison);
  comparison->add_option("--experts", experts, "Expert ratings (JSONL)");
  comparison->add_flag("--calibrated", calibrated, "Use calibrated scores");
  auto* distributions =
      report->add_subcommand("distributions", "Per-behavior distributions");
  add_data_flags(distributions);
  distributions->add_flag("--calibrated", calibrated,
                          "Use calibrated scores");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic population");
  SynthOptions synth_options;
  std::string mix_text = "0.46,0.40,0.14";
  std::string synth_experts;
  bool write_fixture = false, force = false;
  synth->add_option("--raters", synth_options.raters, "Number of raters");
  synth->add_option("--mix", mix_text, "averse,neutral,seeking fractions");
  synth->add_option("--seed", synth_options.seed, "Random seed");
  synth->add_option("--completion", synth_options.completion,
                    "Share of behaviors each rater answers");
  synth->add_option("--event-log", event_log, "Event log to write");
  synth->add_option("--deployment", deployment_path, "deployment.json");
  synth->add_option("--experts", synth_experts, "Also write expert ratings");
  synth->add_flag("--write-fixture", write_fixture,
                  "Write the built-in 6/13/78 study fixture as the deployment");
  synth->add_flag("--force", force, "Overwrite an existing event log");

  CLI11_PARSE(app, argc, argv);

  const Config config = ResolveConfig(g);
  const fs::path corpus_json = config.work_dir / "corpus.json";
  const fs::path clusters_json = config.work_dir / "clusters.json";
  const fs::path selection_json = config.work_dir / "selection.json";
  const fs::path the_log = Pick(event_log, config.event_log);
  const fs::path the_deployment = Pick(deployment_path, config.deployment);

  if (ingest->parsed()) {
    const fs::path dir = Pick(ingest_corpus, config.corpus_dir);
    Require(dir / "apps.jsonl", "ingest (corpus directory)");
    Corpus corpus = LoadCorpus(dir, config.ingest);
    io::WriteJsonFile(Pick(ingest_out, corpus_json), CorpusToJson(corpus));
    nlohmann::json summary = {{"apps", corpus.apps.size()},
                              {"call_chains", corpus.call_chains.size()},
                              {"third_party_entries",
                               corpus.third_party_db.size()},
                              {"drop_report", corpus.drop_report}};
    Emit(io::Dump(summary), ingest_report);
    return 0;
  }

  if (cluster->parsed()) {
    if (merge->parsed() || relabel->parsed()) {
      const fs::path path = Pick(
          merge->parsed() ? merge_clusters : relabel_clusters, clusters_json);
      ClusterCatalog catalog(LoadClusters(path));
      catalog.set_audit_log(config.audit_log);
      if (merge->parsed()) {
        const Corpus corpus = LoadIngested(Pick(cluster_corpus, corpus_json));
        catalog.Merge(merge_a, merge_b, corpus.apps, curator);
      } else {
        catalog.Relabel(relabel_id, relabel_label, curator);
      }
      io::WriteJsonFile(path, ClustersToJson(catalog.categories()));
      return 0;
    }
    const Corpus corpus = LoadIngested(Pick(cluster_corpus, corpus_json));
    std::vector<CategoryClustering> result;
    if (!cluster_assignments.empty()) {
      Require(cluster_assignments, "cluster (assignments file)");
      result = ClusterCorpus(
          corpus.apps, PrecomputedClusterer::FromJsonFile(cluster_assignments));
    } else {
      result = ClusterCorpus(corpus.apps, LexicalClusterer());
    }
    io::WriteJsonFile(Pick(cluster_out, clusters_json),
                      ClustersToJson(result));
    return 0;
  }

  if (select->parsed()) {
    const auto clusters = LoadClusters(Pick(select_clusters, clusters_json));
    const Corpus corpus = LoadIngested(Pick(select_corpus, corpus_json));
    std::map<std::string, const AppRecord*> by_id;
    for (const auto& a : corpus.apps) by_id[a.app_id] = &a;
    nlohmann::json selections = nlohmann::json::array();
    for (const auto& category : clusters) {
      for (const auto& c : category.clusters) {
        if (c.outlier || c.member_app_ids.empty()) continue;
        std::vector<AppRecord> members;
        for (const auto& id : c.member_app_ids) {
          auto it = by_id.find(id);
          if (it == by_id.end()) {
            throw Error(ErrorCode::kNotFound,
                        "cluster " + c.cluster_id + " names app " + id +
                            " missing from the corpus");
          }
          members.push_back(*it->second);
        }
        selections.push_back(SelectRepresentatives(c.cluster_id, members));
      }
    }
    const std::string text = io::Dump({{"selections", selections}});
    Emit(text, Pick(select_out, selection_json).string());
    return 0;
  }

  if (explain->parsed()) {
    const Corpus corpus = LoadIngested(Pick(explain_corpus, corpus_json));
    const auto clusters = LoadClusters(Pick(explain_clusters, clusters_json));
    const fs::path sel_path = Pick(explain_selection, selection_json);
    Require(sel_path, "select");
    const auto selections = io::ReadJsonFile(sel_path)
                                .at("selections")
                                .get<std::vector<SelectionResult>>();
    std::map<std::string, const Cluster*> cluster_by_id;
    for (const auto& cat : clusters) {
      for (const auto& c : cat.clusters) cluster_by_id[c.cluster_id] = &c;
    }
    std::map<std::string, AppRecord> apps;
    for (const auto& a : corpus.apps) apps.emplace(a.app_id, a);

    std::vector<DeploymentCategory> categories;
    std::vector<AppRecord> chosen;
    std::map<std::string, std::vector<std::string>> keywords_by_app;
    for (const auto& s : selections) {
      if (s.selected_app_ids.empty()) continue;
      auto c = cluster_by_id.find(s.cluster_id);
      if (c == cluster_by_id.end()) {
        throw Error(ErrorCode::kNotFound,
                    "selection names unknown cluster " + s.cluster_id);
      }
      DeploymentCategory cat;
      cat.category_id = s.cluster_id;
      cat.name = c->second->label.empty() ? s.cluster_id : c->second->label;
      cat.market_category = c->second->parent_category;
      cat.keywords = c->second->keywords;
      std::string kw;
      for (std::size_t i = 0; i < cat.keywords.size() && i < 3; ++i) {
        kw += (i ? ", " : "") + cat.keywords[i];
      }
      cat.description = cat.market_category + " apps" +
                        (kw.empty() ? std::string() : " about " + kw);
      cat.app_ids = s.selected_app_ids;
      for (const auto& id : s.selected_app_ids) {
        chosen.push_back(apps.at(id));
        keywords_by_app[id] = cat.keywords;
      }
      categories.push_back(std::move(cat));
    }

    std::vector<DataAccessBehavior> behaviors;
    nlohmann::json issues = nlohmann::json::array();
    for (const auto& a : chosen) {
      std::vector<CallChainRecord> records;
      for (const auto& r : corpus.call_chains) {
        if (r.app_id == a.app_id) records.push_back(r);
      }
      BehaviorBuild build = BuildBehaviors(a, records, corpus.third_party_db);
      for (const auto& issue : build.issues) {
        nlohmann::json j = issue;
        j["app_id"] = a.app_id;
        issues.push_back(std::move(j));
      }
      for (auto& b : build.behaviors) behaviors.push_back(std::move(b));
    }
    auto client = ExplanationClientFromEnv();
    GenerateExplanations(behaviors, apps, client.get(), keywords_by_app,
                         max_parallel);
    const Deployment deployment(std::move(categories), std::move(chosen),
                                std::move(behaviors));
    SaveDeployment(Pick(explain_out, config.deployment), deployment);
    Emit(io::Dump({{"categories", deployment.categories().size()},
                   {"apps", deployment.apps().size()},
                   {"behaviors", deployment.behaviors().size()},
                   {"issues", issues}}),
         "-");
    return 0;
  }

  if (verify->parsed()) {
    const fs::path path = Pick(verify_deployment, config.deployment);
    Deployment deployment = LoadDeploymentArtifact(path);
    auto& behaviors = deployment.mutable_behaviors();
    std::size_t changed = 0;
    if (verify_all) {
      std::vector<std::string> ids;
      for (const auto& b : behaviors) {
        if (!b.explanation.verified) ids.push_back(b.behavior_id);
      }
      for (const auto& id : ids) {
        ApplyVerdict(behaviors, id, reviewer, Verdict::Approve(),
                     config.audit_log);
        ++changed;
      }
    } else {
      const int chosen = int{verify_approve} + int{verify_reject} +
                         int{!verify_edit.empty()};
      if (verify_id.empty() || chosen != 1) {
        throw Error(ErrorCode::kInvalidArgument,
                    "verify needs --id and exactly one of --approve, --edit, "
                    "--reject (or --approve-all)");
      }
      const Verdict verdict = verify_approve  ? Verdict::Approve()
                              : verify_reject ? Verdict::Reject()
                                              : Verdict::Edit(verify_edit);
      ApplyVerdict(behaviors, verify_id, reviewer, verdict, config.audit_log);
      changed = 1;
    }
    SaveDeployment(path, deployment);
    std::size_t verified = 0;
    for (const auto& b : deployment.behaviors()) {
      if (b.explanation.verified) ++verified;
    }
    Emit(io::Dump({{"changed", changed},
                   {"verified", verified},
                   {"behaviors", deployment.behaviors().size()}}),
         "-");
    return 0;
  }

  if (serve->parsed()) {
    std::shared_ptr<const Deployment> deployment;
    if (fs::exists(the_deployment)) {
      deployment = std::make_shared<const Deployment>(
          LoadDeployment(the_deployment));
    }
    Store store({the_log, config.snapshot, config.snapshot_every});
    ServiceOptions options;
    options.calibration = config.calibration;
    options.attention = config.attention;
    options.experts = config.experts;
    if (!config.glossary.empty()) options.glossary = LoadGlossary(config.glossary);
    RatingService service(store, deployment, options);
    HttpServer server(service);
    std::signal(SIGINT, OnSignal);
    std::signal(SIGTERM, OnSignal);
    const std::string host = serve_host.empty() ? config.host : serve_host;
    const int port = server.Start(host, serve_port < 0 ? config.port
                                                       : serve_port);
    std::cout << io::Dump({{"listening", host + ":" + std::to_string(port)},
                           {"ready", deployment != nullptr},
                           {"recovered_events", store.state()->event_count},
                           {"discarded_bytes",
                            store.discarded_bytes_at_open()}});
    std::cout.flush();
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.Stop();
    store.Checkpoint();
    return 0;
  }

  const bool csv = g.format == "csv";

  if (score->parsed()) {
    const Deployment deployment = LoadDeploymentArtifact(the_deployment);
    const RatingDataset dataset = DatasetFromLog(the_log);
    std::optional<CalibrationParams> calibration;
    if (calibrated) {
      calibration = CalibrationFrom(config, lambda, delta);
      if (!calibration) {
        throw Error(ErrorCode::kInvalidArgument,
                    "CalibrationUnconfigured: pass --lambda/--delta or set "
                    "calibration in the config");
      }
    }
    const auto behaviors = deployment.BehaviorIndex();
    std::vector<AppScore> scores;
    if (!score_app.empty()) {
      scores.push_back(ScoreOneApp(dataset, behaviors, score_app, calibration));
    } else {
      scores = ScoreAllApps(dataset, behaviors, calibration);
    }
    Emit(csv ? ScoresToCsv(scores) : io::Dump(ScoresToJson(scores)), out);
    return 0;
  }

  if (calibrate->parsed()) {
    const Deployment deployment = LoadDeploymentArtifact(the_deployment);
    const RatingDataset dataset = DatasetFromLog(the_log);
    const auto calibration = CalibrationFrom(config, lambda, delta);
    if (!calibration) {
      throw Error(ErrorCode::kInvalidArgument,
                  "CalibrationUnconfigured: pass --lambda/--delta or set "
                  "calibration in the config");
    }
    const auto behaviors = deployment.BehaviorIndex();
    const auto result = CalibrateDataset(dataset.ratings, dataset.profiles,
                                         *calibration, &behaviors);
    Emit(csv ? CalibratedToCsv(result) : io::Dump(result), out);
    return 0;
  }

  if (report->parsed()) {
    const Deployment deployment = LoadDeploymentArtifact(the_deployment);
    const RatingDataset dataset = DatasetFromLog(the_log);
    std::optional<CalibrationParams> calibration;
    if (calibrated) calibration = CalibrationFrom(config, lambda, delta);
    const auto behaviors = deployment.BehaviorIndex();
    const std::string ext = csv ? ".csv" : ".json";
    if (comparison->parsed()) {
      const fs::path experts_path = Pick(experts, config.experts);
      if (experts_path.empty()) {
        throw Error(ErrorCode::kMissingPrerequisite,
                    "no expert ratings: pass --experts");
      }
      Require(experts_path, "synth --experts (or supply expert ratings)");
      const auto report_data = ComparisonForDataset(
          dataset, LoadExpertRatings(experts_path), behaviors, calibration);
      Emit(csv ? stats::ComparisonToCsv(report_data) : io::Dump(report_data),
           Pick(out, config.work_dir / ("comparison_report" + ext)).string());
      return 0;
    }
    const auto dist = DistributionsReport(dataset, behaviors, calibration);
    std::string text;
    if (csv) {
      text = "behavior_id,app_id,n,mean,level,count\n";
      for (const auto& d : dist.at("distributions")) {
        for (const auto& [level, count] : d.at("counts").items()) {
          text += io::CsvField(d.at("behavior_id").get<std::string>()) + "," +
                  io::CsvField(d.value("app_id", "")) + "," +
                  std::to_string(d.at("n").get<std::size_t>()) + "," +
                  io::FormatDouble(d.at("mean").get<double>()) + "," + level +
                  "," + std::to_string(count.get<std::size_t>()) + "\n";
        }
      }
    } else {
      text = io::Dump(dist);
    }
    Emit(text,
         Pick(out, config.work_dir / ("distributions_report" + ext)).string());
    return 0;
  }

  if (synth->parsed()) {
    synth_options.mix = ParseMix(mix_text);
    if (write_fixture) SaveDeployment(the_deployment, MakeStudyFixture());
    const Deployment deployment = LoadDeploymentArtifact(the_deployment);
    std::vector<DataAccessBehavior> served;
    for (const auto& q : deployment.QuestionSequence()) {
      served.push_back(*deployment.FindBehavior(q.behavior_id));
    }
    if (fs::exists(the_log) && !force) {
      throw Error(ErrorCode::kInvalidArgument,
                  the_log.string() + " exists; pass --force to overwrite");
    }
    const Population pop = GeneratePopulation(synth_options, served);
    WriteEventLines(the_log,
                    PopulationEvents(pop, synth_options.start_time_ms));
    if (!config.snapshot.empty() && fs::exists(config.snapshot)) {
      fs::remove(config.snapshot);  // stale against the new log
    }
    if (!synth_experts.empty()) {
      ExpertOptions eo;
      eo.item_seed = synth_options.seed;
      eo.item_effect_sd = synth_options.item_effect_sd;
      std::string text;
      for (const auto& r : GenerateExpertRatings(eo, served)) {
        text += nlohmann::json(r).dump() + "\n";
      }
      io::WriteTextFile(synth_experts, text);
    }
    Emit(io::Dump({{"raters", pop.profiles.size()},
                   {"ratings", pop.ratings.size()},
                   {"behaviors", served.size()},
                   {"event_log", the_log.string()}}),
         "-");
    return 0;
  }
  return 0;
}

}  // namespace
}  // namespace depra

int main(int argc, char** argv) {
  try {
    return depra::Run(argc, argv);
  } catch (const depra::MissingArtifact& e) {
    std::cerr << nlohmann::json{{"error", "MissingPrerequisite"},
                                {"message", e.what()},
                                {"artifact", e.path().string()}}
                     .dump()
              << "\n";
  } catch (const depra::Error& e) {
    std::cerr << nlohmann::json{{"error", depra::ErrorCodeName(e.code())},
                                {"message", e.what()}}
                     .dump()
              << "\n";
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "Internal"}, {"message", e.what()}}
                     .dump()
              << "\n";
  }
  return 1;
}
