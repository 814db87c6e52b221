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

#include "depra/clustering.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "depra/error.h"
#include "depra/io.h"
#include "depra/text.h"
#include "json_util.h"

namespace depra {
namespace {

using SparseVector = std::vector<std::pair<std::size_t, double>>;

// L2-normalised TF-IDF vectors for a list of documents, with sorted term
// indices so dot products are summed in a fixed order.
std::vector<SparseVector> TfidfVectors(
    const std::vector<const AppRecord*>& docs) {
  std::vector<std::map<std::string, double>> counts(docs.size());
  std::map<std::string, std::size_t> df;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (auto& token : text::ContentTokens(docs[i]->description)) {
      counts[i][token] += 1.0;
    }
    for (const auto& [term, c] : counts[i]) ++df[term];
  }
  std::map<std::string, std::size_t> index;
  for (const auto& [term, d] : df) index.emplace(term, index.size());

  const double n = static_cast<double>(docs.size());
  std::vector<SparseVector> out(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    double norm2 = 0.0;
    for (const auto& [term, tf] : counts[i]) {
      double idf =
          std::log((1.0 + n) / (1.0 + static_cast<double>(df[term]))) + 1.0;
      double w = tf * idf;
      out[i].emplace_back(index[term], w);
      norm2 += w * w;
    }
    if (norm2 > 0.0) {
      double inv = 1.0 / std::sqrt(norm2);
      for (auto& [idx, w] : out[i]) w *= inv;
    }
  }
  return out;
}

double CosineDistance(const SparseVector& a, const SparseVector& b) {
  if (a.empty() || b.empty()) return 1.0;
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      dot += a[i].second * b[j].second;
      ++i;
      ++j;
    } else if (a[i].first < b[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  return std::clamp(1.0 - dot, 0.0, 1.0);
}

using Matrix = std::vector<std::vector<double>>;

Matrix DistanceMatrix(const std::vector<SparseVector>& vectors) {
  const std::size_t n = vectors.size();
  Matrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d[i][j] = d[j][i] = CosineDistance(vectors[i], vectors[j]);
    }
  }
  return d;
}

std::vector<const AppRecord*> SortedById(std::span<const AppRecord> apps) {
  std::vector<const AppRecord*> sorted;
  sorted.reserve(apps.size());
  for (const auto& a : apps) sorted.push_back(&a);
  std::sort(sorted.begin(), sorted.end(),
            [](const AppRecord* a, const AppRecord* b) {
              return a->app_id < b->app_id;
            });
  return sorted;
}

void CheckSingleCategory(std::span<const AppRecord> apps) {
  if (apps.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot cluster an empty category");
  }
  for (const auto& app : apps) {
    if (app.market_category != apps.front().market_category) {
      throw Error(ErrorCode::kInvalidArgument,
                  "apps span categories " + apps.front().market_category +
                      " and " + app.market_category);
    }
  }
}

// Average-link agglomeration state. Each active group keeps the index of
// its first (smallest app_id) member; merging always keeps the lower index.
struct Agglomeration {
  Matrix link;                                   // group-to-group distance
  std::vector<std::vector<std::size_t>> members;  // empty when retired
  std::vector<bool> active;

  explicit Agglomeration(Matrix distances)
      : link(std::move(distances)),
        members(link.size()),
        active(link.size(), true) {
    for (std::size_t i = 0; i < link.size(); ++i) members[i] = {i};
  }

  void Merge(std::size_t keep, std::size_t drop) {
    const double nk = static_cast<double>(members[keep].size());
    const double nd = static_cast<double>(members[drop].size());
    for (std::size_t k = 0; k < link.size(); ++k) {
      if (!active[k] || k == keep || k == drop) continue;
      double merged = (nk * link[keep][k] + nd * link[drop][k]) / (nk + nd);
      link[keep][k] = link[k][keep] = merged;
    }
    members[keep].insert(members[keep].end(), members[drop].begin(),
                         members[drop].end());
    std::sort(members[keep].begin(), members[keep].end());
    members[drop].clear();
    active[drop] = false;
  }

  void Retire(std::size_t i) { active[i] = false; }
};

Cluster MakeCluster(std::string id, const std::string& category,
                    std::vector<std::string> members, bool outlier) {
  Cluster c;
  c.cluster_id = std::move(id);
  c.parent_category = category;
  c.member_app_ids = std::move(members);
  std::sort(c.member_app_ids.begin(), c.member_app_ids.end());
  c.outlier = outlier;
  return c;
}

std::int64_t NowMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::size_t MinClusterSize(std::size_t category_size) {
  return std::max<std::size_t>(2, category_size / 20);
}

CategoryClustering LexicalClusterer::ClusterCategory(
    std::span<const AppRecord> apps, std::size_t min_cluster_size) const {
  CheckSingleCategory(apps);
  if (min_cluster_size < 2) {
    throw Error(ErrorCode::kInvalidArgument, "min_cluster_size must be >= 2");
  }
  const std::string& category = apps.front().market_category;
  const auto docs = SortedById(apps);
  const std::size_t n = docs.size();

  CategoryClustering result;
  result.category = category;
  result.min_cluster_size = min_cluster_size;

  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> outliers;

  if (n < 2 * min_cluster_size) {
    result.too_few_apps = true;
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    groups.push_back(std::move(all));
  } else {
    Agglomeration agg(DistanceMatrix(TfidfVectors(docs)));
    // Standard merging phase.
    for (;;) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!agg.active[i]) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
          if (agg.active[j] && agg.link[i][j] < best) {
            best = agg.link[i][j];
            bi = i;
            bj = j;
          }
        }
      }
      if (!std::isfinite(best) || best > options_.max_link_distance) break;
      agg.Merge(bi, bj);
    }
    // Fold undersized groups, smallest first.
    for (;;) {
      std::size_t small = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (!agg.active[i] || agg.members[i].size() >= min_cluster_size) {
          continue;
        }
        if (small == n || agg.members[i].size() < agg.members[small].size()) {
          small = i;
        }
      }
      if (small == n) break;
      double best = std::numeric_limits<double>::infinity();
      std::size_t target = n;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == small || !agg.active[k]) continue;
        if (agg.link[small][k] < best) {
          best = agg.link[small][k];
          target = k;
        }
      }
      if (target == n || best >= 1.0) {
        outliers.insert(outliers.end(), agg.members[small].begin(),
                        agg.members[small].end());
        agg.Retire(small);
      } else {
        agg.Merge(std::min(small, target), std::max(small, target));
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (agg.active[i]) groups.push_back(agg.members[i]);
    }
  }

  // Groups are already ordered by their smallest member.
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<std::string> ids;
    for (std::size_t idx : groups[g]) ids.push_back(docs[idx]->app_id);
    result.clusters.push_back(MakeCluster(
        category + "-" + std::to_string(g), category, std::move(ids), false));
  }
  if (!outliers.empty()) {
    std::vector<std::string> ids;
    for (std::size_t idx : outliers) ids.push_back(docs[idx]->app_id);
    result.clusters.push_back(
        MakeCluster(category + "-outliers", category, std::move(ids), true));
  }
  for (auto& c : result.clusters) {
    c.keywords = ExtractKeywords(c, apps, options_.keywords_per_cluster);
  }
  return result;
}

PrecomputedClusterer PrecomputedClusterer::FromJsonFile(
    const std::filesystem::path& path) {
  auto j = io::ReadJsonFile(path);
  if (!j.is_object()) {
    throw Error(ErrorCode::kMalformedRecord,
                path.string() + ": expected an object of app_id -> topic");
  }
  std::map<std::string, int> assignments;
  for (const auto& [app_id, topic] : j.items()) {
    if (!topic.is_number_integer()) {
      throw Error(ErrorCode::kMalformedRecord,
                  path.string() + ": topic for " + app_id + " not an integer");
    }
    assignments.emplace(app_id, topic.get<int>());
  }
  return PrecomputedClusterer(std::move(assignments));
}

CategoryClustering PrecomputedClusterer::ClusterCategory(
    std::span<const AppRecord> apps, std::size_t min_cluster_size) const {
  CheckSingleCategory(apps);
  const std::string& category = apps.front().market_category;
  std::map<int, std::vector<std::string>> by_topic;
  for (const AppRecord* app : SortedById(apps)) {
    auto it = assignments_.find(app->app_id);
    by_topic[it == assignments_.end() ? -1 : std::max(it->second, -1)]
        .push_back(app->app_id);
  }
  CategoryClustering result;
  result.category = category;
  result.min_cluster_size = min_cluster_size;
  for (auto& [topic, ids] : by_topic) {
    if (topic < 0) continue;
    result.clusters.push_back(MakeCluster(
        category + "-" + std::to_string(topic), category, ids, false));
  }
  if (by_topic.contains(-1)) {
    result.clusters.push_back(MakeCluster(category + "-outliers", category,
                                          by_topic[-1], true));
  }
  for (auto& c : result.clusters) c.keywords = ExtractKeywords(c, apps);
  return result;
}

std::vector<std::string> ExtractKeywords(
    const Cluster& cluster, std::span<const AppRecord> category_apps,
    std::size_t k) {
  if (cluster.member_app_ids.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cluster has no members");
  }
  std::set<std::string_view> members(cluster.member_app_ids.begin(),
                                     cluster.member_app_ids.end());
  std::map<std::string, double> in_cluster;
  std::map<std::string, double> overall;
  double total_tokens = 0.0;
  for (const auto& app : category_apps) {
    auto tokens = text::ContentTokens(app.description);
    total_tokens += static_cast<double>(tokens.size());
    const bool member = members.contains(app.app_id);
    for (auto& t : tokens) {
      overall[t] += 1.0;
      if (member) in_cluster[t] += 1.0;
    }
  }
  const double docs = static_cast<double>(std::max<std::size_t>(
      category_apps.size(), 1));
  const double avg_tokens = std::max(total_tokens / docs, 1.0);

  std::vector<std::pair<double, std::string>> weighted;
  for (const auto& [term, tf] : in_cluster) {
    double f = std::max(overall[term], tf);
    weighted.emplace_back(tf * std::log(1.0 + avg_tokens / f), term);
  }
  std::sort(weighted.begin(), weighted.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < weighted.size() && i < std::min<std::size_t>(k, 10);
       ++i) {
    out.push_back(weighted[i].second);
  }
  return out;
}

Cluster MergeClusters(const Cluster& a, const Cluster& b,
                      std::span<const AppRecord> category_apps) {
  if (a.parent_category != b.parent_category) {
    throw Error(ErrorCode::kCrossCategoryMerge,
                "cannot merge " + a.cluster_id + " (" + a.parent_category +
                    ") with " + b.cluster_id + " (" + b.parent_category + ")");
  }
  std::set<std::string> ids(a.member_app_ids.begin(), a.member_app_ids.end());
  ids.insert(b.member_app_ids.begin(), b.member_app_ids.end());
  Cluster merged = MakeCluster(a.cluster_id + "+" + b.cluster_id,
                               a.parent_category,
                               std::vector<std::string>(ids.begin(), ids.end()),
                               false);
  merged.label = a.label.empty() ? b.label : a.label;
  merged.keywords = ExtractKeywords(merged, category_apps);
  return merged;
}

double SilhouetteScore(const CategoryClustering& clustering,
                       std::span<const AppRecord> category_apps) {
  std::vector<const Cluster*> clusters;
  for (const auto& c : clustering.clusters) {
    if (!c.outlier) clusters.push_back(&c);
  }
  if (clusters.size() < 2) return 0.0;

  const auto docs = SortedById(category_apps);
  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < docs.size(); ++i) index[docs[i]->app_id] = i;
  const Matrix d = DistanceMatrix(TfidfVectors(docs));

  std::vector<std::vector<std::size_t>> groups;
  for (const Cluster* c : clusters) {
    std::vector<std::size_t> g;
    for (const auto& id : c->member_app_ids) {
      auto it = index.find(id);
      if (it != index.end()) g.push_back(it->second);
    }
    groups.push_back(std::move(g));
  }
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t i : groups[g]) {
      ++count;
      if (groups[g].size() < 2) continue;  // singleton contributes 0
      double a = 0.0;
      for (std::size_t j : groups[g]) a += (i == j) ? 0.0 : d[i][j];
      a /= static_cast<double>(groups[g].size() - 1);
      double b = std::numeric_limits<double>::infinity();
      for (std::size_t h = 0; h < groups.size(); ++h) {
        if (h == g || groups[h].empty()) continue;
        double mean = 0.0;
        for (std::size_t j : groups[h]) mean += d[i][j];
        b = std::min(b, mean / static_cast<double>(groups[h].size()));
      }
      double denom = std::max(a, b);
      if (denom > 0.0 && std::isfinite(b)) total += (b - a) / denom;
    }
  }
  return count == 0 ? 0.0 : total / static_cast<double>(count);
}

const Cluster* ClusterCatalog::Find(std::string_view cluster_id) const {
  for (const auto& cat : categories_) {
    for (const auto& c : cat.clusters) {
      if (c.cluster_id == cluster_id) return &c;
    }
  }
  return nullptr;
}

const Cluster& ClusterCatalog::Merge(std::string_view id_a,
                                     std::string_view id_b,
                                     std::span<const AppRecord> apps,
                                     std::string_view curator) {
  const Cluster* a = Find(id_a);
  const Cluster* b = Find(id_b);
  if (a == nullptr || b == nullptr) {
    throw Error(ErrorCode::kNotFound,
                "unknown cluster " + std::string(a == nullptr ? id_a : id_b));
  }
  std::vector<AppRecord> category_apps;
  for (const auto& app : apps) {
    if (app.market_category == a->parent_category) {
      category_apps.push_back(app);
    }
  }
  Cluster merged = MergeClusters(*a, *b, category_apps);
  const std::string a_id = a->cluster_id;
  const std::string b_id = b->cluster_id;

  for (auto& cat : categories_) {
    if (cat.category != merged.parent_category) continue;
    auto pos = std::find_if(cat.clusters.begin(), cat.clusters.end(),
                            [&](const Cluster& c) { return c.cluster_id == a_id; });
    const std::size_t at = static_cast<std::size_t>(pos - cat.clusters.begin());
    cat.clusters[at] = merged;
    if (b_id != a_id) {
      std::erase_if(cat.clusters,
                    [&](const Cluster& c) { return c.cluster_id == b_id; });
    }
    Audit({{"op", "merge"},
           {"a", a_id},
           {"b", b_id},
           {"result", merged.cluster_id},
           {"members", merged.member_app_ids},
           {"curator", curator},
           {"at", NowMillis()}});
    for (const auto& c : cat.clusters) {
      if (c.cluster_id == merged.cluster_id) return c;
    }
  }
  throw Error(ErrorCode::kNotFound, "category vanished during merge");
}

void ClusterCatalog::Relabel(std::string_view cluster_id, std::string label,
                             std::string_view curator) {
  for (auto& cat : categories_) {
    for (auto& c : cat.clusters) {
      if (c.cluster_id != cluster_id) continue;
      Audit({{"op", "relabel"},
             {"cluster_id", c.cluster_id},
             {"from", c.label},
             {"to", label},
             {"curator", curator},
             {"at", NowMillis()}});
      c.label = std::move(label);
      return;
    }
  }
  throw Error(ErrorCode::kNotFound,
              "unknown cluster " + std::string(cluster_id));
}

void ClusterCatalog::Audit(const nlohmann::json& entry) const {
  if (audit_log_.empty()) return;
  std::ofstream out(audit_log_, std::ios::app);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot append to " + audit_log_.string());
  }
  out << entry.dump() << '\n';
}

std::vector<CategoryClustering> ClusterCorpus(std::span<const AppRecord> apps,
                                              const Clusterer& clusterer) {
  std::map<std::string, std::vector<AppRecord>> by_category;
  for (const auto& app : apps) by_category[app.market_category].push_back(app);
  std::vector<CategoryClustering> out;
  for (auto& [category, members] : by_category) {
    out.push_back(
        clusterer.ClusterCategory(members, MinClusterSize(members.size())));
  }
  return out;
}

void to_json(nlohmann::json& j, const Cluster& v) {
  j = {{"cluster_id", v.cluster_id},
       {"parent_category", v.parent_category},
       {"member_app_ids", v.member_app_ids},
       {"keywords", v.keywords},
       {"label", v.label},
       {"outlier", v.outlier}};
}

void from_json(const nlohmann::json& j, Cluster& v) {
  using json_util::Optional;
  using json_util::Required;
  v.cluster_id = Required<std::string>(j, "cluster_id");
  v.parent_category = Required<std::string>(j, "parent_category");
  v.member_app_ids = Required<std::vector<std::string>>(j, "member_app_ids");
  std::sort(v.member_app_ids.begin(), v.member_app_ids.end());
  v.keywords = Optional<std::vector<std::string>>(j, "keywords", {});
  v.label = Optional<std::string>(j, "label", "");
  v.outlier = Optional<bool>(j, "outlier", false);
}

void to_json(nlohmann::json& j, const CategoryClustering& v) {
  j = {{"category", v.category},
       {"clusters", v.clusters},
       {"too_few_apps", v.too_few_apps},
       {"min_cluster_size", v.min_cluster_size}};
}

void from_json(const nlohmann::json& j, CategoryClustering& v) {
  using json_util::Optional;
  using json_util::Required;
  v.category = Required<std::string>(j, "category");
  v.clusters = Required<std::vector<Cluster>>(j, "clusters");
  v.too_few_apps = Optional<bool>(j, "too_few_apps", false);
  v.min_cluster_size = Optional<std::size_t>(j, "min_cluster_size", 0);
}

nlohmann::json ClustersToJson(const std::vector<CategoryClustering>& c) {
  return {{"categories", c}};
}

std::vector<CategoryClustering> ClustersFromJson(const nlohmann::json& j) {
  return json_util::Required<std::vector<CategoryClustering>>(j, "categories");
}

}  // namespace depra
