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

#ifndef DEPRA_CLUSTERING_H_
#define DEPRA_CLUSTERING_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "depra/model.h"

namespace depra {

// A functionally coherent subgroup of one marketplace category.
struct Cluster {
  std::string cluster_id;
  std::string parent_category;
  std::vector<std::string> member_app_ids;  // sorted
  std::vector<std::string> keywords;        // at most 10
  std::string label;
  // Holds apps that joined no cluster.
  bool outlier = false;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct CategoryClustering {
  std::string category;
  std::vector<Cluster> clusters;  // outlier cluster, if any, is last
  // Category held fewer than 2 * min_cluster_size apps and was returned as
  // a single cluster.
  bool too_few_apps = false;
  std::size_t min_cluster_size = 0;
};

// Minimum topic size for a category: its size divided by 20, never below 2.
std::size_t MinClusterSize(std::size_t category_size);

class Clusterer {
 public:
  virtual ~Clusterer() = default;
  // `apps` must share one market_category; min_cluster_size >= 2.
  virtual CategoryClustering ClusterCategory(std::span<const AppRecord> apps,
                                             std::size_t min_cluster_size)
      const = 0;
};

// TF-IDF vectors over description tokens, average-link agglomerative
// grouping under cosine distance. Undersized groups are folded into their
// nearest cluster, or into the outlier set when they share no vocabulary
// with any other group. Output is independent of input order.
class LexicalClusterer : public Clusterer {
 public:
  struct Options {
    // Groups stop merging once the closest pair is farther apart than this.
    double max_link_distance = 0.9;
    std::size_t keywords_per_cluster = 10;
  };

  LexicalClusterer() = default;
  explicit LexicalClusterer(Options options) : options_(options) {}

  CategoryClustering ClusterCategory(std::span<const AppRecord> apps,
                                     std::size_t min_cluster_size)
      const override;

 private:
  Options options_;
};

// Replays assignments produced by an external topic model:
// {"<app_id>": <topic>, ...} with topic -1 meaning outlier.
class PrecomputedClusterer : public Clusterer {
 public:
  explicit PrecomputedClusterer(std::map<std::string, int> assignments)
      : assignments_(std::move(assignments)) {}
  static PrecomputedClusterer FromJsonFile(const std::filesystem::path& path);

  CategoryClustering ClusterCategory(std::span<const AppRecord> apps,
                                     std::size_t min_cluster_size)
      const override;

 private:
  std::map<std::string, int> assignments_;
};

// Class-based term weighting: weight(t) = tf(t, cluster) *
// log(1 + A / f(t)), with f(t) the count of t over every description in
// `category_apps` and A the mean token count per description. Top `k`
// terms, ties broken alphabetically.
std::vector<std::string> ExtractKeywords(const Cluster& cluster,
                                         std::span<const AppRecord> category_apps,
                                         std::size_t k = 10);

// Union of members with recomputed keywords and id "<a>+<b>". Throws
// kCrossCategoryMerge.
Cluster MergeClusters(const Cluster& a, const Cluster& b,
                      std::span<const AppRecord> category_apps);

// Mean silhouette under cosine distance over non-outlier members; 0 when
// fewer than two clusters exist. Diagnostic only.
double SilhouetteScore(const CategoryClustering& clustering,
                       std::span<const AppRecord> category_apps);

// Curator edits over a full clusters catalog. Each edit is appended to the
// audit log (JSON lines) when a path is set.
class ClusterCatalog {
 public:
  ClusterCatalog() = default;
  explicit ClusterCatalog(std::vector<CategoryClustering> categories)
      : categories_(std::move(categories)) {}

  const std::vector<CategoryClustering>& categories() const {
    return categories_;
  }
  const Cluster* Find(std::string_view cluster_id) const;

  // Retires both inputs and returns the merged cluster.
  const Cluster& Merge(std::string_view id_a, std::string_view id_b,
                       std::span<const AppRecord> apps,
                       std::string_view curator);
  void Relabel(std::string_view cluster_id, std::string label,
               std::string_view curator);

  void set_audit_log(std::filesystem::path path) {
    audit_log_ = std::move(path);
  }

 private:
  void Audit(const nlohmann::json& entry) const;

  std::vector<CategoryClustering> categories_;
  std::filesystem::path audit_log_;
};

// Groups apps by market_category and clusters each category.
std::vector<CategoryClustering> ClusterCorpus(std::span<const AppRecord> apps,
                                              const Clusterer& clusterer);

void to_json(nlohmann::json& j, const Cluster& v);
void from_json(const nlohmann::json& j, Cluster& v);
void to_json(nlohmann::json& j, const CategoryClustering& v);
void from_json(const nlohmann::json& j, CategoryClustering& v);

// clusters.json: {"categories": [...]}
nlohmann::json ClustersToJson(const std::vector<CategoryClustering>& c);
std::vector<CategoryClustering> ClustersFromJson(const nlohmann::json& j);

}  // namespace depra

#endif  // DEPRA_CLUSTERING_H_
