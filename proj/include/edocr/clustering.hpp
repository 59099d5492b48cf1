#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edocr/net_model.hpp"

namespace edocr {

using ClusterId = std::uint32_t;

struct Cluster {
    ClusterId id = 0;
    std::vector<NodeId> members;  // ascending node ids
    std::optional<NodeId> head;
};

enum class HeadStrategy { Edocr, MaxResidual, RandomRotation };
enum class ClusterMethod { KMeans, Grid };

const char* head_strategy_name(HeadStrategy s);
std::optional<HeadStrategy> parse_head_strategy(const std::string& name);
const char* cluster_method_name(ClusterMethod m);
std::optional<ClusterMethod> parse_cluster_method(const std::string& name);

/// Partitions the sensor nodes into exactly cluster_count non-empty clusters.
/// KMeans runs seeded Lloyd iterations on node positions; Grid slices the
/// field into cells. Empty clusters are repaired by stealing from the
/// largest one. Deterministic for a given rng state.
std::vector<Cluster> generate_clusters(const Network& network, ClusterMethod method, Rng& rng);

/// Cost_i = int(rand() * 250).
int cost_from_unit(double unit);
int node_cost(Rng& rng);

/// Draws one cost per sensor node in ascending id order.
std::vector<int> draw_costs(const Network& network, Rng& rng);

/// Lexicographic max over alive members: residual desc, cost desc, id asc.
/// Empty when every member is dead.
std::optional<NodeId> select_local_head(const Cluster& cluster,
                                        std::span<const double> residuals,
                                        std::span<const int> costs);

/// Energy density: sum of residual energy over the node and its alive
/// sensor neighbors in coverage range (the battery-less sink is excluded),
/// divided by distance-to-local-head times
/// coverage range. Denominator distance is clamped below at 1e-6 m.
double energy_density(NodeId node, NodeId local_head, const Network& network);

struct HeadAssignment {
    /// head_by_cluster[i] is empty when cluster i has no alive member.
    std::vector<std::optional<NodeId>> head_by_cluster;
    std::optional<ClusterId> local_cluster;  // the step-1 cluster (EDOCR only)
    std::optional<NodeId> local_head;
};

/// Two-step election: step 1 crowns the global lexicographic-max node (by
/// residual, then freshly drawn cost, then id) as the local head of its own
/// cluster; step 2 gives every other live cluster the member with maximal
/// energy density relative to the local head, ties to the lower id.
HeadAssignment select_heads_edocr(const std::vector<Cluster>& clusters,
                                  const Network& network, Rng& rng);

/// MaxResidual: per-cluster argmax residual (lower id on ties).
/// RandomRotation: uniform alive member per cluster.
HeadAssignment select_heads_baseline(HeadStrategy strategy,
                                     const std::vector<Cluster>& clusters,
                                     const Network& network, Rng& rng);

HeadAssignment select_heads(HeadStrategy strategy, const std::vector<Cluster>& clusters,
                            const Network& network, Rng& rng);

}  // namespace edocr
