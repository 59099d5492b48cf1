#include "edocr/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace edocr {

const char* head_strategy_name(HeadStrategy s) {
    switch (s) {
        case HeadStrategy::Edocr: return "edocr";
        case HeadStrategy::MaxResidual: return "max_residual";
        case HeadStrategy::RandomRotation: return "random_rotation";
    }
    return "?";
}

std::optional<HeadStrategy> parse_head_strategy(const std::string& name) {
    if (name == "edocr") return HeadStrategy::Edocr;
    if (name == "max_residual") return HeadStrategy::MaxResidual;
    if (name == "random_rotation") return HeadStrategy::RandomRotation;
    return std::nullopt;
}

const char* cluster_method_name(ClusterMethod m) {
    return m == ClusterMethod::KMeans ? "kmeans" : "grid";
}

std::optional<ClusterMethod> parse_cluster_method(const std::string& name) {
    if (name == "kmeans") return ClusterMethod::KMeans;
    if (name == "grid") return ClusterMethod::Grid;
    return std::nullopt;
}

namespace {

std::vector<Cluster> build_clusters(std::uint32_t count, const std::vector<std::uint32_t>& assignment) {
    std::vector<Cluster> clusters(count);
    for (std::uint32_t c = 0; c < count; ++c) clusters[c].id = c;
    for (NodeId i = 0; i < assignment.size(); ++i)
        clusters[assignment[i]].members.push_back(i);
    return clusters;
}

/// Moves one node out of the largest cluster into each empty one.
void repair_empty(std::vector<std::uint32_t>& assignment, std::uint32_t count,
                  const Network& network, const std::vector<Position>& centroids) {
    for (std::uint32_t c = 0; c < count; ++c) {
        std::vector<std::uint32_t> sizes(count, 0);
        for (auto a : assignment) ++sizes[a];
        if (sizes[c] > 0) continue;
        const auto donor = static_cast<std::uint32_t>(
            std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
        // Pick the donor member farthest from the donor centroid.
        NodeId pick = 0;
        double best = -1.0;
        for (NodeId i = 0; i < assignment.size(); ++i) {
            if (assignment[i] != donor) continue;
            const double d = distance(network.node(i).position, centroids[donor]);
            if (d > best) {
                best = d;
                pick = i;
            }
        }
        assignment[pick] = c;
    }
}

std::vector<Cluster> kmeans_clusters(const Network& network, Rng& rng) {
    const std::uint32_t n = network.config().node_count;
    const std::uint32_t m = network.config().cluster_count;

    // Seed centroids with M distinct node positions (partial Fisher-Yates).
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    for (std::uint32_t i = 0; i < m; ++i) {
        const std::uint32_t j = i + rng.below(n - i);
        std::swap(order[i], order[j]);
    }
    std::vector<Position> centroids(m);
    for (std::uint32_t c = 0; c < m; ++c) centroids[c] = network.node(order[c]).position;

    std::vector<std::uint32_t> assignment(n, 0);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (NodeId i = 0; i < n; ++i) {
            std::uint32_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::uint32_t c = 0; c < m; ++c) {
                const double d = distance(network.node(i).position, centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assignment[i] != best) {
                assignment[i] = best;
                changed = true;
            }
        }
        for (std::uint32_t c = 0; c < m; ++c) {
            double sx = 0.0, sy = 0.0;
            std::uint32_t cnt = 0;
            for (NodeId i = 0; i < n; ++i) {
                if (assignment[i] != c) continue;
                sx += network.node(i).position.x;
                sy += network.node(i).position.y;
                ++cnt;
            }
            if (cnt > 0) centroids[c] = {sx / cnt, sy / cnt};
        }
        if (!changed) break;
    }
    repair_empty(assignment, m, network, centroids);
    return build_clusters(m, assignment);
}

std::vector<Cluster> grid_clusters(const Network& network) {
    const auto& cfg = network.config();
    const std::uint32_t n = cfg.node_count;
    const std::uint32_t m = cfg.cluster_count;
    const auto cols = std::max<std::uint32_t>(
        1, static_cast<std::uint32_t>(
               std::ceil(std::sqrt(static_cast<double>(m) * cfg.field_width / cfg.field_height))));
    const std::uint32_t rows = (m + cols - 1) / cols;

    std::vector<std::uint32_t> assignment(n, 0);
    for (NodeId i = 0; i < n; ++i) {
        const Position p = network.node(i).position;
        auto col = static_cast<std::uint32_t>(p.x / cfg.field_width * cols);
        auto row = static_cast<std::uint32_t>(p.y / cfg.field_height * rows);
        col = std::min(col, cols - 1);
        row = std::min(row, rows - 1);
        assignment[i] = std::min(row * cols + col, m - 1);
    }
    std::vector<Position> centroids(m, {cfg.field_width / 2, cfg.field_height / 2});
    repair_empty(assignment, m, network, centroids);
    return build_clusters(m, assignment);
}

}  // namespace

std::vector<Cluster> generate_clusters(const Network& network, ClusterMethod method, Rng& rng) {
    if (network.config().cluster_count > network.config().node_count)
        throw std::invalid_argument("cluster_count exceeds node_count");
    return method == ClusterMethod::KMeans ? kmeans_clusters(network, rng)
                                           : grid_clusters(network);
}

int cost_from_unit(double unit) {
    return static_cast<int>(unit * 250.0);
}

int node_cost(Rng& rng) {
    return cost_from_unit(rng.uniform());
}

std::vector<int> draw_costs(const Network& network, Rng& rng) {
    std::vector<int> costs(network.config().node_count);
    for (auto& c : costs) c = node_cost(rng);
    return costs;
}

std::optional<NodeId> select_local_head(const Cluster& cluster,
                                        std::span<const double> residuals,
                                        std::span<const int> costs) {
    std::optional<NodeId> best;
    for (NodeId id : cluster.members) {
        if (residuals[id] <= 0.0) continue;  // dead
        if (!best) {
            best = id;
            continue;
        }
        const NodeId b = *best;
        if (residuals[id] > residuals[b] ||
            (residuals[id] == residuals[b] &&
             (costs[id] > costs[b] || (costs[id] == costs[b] && id < b))))
            best = id;
    }
    return best;
}

double energy_density(NodeId node, NodeId local_head, const Network& network) {
    const Node& self = network.node(node);
    double numerator = self.residual_energy;
    for (NodeId j : network.neighbors(node)) {
        if (network.is_sink(j)) continue;  // the sink carries no battery
        numerator += network.node(j).residual_energy;
    }
    const double dist =
        std::max(distance(self.position, network.node(local_head).position), 1e-6);
    return numerator / (dist * network.config().coverage_range);
}

namespace {

/// Global lexicographic max over all alive sensors: residual desc, cost
/// desc, id asc.
std::optional<NodeId> global_best(const Network& network, std::span<const int> costs) {
    std::optional<NodeId> best;
    for (NodeId i = 0; i < network.config().node_count; ++i) {
        const Node& n = network.node(i);
        if (!n.alive) continue;
        if (!best) {
            best = i;
            continue;
        }
        const Node& b = network.node(*best);
        if (n.residual_energy > b.residual_energy ||
            (n.residual_energy == b.residual_energy && costs[i] > costs[*best]))
            best = i;
    }
    return best;
}

}  // namespace

HeadAssignment select_heads_edocr(const std::vector<Cluster>& clusters,
                                  const Network& network, Rng& rng) {
    HeadAssignment out;
    out.head_by_cluster.resize(clusters.size());

    const std::vector<int> costs = draw_costs(network, rng);
    const auto local = global_best(network, costs);
    if (!local) return out;  // everyone dead

    ClusterId local_cluster = 0;
    for (const Cluster& c : clusters)
        if (std::find(c.members.begin(), c.members.end(), *local) != c.members.end())
            local_cluster = c.id;

    out.local_head = *local;
    out.local_cluster = local_cluster;
    out.head_by_cluster[local_cluster] = *local;

    for (const Cluster& c : clusters) {
        if (c.id == local_cluster) continue;
        std::optional<NodeId> best;
        double best_density = -1.0;
        for (NodeId id : c.members) {  // ascending ids, so ties keep the lower id
            if (!network.node(id).alive) continue;
            const double d = energy_density(id, *local, network);
            if (!best || d > best_density) {
                best = id;
                best_density = d;
            }
        }
        out.head_by_cluster[c.id] = best;  // empty for a fully-dead cluster
    }
    return out;
}

HeadAssignment select_heads_baseline(HeadStrategy strategy,
                                     const std::vector<Cluster>& clusters,
                                     const Network& network, Rng& rng) {
    HeadAssignment out;
    out.head_by_cluster.resize(clusters.size());
    for (const Cluster& c : clusters) {
        std::vector<NodeId> alive;
        for (NodeId id : c.members)
            if (network.node(id).alive) alive.push_back(id);
        if (alive.empty()) continue;
        if (strategy == HeadStrategy::MaxResidual) {
            NodeId best = alive.front();
            for (NodeId id : alive)
                if (network.node(id).residual_energy > network.node(best).residual_energy)
                    best = id;
            out.head_by_cluster[c.id] = best;
        } else {
            out.head_by_cluster[c.id] = alive[rng.below(static_cast<std::uint32_t>(alive.size()))];
        }
    }
    return out;
}

HeadAssignment select_heads(HeadStrategy strategy, const std::vector<Cluster>& clusters,
                            const Network& network, Rng& rng) {
    if (strategy == HeadStrategy::Edocr) return select_heads_edocr(clusters, network, rng);
    return select_heads_baseline(strategy, clusters, network, rng);
}

}  // namespace edocr
