#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "edocr/routing.hpp"
#include "oracles.hpp"

using namespace edocr;

namespace {

NetworkConfig line_config(std::uint32_t n, double link_range) {
    NetworkConfig c;
    c.node_count = n;
    c.cluster_count = 1;
    c.field_width = 10000.0;
    c.field_height = 100.0;
    c.coverage_range = link_range / 2;
    c.ch_link_range = link_range;
    c.sink_position = {0, 0};
    c.initial_energy = 100.0;  // several unit charges per node
    return c;
}

void kill(Network& net, NodeId id) {
    net.node_mut(id).time_tx = 2.0 * net.node(id).initial_energy;
    residual_energy(net.node_mut(id), net.energy_model());
}

}  // namespace

TEST_CASE("overlay: two-vertex and out-of-range cases") {
    EnergyModel m;
    {
        Network net(line_config(1, 100.0), m, {{50, 0}});
        const std::vector<NodeId> heads{0};
        const auto g = build_overlay(heads, net.sink_id(), net);
        REQUIRE(g.vertices.size() == 2);
        CHECK(g.adj[0] == std::vector<std::uint32_t>{1});
        CHECK(g.adj[1] == std::vector<std::uint32_t>{0});
    }
    {
        Network net(line_config(2, 100.0), m, {{200, 0}, {400, 0}});
        const std::vector<NodeId> heads{0, 1};
        const auto g = build_overlay(heads, net.sink_id(), net);
        for (const auto& adj : g.adj) CHECK(adj.empty());
    }
}

TEST_CASE("overlay edge set equals the all-pairs scan") {
    EnergyModel m;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        NetworkConfig c;
        c.coverage_range = 250;
        c.ch_link_range = 500;
        Network net(c, m, rng);
        std::vector<NodeId> heads;
        for (NodeId id = 0; id < 20; ++id) heads.push_back(id);
        const auto g = build_overlay(heads, net.sink_id(), net);
        for (std::size_t i = 0; i < g.vertices.size(); ++i) {
            for (std::size_t j = 0; j < g.vertices.size(); ++j) {
                const bool expect =
                    i != j && distance(net.node(g.vertices[i]).position,
                                       net.node(g.vertices[j]).position) <= c.ch_link_range;
                const bool got = std::find(g.adj[i].begin(), g.adj[i].end(), j) != g.adj[i].end();
                CHECK(got == expect);
            }
        }
    }
}

TEST_CASE("depths: base case and path graph") {
    EnergyModel m;
    {
        Network net(line_config(1, 10.0), m, {{5000, 50}});
        const auto g = build_overlay(std::vector<NodeId>{}, net.sink_id(), net);
        const auto d = compute_depths(g, net.sink_id(), 1);
        REQUIRE(d.depth.size() == 1);
        CHECK(d.depth[0] == 0);
        CHECK(d.depth_of(g, net.sink_id()) == 0);
    }
    {
        // sink(0,0) - head1(90,0) - head0(180,0), link range 100
        Network net(line_config(2, 100.0), m, {{180, 0}, {90, 0}});
        const std::vector<NodeId> heads{0, 1};
        const auto g = build_overlay(heads, net.sink_id(), net);
        const auto d = compute_depths(g, net.sink_id(), 1);
        CHECK(d.depth_of(g, 0) == 2);
        CHECK(d.depth_of(g, 1) == 1);
    }
}

TEST_CASE("depths equal Floyd-Warshall on random overlays") {
    EnergyModel m;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Rng rng(seed);
        NetworkConfig c;
        c.node_count = 25;
        c.cluster_count = 1;
        c.ch_link_range = 350;
        Network net(c, m, rng);
        std::vector<NodeId> heads;
        for (NodeId id = 0; id < 12; ++id) heads.push_back(id);
        const auto g = build_overlay(heads, net.sink_id(), net);
        const auto d = compute_depths(g, net.sink_id(), seed);
        const auto fw = oracle::floyd_warshall_hops(oracle::overlay_adjacency(g));
        const auto sink_idx = *g.index_of(net.sink_id());
        for (std::size_t i = 0; i < g.vertices.size(); ++i)
            CHECK(d.depth[i] == fw[sink_idx][i]);
    }
}

namespace {

/// Chain fixture: sink at x=0, heads at x = 90, 180, ... (link range 100),
/// one cluster per head, members co-located with their head.
struct Chain {
    EnergyModel model;
    Network net;
    std::vector<Cluster> clusters;
    OverlayGraph overlay;
    DepthField depths;
    Trace trace;

    explicit Chain(std::uint32_t heads_n, std::uint64_t epoch = 1)
        : net(line_config(2 * heads_n, 100.0), model, positions(heads_n)) {
        std::vector<NodeId> head_ids;
        for (std::uint32_t i = 0; i < heads_n; ++i) {
            // members: head 2i and plain member 2i+1
            clusters.push_back({i, {2 * i, 2 * i + 1}, 2 * i});
            head_ids.push_back(2 * i);
        }
        overlay = build_overlay(head_ids, net.sink_id(), net);
        depths = compute_depths(overlay, net.sink_id(), epoch);
    }

    static std::vector<Position> positions(std::uint32_t heads_n) {
        std::vector<Position> p;
        for (std::uint32_t i = 0; i < heads_n; ++i) {
            const double x = 90.0 * (i + 1);
            p.push_back({x, 0});
            p.push_back({x, 10});
        }
        return p;
    }
};

}  // namespace

TEST_CASE("discover: one-hop route") {
    Chain chain(1);
    const auto r = discover_route(1, chain.depths, chain.overlay, chain.clusters, chain.net,
                                  {}, chain.trace, 1);
    REQUIRE(r.route.has_value());
    CHECK(r.route->hops == std::vector<NodeId>{0});
    CHECK(chain.depths.depth_of(chain.overlay, 0) == 1);
}

TEST_CASE("discover: equal-depth tie breaks to the lower id") {
    // Diamond: head 0 at depth 2 sees heads 2 and 4, both depth 1.
    EnergyModel m;
    NetworkConfig c = line_config(6, 100.0);
    Network net(c, m, {{160, 0},  {160, 10},   // head 0, depth 2
                       {80, 40},  {80, 50},    // head 2, depth 1
                       {80, -40}, {80, -50}}); // head 4, depth 1
    std::vector<Cluster> clusters{{0, {0, 1}, 0}, {1, {2, 3}, 2}, {2, {4, 5}, 4}};
    const std::vector<NodeId> heads{0, 2, 4};
    const auto g = build_overlay(heads, net.sink_id(), net);
    const auto d = compute_depths(g, net.sink_id(), 1);
    REQUIRE(d.depth_of(g, 0) == 2);
    REQUIRE(d.depth_of(g, 2) == 1);
    REQUIRE(d.depth_of(g, 4) == 1);
    Trace trace;
    const auto r = discover_route(1, d, g, clusters, net, {}, trace, 1);
    REQUIRE(r.route.has_value());
    CHECK(r.route->hops == std::vector<NodeId>{0, 2});
}

TEST_CASE("discover: failures") {
    Chain chain(2);
    kill(chain.net, 3);
    const auto dead = discover_route(3, chain.depths, chain.overlay, chain.clusters, chain.net,
                                     {}, chain.trace, 1);
    CHECK(dead.failure == DiscoveryFailure::SourceDead);

    // Unreachable head: disconnect head 2 by moving it out of range.
    Chain far(2);
    far.net.node_mut(2).position = {5000, 0};
    far.overlay = build_overlay(std::vector<NodeId>{0, 2}, far.net.sink_id(), far.net);
    far.depths = compute_depths(far.overlay, far.net.sink_id(), 1);
    const auto lost = discover_route(3, far.depths, far.overlay, far.clusters, far.net,
                                     {}, far.trace, 1);
    CHECK(lost.failure == DiscoveryFailure::RouteNotFound);
}

TEST_CASE("discover: flood charges the reached component") {
    Chain chain(3);
    const double before = chain.net.total_sensor_residual();
    const auto r = discover_route(5, chain.depths, chain.overlay, chain.clusters, chain.net,
                                  {}, chain.trace, 1);
    REQUIRE(r.route.has_value());
    const double drawn = before - chain.net.total_sensor_residual();
    // Origin head pays 1 tx; the two other heads pay rx+tx; sink pays nothing.
    CHECK(drawn == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(r.control_energy == doctest::Approx(drawn).epsilon(1e-12));
}

TEST_CASE("discover: route hop count equals BFS depth on seeded topologies") {
    EnergyModel m;
    int found = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Rng rng(seed);
        NetworkConfig c;
        c.node_count = 50;
        c.cluster_count = 7;
        c.coverage_range = 250;
        c.ch_link_range = 500;
        c.initial_energy = 1e9;  // keep everything alive through the flood
        Network net(c, m, rng);
        auto clusters = generate_clusters(net, ClusterMethod::KMeans, rng);
        std::vector<NodeId> head_ids;
        for (auto& cl : clusters) {
            cl.head = cl.members[rng.below(static_cast<std::uint32_t>(cl.members.size()))];
            head_ids.push_back(*cl.head);
        }
        const auto g = build_overlay(head_ids, net.sink_id(), net);
        const auto d = compute_depths(g, net.sink_id(), seed);
        const auto fw = oracle::floyd_warshall_hops(oracle::overlay_adjacency(g));
        const auto sink_idx = *g.index_of(net.sink_id());
        Trace trace;
        for (NodeId source = 0; source < c.node_count; ++source) {
            const auto r = discover_route(source, d, g, clusters, net, {}, trace, 1);
            ClusterId own = 0;
            for (const auto& cl : clusters)
                for (NodeId id : cl.members)
                    if (id == source) own = cl.id;
            const NodeId head = *clusters[own].head;
            const int depth = fw[sink_idx][*g.index_of(head)];
            if (!r.route) {
                CHECK(depth == -1);
                continue;
            }
            ++found;
            CHECK(static_cast<int>(r.route->hops.size()) == depth);
            // Strictly decreasing depth along the hops.
            for (std::size_t i = 0; i + 1 < r.route->hops.size(); ++i) {
                CHECK(d.depth_of(g, r.route->hops[i]) ==
                      d.depth_of(g, r.route->hops[i + 1]) + 1);
            }
            CHECK(r.route->hops.front() == head);
        }
    }
    CHECK(found > 100);  // the check must actually bite
}

TEST_CASE("forward: delivery charges every hop") {
    Chain chain(3);
    Route route{5, {4, 2, 0}, chain.net.sink_id(), 1};
    const double before = chain.net.total_sensor_residual();
    const auto out = forward_packet(route, 1, chain.net, {}, chain.trace, 2);
    CHECK(out.kind == DeliveryKind::Delivered);
    // source tx + head4 rx+tx + head2 rx+tx + head0 rx+tx = 7 packet charges
    CHECK(before - chain.net.total_sensor_residual() == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(out.data_energy == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("forward: dead hop drops the packet, downstream untouched") {
    Chain chain(3);
    kill(chain.net, 2);
    const double head0_before = chain.net.node(0).residual_energy;
    Route route{5, {4, 2, 0}, chain.net.sink_id(), 1};
    const auto out = forward_packet(route, 1, chain.net, {}, chain.trace, 2);
    CHECK(out.kind == DeliveryKind::Dropped);
    REQUIRE(out.drop_hop.has_value());
    CHECK(*out.drop_hop == 1);
    CHECK(chain.net.node(0).residual_energy == head0_before);
}

TEST_CASE("forward: stale epoch is rejected without charges") {
    Chain chain(2);
    Route route{3, {2, 0}, chain.net.sink_id(), 1};
    const double before = chain.net.total_sensor_residual();
    const auto out = forward_packet(route, 2, chain.net, {}, chain.trace, 2);
    CHECK(out.kind == DeliveryKind::StaleRoute);
    CHECK(chain.net.total_sensor_residual() == before);
}

TEST_CASE("forward: a hop that dies while relaying drops there") {
    Chain chain(2);
    // Head 2 has exactly enough for its rx but not its tx.
    chain.net.node_mut(2).time_rx = chain.net.node(2).initial_energy - 1.5;
    residual_energy(chain.net.node_mut(2), chain.model);
    Route route{3, {2, 0}, chain.net.sink_id(), 1};
    const auto out = forward_packet(route, 1, chain.net, {}, chain.trace, 2);
    CHECK(out.kind == DeliveryKind::Dropped);
    CHECK(*out.drop_hop == 0);
    CHECK_FALSE(chain.net.node(2).alive);
}
