#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "edocr/clustering.hpp"
#include "edocr/net_model.hpp"
#include "edocr/trace.hpp"

namespace edocr {

/// Range-limited adjacency among the current cluster heads plus the sink.
/// Rebuilt each election epoch.
struct OverlayGraph {
    std::vector<NodeId> vertices;              // heads in election order, sink last
    std::vector<std::vector<std::uint32_t>> adj;  // vertex-index adjacency lists

    std::optional<std::uint32_t> index_of(NodeId id) const;
};

OverlayGraph build_overlay(std::span<const NodeId> heads, NodeId sink, const Network& network);

inline constexpr int kUnreachable = -1;

/// Hop distances from the sink over the overlay. depth[i] pairs with
/// overlay.vertices[i]; unreachable vertices hold kUnreachable.
struct DepthField {
    std::vector<int> depth;
    std::uint64_t epoch = 0;

    int depth_of(const OverlayGraph& overlay, NodeId id) const;
};

DepthField compute_depths(const OverlayGraph& overlay, NodeId sink, std::uint64_t epoch);

struct Route {
    NodeId source = 0;
    std::vector<NodeId> hops;  // cluster heads, source's head first; sink excluded
    NodeId sink = 0;
    std::uint64_t epoch = 0;
};

enum class DiscoveryFailure { None, SourceDead, RouteNotFound };

struct DiscoveryResult {
    std::optional<Route> route;
    DiscoveryFailure failure = DiscoveryFailure::None;
    double control_energy = 0.0;  // joules drawn by the RREQ flood
};

struct ForwardingCosts {
    std::uint64_t data_packets = 1;
    std::uint64_t control_packets = 1;
    double data_packet_time = 0.0;     // seconds charged per data packet
    double control_packet_time = 0.0;  // seconds charged per control packet
};

/// Models the request/reply exchange: the RREQ floods from the source's
/// head across alive overlay vertices (each reached head pays one control
/// receive plus one transmit, the origin pays transmit only), then the reply
/// fixes a minimum-depth chain with strictly decreasing depth and lower-id
/// tie-breaks. Emits Rreq/Rrep/NodeDeath trace events.
DiscoveryResult discover_route(NodeId source, const DepthField& depths,
                               const OverlayGraph& overlay,
                               const std::vector<Cluster>& clusters, Network& network,
                               const ForwardingCosts& costs, Trace& trace, std::int64_t tick);

enum class DeliveryKind { Delivered, Dropped, StaleRoute };

struct DeliveryOutcome {
    DeliveryKind kind = DeliveryKind::Delivered;
    std::optional<std::size_t> drop_hop;  // index into route.hops
    double data_energy = 0.0;             // joules drawn while forwarding
};

/// Pushes one data packet along the route, charging the intra-cluster leg
/// (source to own head) and then each head-to-head hop. A hop that is dead
/// before receiving, or dies while being charged, drops the packet there;
/// downstream hops stay untouched. Emits Fwd/Drop/NodeDeath trace events.
DeliveryOutcome forward_packet(const Route& route, std::uint64_t current_epoch,
                               Network& network, const ForwardingCosts& costs, Trace& trace,
                               std::int64_t tick);

}  // namespace edocr
