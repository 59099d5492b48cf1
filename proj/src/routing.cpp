#include "edocr/routing.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace edocr {

std::optional<std::uint32_t> OverlayGraph::index_of(NodeId id) const {
    for (std::uint32_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == id) return i;
    return std::nullopt;
}

OverlayGraph build_overlay(std::span<const NodeId> heads, NodeId sink, const Network& network) {
    OverlayGraph g;
    g.vertices.assign(heads.begin(), heads.end());
    g.vertices.push_back(sink);
    const auto n = static_cast<std::uint32_t>(g.vertices.size());
    g.adj.resize(n);
    const double range = network.config().ch_link_range;
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) {
            const double d = distance(network.node(g.vertices[i]).position,
                                      network.node(g.vertices[j]).position);
            if (d <= range) {
                g.adj[i].push_back(j);
                g.adj[j].push_back(i);
            }
        }
    }
    return g;
}

int DepthField::depth_of(const OverlayGraph& overlay, NodeId id) const {
    const auto idx = overlay.index_of(id);
    return idx ? depth[*idx] : kUnreachable;
}

DepthField compute_depths(const OverlayGraph& overlay, NodeId sink, std::uint64_t epoch) {
    DepthField field;
    field.epoch = epoch;
    field.depth.assign(overlay.vertices.size(), kUnreachable);
    const auto start = overlay.index_of(sink);
    if (!start) return field;
    field.depth[*start] = 0;
    std::deque<std::uint32_t> queue{*start};
    while (!queue.empty()) {
        const std::uint32_t u = queue.front();
        queue.pop_front();
        for (std::uint32_t v : overlay.adj[u]) {
            if (field.depth[v] != kUnreachable) continue;
            field.depth[v] = field.depth[u] + 1;
            queue.push_back(v);
        }
    }
    return field;
}

namespace {

std::string id_list(const std::vector<NodeId>& ids) {
    std::string out;
    for (NodeId id : ids) {
        if (!out.empty()) out += ',';
        out += std::to_string(id);
    }
    return out;
}

struct Charger {
    Network& network;
    Trace& trace;
    std::int64_t tick;
    double total = 0.0;

    void apply(NodeId id, bool tx, std::uint64_t packets, double time_s) {
        const ChargeResult r =
            tx ? network.charge_tx(id, packets, time_s) : network.charge_rx(id, packets, time_s);
        total += r.joules;
        if (r.died) {
            const auto ev = trace.emit(tick, EventKind::NodeDeath);
            trace.at(ev).fields.emplace_back("node", std::to_string(id));
        }
    }
};

std::optional<NodeId> head_of(NodeId source, const std::vector<Cluster>& clusters) {
    for (const Cluster& c : clusters)
        if (std::find(c.members.begin(), c.members.end(), source) != c.members.end())
            return c.head;
    return std::nullopt;
}

}  // namespace

DiscoveryResult discover_route(NodeId source, const DepthField& depths,
                               const OverlayGraph& overlay,
                               const std::vector<Cluster>& clusters, Network& network,
                               const ForwardingCosts& costs, Trace& trace, std::int64_t tick) {
    DiscoveryResult result;
    const auto rreq_idx = trace.emit(tick, EventKind::Rreq);
    const auto rreq = [&trace, rreq_idx]() -> TraceEvent& { return trace.at(rreq_idx); };
    rreq().fields.emplace_back("source", std::to_string(source));

    if (!network.node(source).alive) {
        result.failure = DiscoveryFailure::SourceDead;
        rreq().fields.emplace_back("result", "source_dead");
        return result;
    }

    const auto head = head_of(source, clusters);
    const auto head_idx = head ? overlay.index_of(*head) : std::nullopt;
    if (!head || !head_idx || !network.node(*head).alive) {
        result.failure = DiscoveryFailure::RouteNotFound;
        rreq().fields.emplace_back("result", "no_head");
        return result;
    }
    rreq().fields.emplace_back("head", std::to_string(*head));

    // Flood the RREQ across alive overlay vertices from the source's head.
    const auto sink_idx = overlay.index_of(network.sink_id());
    std::vector<bool> reached(overlay.vertices.size(), false);
    std::vector<std::uint32_t> flood_order;
    reached[*head_idx] = true;
    std::deque<std::uint32_t> queue{*head_idx};
    while (!queue.empty()) {
        const std::uint32_t u = queue.front();
        queue.pop_front();
        flood_order.push_back(u);
        for (std::uint32_t v : overlay.adj[u]) {
            if (reached[v]) continue;
            const NodeId vid = overlay.vertices[v];
            if (!network.is_sink(vid) && !network.node(vid).alive) continue;
            reached[v] = true;
            queue.push_back(v);
        }
    }
    Charger charger{network, trace, tick};
    for (std::uint32_t u : flood_order) {
        const NodeId id = overlay.vertices[u];
        if (u != *head_idx) charger.apply(id, false, costs.control_packets, costs.control_packet_time);
        charger.apply(id, true, costs.control_packets, costs.control_packet_time);
    }
    result.control_energy = charger.total;
    rreq().energy = charger.total;
    rreq().fields.emplace_back("reached", std::to_string(flood_order.size()));

    if (!sink_idx || !reached[*sink_idx]) {
        result.failure = DiscoveryFailure::RouteNotFound;
        rreq().fields.emplace_back("result", "sink_unreached");
        return result;
    }

    // Reply chain: strictly decreasing depth, lower node id breaks ties.
    const int head_depth = depths.depth[*head_idx];
    if (head_depth == kUnreachable) {
        result.failure = DiscoveryFailure::RouteNotFound;
        rreq().fields.emplace_back("result", "unreachable_depth");
        return result;
    }
    Route route;
    route.source = source;
    route.sink = network.sink_id();
    route.epoch = depths.epoch;
    route.hops.push_back(*head);
    std::uint32_t cur = *head_idx;
    while (depths.depth[cur] > 1) {
        std::optional<std::uint32_t> next;
        for (std::uint32_t v : overlay.adj[cur]) {
            const NodeId vid = overlay.vertices[v];
            if (network.is_sink(vid) || !network.node(vid).alive) continue;
            if (depths.depth[v] != depths.depth[cur] - 1) continue;
            if (!next || vid < overlay.vertices[*next]) next = v;
        }
        if (!next) {
            result.failure = DiscoveryFailure::RouteNotFound;
            rreq().fields.emplace_back("result", "no_reply_chain");
            return result;
        }
        cur = *next;
        route.hops.push_back(overlay.vertices[cur]);
    }

    TraceEvent& rrep = trace.at(trace.emit(tick, EventKind::Rrep));
    rrep.fields.emplace_back("source", std::to_string(source));
    rrep.fields.emplace_back("hops", id_list(route.hops));
    rrep.fields.emplace_back("depth", std::to_string(head_depth));
    result.route = std::move(route);
    return result;
}

DeliveryOutcome forward_packet(const Route& route, std::uint64_t current_epoch,
                               Network& network, const ForwardingCosts& costs, Trace& trace,
                               std::int64_t tick) {
    if (route.epoch != current_epoch) return {DeliveryKind::StaleRoute, std::nullopt, 0.0};

    Charger charger{network, trace, tick};
    const auto drop = [&](std::size_t at) {
        TraceEvent& ev = trace.at(trace.emit(tick, EventKind::Drop));
        ev.energy = charger.total;
        ev.fields.emplace_back("source", std::to_string(route.source));
        ev.fields.emplace_back("at_hop", std::to_string(at));
        ev.fields.emplace_back("node", std::to_string(route.hops[at]));
        return DeliveryOutcome{DeliveryKind::Dropped, at, charger.total};
    };

    // Intra-cluster leg: one extra hop from the member to its own head.
    const NodeId first = route.hops.front();
    if (route.source != first) {
        if (!network.node(route.source).alive) return drop(0);
        charger.apply(route.source, true, costs.data_packets, costs.data_packet_time);
        if (!network.node(first).alive) return drop(0);
        charger.apply(first, false, costs.data_packets, costs.data_packet_time);
        if (!network.node(first).alive) return drop(0);
    } else if (!network.node(first).alive) {
        return drop(0);
    }

    for (std::size_t i = 0; i < route.hops.size(); ++i) {
        charger.apply(route.hops[i], true, costs.data_packets, costs.data_packet_time);
        if (!network.node(route.hops[i]).alive) return drop(i);
        if (i + 1 == route.hops.size()) break;  // receiver is the sink, charge-free
        const NodeId next = route.hops[i + 1];
        if (!network.node(next).alive) return drop(i + 1);
        charger.apply(next, false, costs.data_packets, costs.data_packet_time);
        if (!network.node(next).alive) return drop(i + 1);
    }

    TraceEvent& ev = trace.at(trace.emit(tick, EventKind::Fwd));
    ev.energy = charger.total;
    ev.fields.emplace_back("source", std::to_string(route.source));
    ev.fields.emplace_back("hops", id_list(route.hops));
    return {DeliveryKind::Delivered, std::nullopt, charger.total};
}

}  // namespace edocr
