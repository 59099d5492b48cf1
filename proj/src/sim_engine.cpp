#include "edocr/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace edocr {

std::optional<double> packet_delivery_ratio(std::uint64_t received, std::uint64_t sent) {
    if (received > sent) throw std::logic_error("packet ledger corrupt: received > sent");
    if (sent == 0) return std::nullopt;
    return static_cast<double>(received) / static_cast<double>(sent);
}

std::optional<double> packet_drop_ratio(std::uint64_t dropped, std::uint64_t sent) {
    if (dropped > sent) throw std::logic_error("packet ledger corrupt: dropped > sent");
    if (sent == 0) return std::nullopt;
    return static_cast<double>(dropped) / static_cast<double>(sent);
}

double network_throughput(std::uint64_t delivered, double elapsed_s) {
    if (elapsed_s <= 0.0) throw std::invalid_argument("elapsed must be positive");
    return static_cast<double>(delivered) / elapsed_s;
}

double sign_test_p(std::uint64_t wins, std::uint64_t losses) {
    const std::uint64_t n = wins + losses;
    if (n == 0) return 1.0;
    double p = 0.0;
    double coeff = 1.0;  // C(n, 0)
    for (std::uint64_t k = 0; k <= n; ++k) {
        if (k >= wins) p += coeff;
        coeff = coeff * static_cast<double>(n - k) / static_cast<double>(k + 1);
    }
    return p * std::pow(0.5, static_cast<double>(n));
}

namespace {

struct Ledger {
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
};

MetricsFrame sample_frame(std::int64_t tick, const Network& network, const Ledger& ledger,
                          double tick_s, bool partitioned) {
    MetricsFrame f;
    f.tick = tick;
    f.alive_fraction = static_cast<double>(network.alive_sensor_count()) /
                       static_cast<double>(network.config().node_count);
    f.residual_fraction = network.total_sensor_residual() / network.total_sensor_initial();
    f.pdr = packet_delivery_ratio(ledger.delivered, ledger.sent);
    f.drop_ratio = packet_drop_ratio(ledger.dropped, ledger.sent);
    f.throughput = tick > 0 ? network_throughput(ledger.delivered, static_cast<double>(tick) * tick_s)
                            : 0.0;
    f.partitioned = partitioned;
    return f;
}

const char* discovery_failure_name(DiscoveryFailure f) {
    switch (f) {
        case DiscoveryFailure::SourceDead: return "source_dead";
        case DiscoveryFailure::RouteNotFound: return "no_route";
        default: return "none";
    }
}

}  // namespace

RunResult run(const NetworkConfig& config, const EnergyModel& model, const SimOptions& options,
              const TrafficProfile& traffic) {
    validate_config(config);
    if (traffic.events_per_tick < 0.0)
        throw std::invalid_argument("events_per_tick >= 0");
    if (traffic.selection == SourceSelection::FixedList && traffic.fixed_sources.empty() &&
        traffic.events_per_tick > 0.0)
        throw std::invalid_argument("fixed source list is empty");

    Rng rng(config.seed);
    Network network(config, model, rng);
    std::vector<Cluster> clusters = generate_clusters(network, options.cluster_method, rng);

    Trace trace;
    {
        TraceEvent& ev = trace.at(trace.emit(0, EventKind::Deploy));
        ev.fields.emplace_back("nodes", std::to_string(config.node_count));
        ev.fields.emplace_back("clusters", std::to_string(config.cluster_count));
        ev.fields.emplace_back("seed", std::to_string(config.seed));
    }

    ForwardingCosts costs;
    costs.data_packet_time = options.per_packet_time;
    const std::uint32_t control_size =
        options.control_packet_size ? options.control_packet_size : traffic.packet_size;
    costs.control_packet_time = traffic.packet_size > 0
                                    ? options.per_packet_time * control_size / traffic.packet_size
                                    : options.per_packet_time;

    const auto total_ticks =
        static_cast<std::int64_t>(std::llround(config.simulation_time / config.tick));

    RunResult result;
    Ledger ledger;
    OverlayGraph overlay;
    DepthField depths;
    std::uint64_t epoch = 0;
    bool elected = false;
    bool halted = false;
    std::optional<std::int64_t> first_partition;
    double traffic_acc = 0.0;
    std::size_t fixed_cursor = 0;

    for (std::int64_t tick = 1; tick <= total_ticks && !halted; ++tick) {
        traffic_acc += traffic.events_per_tick;
        const auto events = static_cast<std::uint64_t>(traffic_acc);
        traffic_acc -= static_cast<double>(events);

        const bool election_due =
            options.election_period == 0
                ? events > 0
                : (tick == 1 || (tick - 1) % options.election_period == 0);

        if (election_due) {
            const HeadAssignment heads = select_heads(options.strategy, clusters, network, rng);
            std::vector<NodeId> head_ids;
            std::uint32_t skipped = 0;
            for (Cluster& c : clusters) {
                c.head = heads.head_by_cluster[c.id];
                if (c.head)
                    head_ids.push_back(*c.head);
                else
                    ++skipped;
            }
            overlay = build_overlay(head_ids, network.sink_id(), network);
            ++epoch;
            depths = compute_depths(overlay, network.sink_id(), epoch);
            elected = true;

            TraceEvent& ev = trace.at(trace.emit(tick, EventKind::Elect));
            ev.fields.emplace_back("epoch", std::to_string(epoch));
            std::string hs;
            for (NodeId h : head_ids) {
                if (!hs.empty()) hs += ',';
                hs += std::to_string(h);
            }
            ev.fields.emplace_back("heads", hs);
            if (heads.local_head)
                ev.fields.emplace_back("local_head", std::to_string(*heads.local_head));
            if (skipped > 0) ev.fields.emplace_back("dead_clusters", std::to_string(skipped));

            // Full partition: no cluster with alive members can reach the sink.
            bool reachable = false;
            for (const Cluster& c : clusters)
                if (c.head && depths.depth_of(overlay, *c.head) != kUnreachable) reachable = true;
            if (!reachable) {
                trace.emit(tick, EventKind::Partition);
                first_partition = tick;
                result.frames.push_back(sample_frame(tick, network, ledger, config.tick, true));
                halted = true;
                break;
            }
        }

        for (std::uint64_t e = 0; e < events && !halted; ++e) {
            std::optional<NodeId> source;
            if (traffic.selection == SourceSelection::UniformRandom) {
                std::vector<NodeId> alive;
                for (NodeId i = 0; i < config.node_count; ++i)
                    if (network.node(i).alive) alive.push_back(i);
                if (alive.empty()) {
                    trace.emit(tick, EventKind::Partition);
                    first_partition = first_partition ? first_partition : std::optional(tick);
                    result.frames.push_back(sample_frame(tick, network, ledger, config.tick, true));
                    halted = true;
                    break;
                }
                source = alive[rng.below(static_cast<std::uint32_t>(alive.size()))];
            } else {
                source = traffic.fixed_sources[fixed_cursor % traffic.fixed_sources.size()];
                ++fixed_cursor;
            }

            ++ledger.sent;
            TraceEvent& gen = trace.at(trace.emit(tick, EventKind::TrafficGen));
            gen.fields.emplace_back("source", std::to_string(*source));

            if (!elected) {
                // Can only happen with a fixed election period before round one.
                ++ledger.dropped;
                TraceEvent& ev = trace.at(trace.emit(tick, EventKind::Drop));
                ev.fields.emplace_back("source", std::to_string(*source));
                ev.fields.emplace_back("reason", "no_route");
                continue;
            }

            const DiscoveryResult disc =
                discover_route(*source, depths, overlay, clusters, network, costs, trace, tick);
            if (!disc.route) {
                ++ledger.dropped;
                TraceEvent& ev = trace.at(trace.emit(tick, EventKind::Drop));
                ev.fields.emplace_back("source", std::to_string(*source));
                ev.fields.emplace_back("reason", discovery_failure_name(disc.failure));
                continue;
            }
            const DeliveryOutcome out =
                forward_packet(*disc.route, epoch, network, costs, trace, tick);
            if (out.kind == DeliveryKind::Delivered)
                ++ledger.delivered;
            else
                ++ledger.dropped;
        }
        if (halted) break;

        if (tick % options.reporting_interval == 0 || tick == total_ticks)
            result.frames.push_back(sample_frame(tick, network, ledger, config.tick, false));
    }

    const std::int64_t end_tick = result.frames.empty() ? 0 : result.frames.back().tick;
    RunSummary& s = result.summary;
    s.sent = ledger.sent;
    s.delivered = ledger.delivered;
    s.dropped = ledger.dropped;
    s.final_alive_fraction = static_cast<double>(network.alive_sensor_count()) /
                             static_cast<double>(config.node_count);
    s.final_residual_fraction = network.total_sensor_residual() / network.total_sensor_initial();
    s.final_pdr = packet_delivery_ratio(ledger.delivered, ledger.sent);
    s.final_throughput =
        end_tick > 0 ? network_throughput(ledger.delivered, static_cast<double>(end_tick) * config.tick)
                     : 0.0;
    s.first_partition_tick = first_partition;
    s.end_tick = end_tick;
    s.initial_energy_joules = network.total_sensor_initial();
    s.final_residual_joules = network.total_sensor_residual();
    for (const TraceEvent& ev : trace.events()) {
        if (ev.kind == EventKind::NodeDeath) {
            s.first_death_tick = ev.tick;
            break;
        }
    }
    result.trace = trace.take();
    return result;
}

RunSummary lifetime_summary(const RunResult& result, const NetworkConfig& config) {
    RunSummary s;
    for (const TraceEvent& ev : result.trace) {
        switch (ev.kind) {
            case EventKind::TrafficGen: ++s.sent; break;
            case EventKind::Fwd: ++s.delivered; break;
            case EventKind::Drop: ++s.dropped; break;
            case EventKind::NodeDeath:
                if (!s.first_death_tick) s.first_death_tick = ev.tick;
                break;
            case EventKind::Partition:
                if (!s.first_partition_tick) s.first_partition_tick = ev.tick;
                break;
            default: break;
        }
    }
    if (!result.frames.empty()) {
        const MetricsFrame& last = result.frames.back();
        s.final_alive_fraction = last.alive_fraction;
        s.final_residual_fraction = last.residual_fraction;
        s.end_tick = last.tick;
    }
    s.final_pdr = packet_delivery_ratio(s.delivered, s.sent);
    s.final_throughput = s.end_tick > 0
                             ? network_throughput(s.delivered,
                                                  static_cast<double>(s.end_tick) * config.tick)
                             : 0.0;
    return s;
}

}  // namespace edocr
