#include "edocr/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace edocr {

double distance(Position a, Position b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double transmit_energy(const EnergyModel& model, std::uint64_t packets, double time_s) {
    return model.tx_packet_coeff * static_cast<double>(packets) + model.tx_time_coeff * time_s;
}

double receive_energy(const EnergyModel& model, std::uint64_t packets, double time_s) {
    return model.rx_packet_coeff * static_cast<double>(packets) + model.rx_time_coeff * time_s;
}

double residual_energy(Node& node, const EnergyModel& model) {
    const double spent = transmit_energy(model, node.packets_tx, node.time_tx) +
                         receive_energy(model, node.packets_rx, node.time_rx);
    const double residual = std::max(0.0, node.initial_energy - spent);
    node.residual_energy = residual;
    node.alive = residual > 0.0;
    return residual;
}

void validate_config(const NetworkConfig& config) {
    if (config.cluster_count < 1)
        throw std::invalid_argument("cluster_count >= 1");
    if (config.node_count < config.cluster_count)
        throw std::invalid_argument("node_count >= cluster_count");
    if (config.coverage_range <= 0.0)
        throw std::invalid_argument("coverage_range > 0");
    if (config.ch_link_range <= 0.0)
        throw std::invalid_argument("ch_link_range > 0");
    if (config.tick <= 0.0)
        throw std::invalid_argument("tick > 0");
    if (config.field_width <= 0.0 || config.field_height <= 0.0)
        throw std::invalid_argument("field dimensions > 0");
    if (config.initial_energy <= 0.0)
        throw std::invalid_argument("initial_energy > 0");
    if (config.simulation_time <= 0.0)
        throw std::invalid_argument("simulation_time > 0");
    if (config.sink_position.x < 0.0 || config.sink_position.x > config.field_width ||
        config.sink_position.y < 0.0 || config.sink_position.y > config.field_height)
        throw std::invalid_argument("sink_position inside field rectangle");
}

namespace {

std::vector<Node> make_nodes(const NetworkConfig& config, const std::vector<Position>& positions) {
    std::vector<Node> nodes;
    nodes.reserve(positions.size() + 1);
    for (std::uint32_t i = 0; i < positions.size(); ++i) {
        Node n;
        n.id = i;
        n.position = positions[i];
        n.initial_energy = config.initial_energy;
        n.residual_energy = config.initial_energy;
        nodes.push_back(n);
    }
    Node sink;
    sink.id = config.node_count;
    sink.position = config.sink_position;
    sink.initial_energy = config.initial_energy;
    sink.residual_energy = config.initial_energy;
    nodes.push_back(sink);
    return nodes;
}

}  // namespace

Network::Network(const NetworkConfig& config, const EnergyModel& model, Rng& rng)
    : config_(config), model_(model) {
    validate_config(config);
    std::vector<Position> positions(config.node_count);
    for (auto& p : positions) {
        p.x = rng.uniform(0.0, config.field_width);
        p.y = rng.uniform(0.0, config.field_height);
    }
    nodes_ = make_nodes(config, positions);
}

Network::Network(const NetworkConfig& config, const EnergyModel& model,
                 std::vector<Position> positions)
    : config_(config), model_(model) {
    validate_config(config);
    if (positions.size() != config.node_count)
        throw std::invalid_argument("positions.size() must equal node_count");
    nodes_ = make_nodes(config, positions);
}

void Network::check_id(NodeId id) const {
    if (id >= nodes_.size())
        throw std::out_of_range("unknown node id " + std::to_string(id));
}

const Node& Network::node(NodeId id) const {
    check_id(id);
    return nodes_[id];
}

Node& Network::node_mut(NodeId id) {
    check_id(id);
    return nodes_[id];
}

std::vector<NodeId> Network::neighbors(NodeId id) const {
    check_id(id);
    const Node& self = nodes_[id];
    std::vector<NodeId> out;
    for (const Node& other : nodes_) {
        if (other.id == id || !other.alive) continue;
        if (distance(self.position, other.position) <= config_.coverage_range)
            out.push_back(other.id);
    }
    return out;
}

ChargeResult Network::apply_charge(NodeId id, std::uint64_t packets, double time_s, bool tx) {
    check_id(id);
    if (is_sink(id)) return {};  // sink has effectively infinite energy
    Node& n = nodes_[id];
    const double before = n.residual_energy;
    const bool was_alive = n.alive;
    if (tx) {
        n.packets_tx += packets;
        n.time_tx += time_s;
    } else {
        n.packets_rx += packets;
        n.time_rx += time_s;
    }
    const double after = residual_energy(n, model_);
    return {before - after, was_alive && !n.alive};
}

ChargeResult Network::charge_tx(NodeId id, std::uint64_t packets, double time_s) {
    return apply_charge(id, packets, time_s, true);
}

ChargeResult Network::charge_rx(NodeId id, std::uint64_t packets, double time_s) {
    return apply_charge(id, packets, time_s, false);
}

std::uint32_t Network::alive_sensor_count() const {
    std::uint32_t count = 0;
    for (std::uint32_t i = 0; i < config_.node_count; ++i)
        if (nodes_[i].alive) ++count;
    return count;
}

double Network::total_sensor_residual() const {
    double total = 0.0;
    for (std::uint32_t i = 0; i < config_.node_count; ++i) total += nodes_[i].residual_energy;
    return total;
}

double Network::total_sensor_initial() const {
    double total = 0.0;
    for (std::uint32_t i = 0; i < config_.node_count; ++i) total += nodes_[i].initial_energy;
    return total;
}

}  // namespace edocr
