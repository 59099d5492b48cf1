#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace edocr {

using NodeId = std::uint32_t;

/// Deterministic RNG wrapper. All randomness in a run flows through one of
/// these; the raw-bit uniform keeps draws identical across standard library
/// implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint32_t below(std::uint32_t n) {
        return static_cast<std::uint32_t>(uniform() * static_cast<double>(n));
    }

private:
    std::mt19937_64 eng_;
};

struct Position {
    double x = 0.0;
    double y = 0.0;
};

double distance(Position a, Position b);

/// Per-packet / per-second energy coefficients. Defaults of 1 make the
/// charge for (p packets, t seconds) exactly p + t.
struct EnergyModel {
    double tx_packet_coeff = 1.0;
    double tx_time_coeff = 1.0;
    double rx_packet_coeff = 1.0;
    double rx_time_coeff = 1.0;
};

double transmit_energy(const EnergyModel& model, std::uint64_t packets, double time_s);
double receive_energy(const EnergyModel& model, std::uint64_t packets, double time_s);

struct Node {
    NodeId id = 0;
    Position position;
    double initial_energy = 0.0;
    double residual_energy = 0.0;
    bool alive = true;
    std::uint64_t packets_tx = 0;
    std::uint64_t packets_rx = 0;
    double time_tx = 0.0;
    double time_rx = 0.0;
};

/// Recomputes the node's residual energy from its traffic counters,
/// clamping at zero; stores it back and updates the alive flag.
double residual_energy(Node& node, const EnergyModel& model);

struct NetworkConfig {
    double field_width = 1300.0;
    double field_height = 1000.0;
    std::uint32_t node_count = 50;
    std::uint32_t cluster_count = 7;
    double initial_energy = 1.0;
    std::uint32_t packet_size = 64;
    Position sink_position{1004.5, 619.613};
    double coverage_range = 250.0;
    double ch_link_range = 500.0;
    double simulation_time = 2000.0;
    double tick = 1.0;
    std::uint64_t seed = 1;
};

/// Validates the config invariants; throws std::invalid_argument naming the
/// violated one.
void validate_config(const NetworkConfig& config);

struct ChargeResult {
    double joules = 0.0;  // energy actually drawn (clamped at the battery floor)
    bool died = false;    // this charge took the node from alive to dead
};

/// The deployed node set plus the sink. Sensor nodes hold ids 0..N-1; the
/// sink holds the reserved id N, is exempt from energy accounting and never
/// dies.
class Network {
public:
    /// Random uniform deployment over the field rectangle.
    Network(const NetworkConfig& config, const EnergyModel& model, Rng& rng);

    /// Explicit sensor positions (tests). positions.size() must equal node_count.
    Network(const NetworkConfig& config, const EnergyModel& model,
            std::vector<Position> positions);

    const NetworkConfig& config() const { return config_; }
    const EnergyModel& energy_model() const { return model_; }

    NodeId sink_id() const { return config_.node_count; }
    bool is_sink(NodeId id) const { return id == sink_id(); }

    std::size_t size() const { return nodes_.size(); }
    const Node& node(NodeId id) const;
    Node& node_mut(NodeId id);
    std::span<const Node> nodes() const { return nodes_; }

    /// Alive nodes (sink included) within coverage_range of `id`, excluding
    /// `id` itself and all dead nodes. Throws on unknown id.
    std::vector<NodeId> neighbors(NodeId id) const;

    ChargeResult charge_tx(NodeId id, std::uint64_t packets, double time_s);
    ChargeResult charge_rx(NodeId id, std::uint64_t packets, double time_s);

    std::uint32_t alive_sensor_count() const;
    double total_sensor_residual() const;
    double total_sensor_initial() const;

private:
    void check_id(NodeId id) const;
    ChargeResult apply_charge(NodeId id, std::uint64_t packets, double time_s, bool tx);

    NetworkConfig config_;
    EnergyModel model_;
    std::vector<Node> nodes_;  // sensors 0..N-1, sink at index N
};

}  // namespace edocr
