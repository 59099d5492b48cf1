#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "edocr/clustering.hpp"
#include "edocr/net_model.hpp"
#include "edocr/routing.hpp"
#include "edocr/trace.hpp"

namespace edocr {

enum class SourceSelection { UniformRandom, FixedList };

struct TrafficProfile {
    double events_per_tick = 5.0;
    SourceSelection selection = SourceSelection::UniformRandom;
    std::vector<NodeId> fixed_sources;
    std::uint32_t packet_size = 64;
};

struct MetricsFrame {
    std::int64_t tick = 0;
    double alive_fraction = 1.0;
    double residual_fraction = 1.0;
    std::optional<double> pdr;
    std::optional<double> drop_ratio;
    double throughput = 0.0;  // delivered packets per second, cumulative
    bool partitioned = false;
};

struct RunSummary {
    std::optional<std::int64_t> first_death_tick;
    std::optional<std::int64_t> first_partition_tick;
    double final_alive_fraction = 1.0;
    double final_residual_fraction = 1.0;
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::optional<double> final_pdr;
    double final_throughput = 0.0;
    std::int64_t end_tick = 0;
    double initial_energy_joules = 0.0;         // sensor batteries at deployment
    double final_residual_joules = 0.0;         // sensor batteries at termination
};

struct RunResult {
    std::vector<MetricsFrame> frames;
    std::vector<TraceEvent> trace;
    RunSummary summary;
};

struct SimOptions {
    HeadStrategy strategy = HeadStrategy::Edocr;
    ClusterMethod cluster_method = ClusterMethod::KMeans;
    /// 0 re-elects on every traffic batch; k > 0 re-elects every k ticks.
    std::uint32_t election_period = 0;
    std::uint32_t reporting_interval = 100;
    std::uint32_t control_packet_size = 0;  // 0 means "data packet size"
    double per_packet_time = 0.0;           // seconds charged per data packet
};

/// Metric helpers. sent = 0 yields no value; received > sent is an
/// accounting corruption and throws std::logic_error.
std::optional<double> packet_delivery_ratio(std::uint64_t received, std::uint64_t sent);
std::optional<double> packet_drop_ratio(std::uint64_t dropped, std::uint64_t sent);
double network_throughput(std::uint64_t delivered, double elapsed_s);

/// Recomputes the run summary from the emitted trace and frames; used as an
/// independent cross-check of the counters the engine maintains online.
RunSummary lifetime_summary(const RunResult& result, const NetworkConfig& config);

/// Deterministic tick loop: per tick, generate traffic events, re-elect
/// heads on the configured cadence, rebuild the overlay and depth field,
/// then discover and forward each packet. Halts at simulation_time or on
/// full partition.
RunResult run(const NetworkConfig& config, const EnergyModel& model, const SimOptions& options,
              const TrafficProfile& traffic);

/// One-sided paired sign test: probability of >= wins successes out of
/// wins + losses fair coin flips (ties already discarded).
double sign_test_p(std::uint64_t wins, std::uint64_t losses);

}  // namespace edocr
