#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "edocr/clustering.hpp"
#include "edocr/net_model.hpp"
#include "edocr/sim_engine.hpp"

namespace edocr {

inline constexpr const char* kToolVersion = "0.1.0";

/// Everything one run needs, loadable from a flat key = value file.
struct Scenario {
    NetworkConfig network;
    EnergyModel energy;
    HeadStrategy strategy = HeadStrategy::Edocr;
    ClusterMethod cluster_method = ClusterMethod::KMeans;
    TrafficProfile traffic;
    std::uint32_t election_period = 0;
    std::uint32_t reporting_interval = 100;
    std::uint32_t control_packet_size = 0;
    double per_packet_time = 0.0;
    std::string output_dir = "out";

    SimOptions sim_options() const {
        return {strategy, cluster_method, election_period, reporting_interval,
                control_packet_size, per_packet_time};
    }
};

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses scenario text. Unknown keys and malformed values raise
/// ScenarioError naming the line; semantic violations name the invariant.
/// Omitted keys keep the defaults above.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Canonical serialization: every key, fixed order, round-trip exact.
std::string serialize_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);

/// FNV-1a over the canonical serialization.
std::uint64_t scenario_hash(const Scenario& scenario);

std::string metrics_csv(std::span<const MetricsFrame> frames);
void emit_metrics_csv(std::span<const MetricsFrame> frames, const std::string& path);
void emit_trace_file(std::span<const TraceEvent> events, const std::string& path);

int run_cli(int argc, const char* const* argv);

}  // namespace edocr
