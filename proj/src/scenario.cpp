#include "edocr/scenario.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace edocr {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw ScenarioError("scenario line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& v, std::size_t line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) fail(line, "trailing characters after number '" + v + "'");
        return d;
    } catch (const ScenarioError&) {
        throw;
    } catch (...) {
        fail(line, "expected a number, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& v, std::size_t line) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        fail(line, "expected a non-negative integer, got '" + v + "'");
    return out;
}

std::uint32_t parse_u32(const std::string& v, std::size_t line) {
    const std::uint64_t out = parse_u64(v, line);
    if (out > 0xffffffffULL) fail(line, "value out of range: '" + v + "'");
    return static_cast<std::uint32_t>(out);
}

std::vector<NodeId> parse_id_list(const std::string& v, std::size_t line) {
    std::vector<NodeId> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_u32(item, line));
    }
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    Scenario s;
    std::stringstream stream(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(stream, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(lineno, "empty key");

        if (key == "field_width") s.network.field_width = parse_double(value, lineno);
        else if (key == "field_height") s.network.field_height = parse_double(value, lineno);
        else if (key == "node_count") s.network.node_count = parse_u32(value, lineno);
        else if (key == "cluster_count") s.network.cluster_count = parse_u32(value, lineno);
        else if (key == "initial_energy") s.network.initial_energy = parse_double(value, lineno);
        else if (key == "packet_size") {
            s.network.packet_size = parse_u32(value, lineno);
            s.traffic.packet_size = s.network.packet_size;
        }
        else if (key == "sink_x") s.network.sink_position.x = parse_double(value, lineno);
        else if (key == "sink_y") s.network.sink_position.y = parse_double(value, lineno);
        else if (key == "coverage_range") s.network.coverage_range = parse_double(value, lineno);
        else if (key == "ch_link_range") s.network.ch_link_range = parse_double(value, lineno);
        else if (key == "simulation_time") s.network.simulation_time = parse_double(value, lineno);
        else if (key == "tick") s.network.tick = parse_double(value, lineno);
        else if (key == "seed") s.network.seed = parse_u64(value, lineno);
        else if (key == "tx_packet_coeff") s.energy.tx_packet_coeff = parse_double(value, lineno);
        else if (key == "tx_time_coeff") s.energy.tx_time_coeff = parse_double(value, lineno);
        else if (key == "rx_packet_coeff") s.energy.rx_packet_coeff = parse_double(value, lineno);
        else if (key == "rx_time_coeff") s.energy.rx_time_coeff = parse_double(value, lineno);
        else if (key == "strategy") {
            const auto parsed = parse_head_strategy(value);
            if (!parsed) fail(lineno, "unknown strategy '" + value + "'");
            s.strategy = *parsed;
        }
        else if (key == "cluster_method") {
            const auto parsed = parse_cluster_method(value);
            if (!parsed) fail(lineno, "unknown cluster_method '" + value + "'");
            s.cluster_method = *parsed;
        }
        else if (key == "election_period") s.election_period = parse_u32(value, lineno);
        else if (key == "reporting_interval") s.reporting_interval = parse_u32(value, lineno);
        else if (key == "control_packet_size") s.control_packet_size = parse_u32(value, lineno);
        else if (key == "per_packet_time") s.per_packet_time = parse_double(value, lineno);
        else if (key == "events_per_tick") s.traffic.events_per_tick = parse_double(value, lineno);
        else if (key == "source_selection") {
            if (value == "uniform") s.traffic.selection = SourceSelection::UniformRandom;
            else if (value == "fixed") s.traffic.selection = SourceSelection::FixedList;
            else fail(lineno, "unknown source_selection '" + value + "'");
        }
        else if (key == "fixed_sources") s.traffic.fixed_sources = parse_id_list(value, lineno);
        else if (key == "output_dir") s.output_dir = value;
        else fail(lineno, "unknown key '" + key + "'");
    }

    try {
        validate_config(s.network);
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string("scenario invariant violated: ") + e.what());
    }
    if (s.energy.tx_packet_coeff < 0 || s.energy.tx_time_coeff < 0 ||
        s.energy.rx_packet_coeff < 0 || s.energy.rx_time_coeff < 0)
        throw ScenarioError("scenario invariant violated: energy coefficients >= 0");
    if (s.traffic.events_per_tick < 0)
        throw ScenarioError("scenario invariant violated: events_per_tick >= 0");
    if (s.reporting_interval == 0)
        throw ScenarioError("scenario invariant violated: reporting_interval >= 1");
    for (NodeId id : s.traffic.fixed_sources)
        if (id >= s.network.node_count)
            throw ScenarioError("scenario invariant violated: fixed source id < node_count");
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
    std::string out;
    const auto kv = [&out](const char* key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    kv("field_width", fmt(s.network.field_width));
    kv("field_height", fmt(s.network.field_height));
    kv("node_count", std::to_string(s.network.node_count));
    kv("cluster_count", std::to_string(s.network.cluster_count));
    kv("initial_energy", fmt(s.network.initial_energy));
    kv("packet_size", std::to_string(s.network.packet_size));
    kv("sink_x", fmt(s.network.sink_position.x));
    kv("sink_y", fmt(s.network.sink_position.y));
    kv("coverage_range", fmt(s.network.coverage_range));
    kv("ch_link_range", fmt(s.network.ch_link_range));
    kv("simulation_time", fmt(s.network.simulation_time));
    kv("tick", fmt(s.network.tick));
    kv("seed", std::to_string(s.network.seed));
    kv("tx_packet_coeff", fmt(s.energy.tx_packet_coeff));
    kv("tx_time_coeff", fmt(s.energy.tx_time_coeff));
    kv("rx_packet_coeff", fmt(s.energy.rx_packet_coeff));
    kv("rx_time_coeff", fmt(s.energy.rx_time_coeff));
    kv("strategy", head_strategy_name(s.strategy));
    kv("cluster_method", cluster_method_name(s.cluster_method));
    kv("election_period", std::to_string(s.election_period));
    kv("reporting_interval", std::to_string(s.reporting_interval));
    kv("control_packet_size", std::to_string(s.control_packet_size));
    kv("per_packet_time", fmt(s.per_packet_time));
    kv("events_per_tick", fmt(s.traffic.events_per_tick));
    kv("source_selection",
       s.traffic.selection == SourceSelection::UniformRandom ? "uniform" : "fixed");
    std::string ids;
    for (NodeId id : s.traffic.fixed_sources) {
        if (!ids.empty()) ids += ',';
        ids += std::to_string(id);
    }
    if (!ids.empty()) kv("fixed_sources", ids);
    kv("output_dir", s.output_dir);
    return out;
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError("cannot write scenario file: " + path);
    out << serialize_scenario(scenario);
}

std::uint64_t scenario_hash(const Scenario& scenario) {
    const std::string text = serialize_scenario(scenario);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

namespace {

std::string cell(std::optional<double> v) {
    if (!v) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", *v);
    return buf;
}

}  // namespace

std::string metrics_csv(std::span<const MetricsFrame> frames) {
    std::string out = "tick,alive_fraction,residual_fraction,pdr,drop_ratio,throughput,partitioned\n";
    for (const MetricsFrame& f : frames) {
        out += std::to_string(f.tick);
        out += ',';
        out += cell(f.alive_fraction);
        out += ',';
        out += cell(f.residual_fraction);
        out += ',';
        out += cell(f.pdr);
        out += ',';
        out += cell(f.drop_ratio);
        out += ',';
        out += cell(f.throughput);
        out += ',';
        out += f.partitioned ? "true" : "false";
        out += '\n';
    }
    return out;
}

void emit_metrics_csv(std::span<const MetricsFrame> frames, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError("cannot write metrics file: " + path);
    out << metrics_csv(frames);
}

void emit_trace_file(std::span<const TraceEvent> events, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError("cannot write trace file: " + path);
    for (const TraceEvent& ev : events) out << format_trace_event(ev) << '\n';
}

}  // namespace edocr
