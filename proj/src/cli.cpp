#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "edocr/scenario.hpp"

namespace edocr {

namespace {

struct SeedRange {
    std::uint64_t first = 1;
    std::uint64_t last = 1;
};

SeedRange parse_seeds(const std::string& spec) {
    SeedRange r;
    const auto dots = spec.find("..");
    try {
        if (dots == std::string::npos) {
            r.first = r.last = std::stoull(spec);
        } else {
            r.first = std::stoull(spec.substr(0, dots));
            r.last = std::stoull(spec.substr(dots + 2));
        }
    } catch (...) {
        throw ScenarioError("bad --seeds value '" + spec + "' (expected N or A..B)");
    }
    if (r.last < r.first) throw ScenarioError("bad --seeds range: last < first");
    return r;
}

struct RunSpec {
    HeadStrategy strategy;
    std::uint64_t seed;
    std::string metrics_path;
    std::string trace_path;  // empty when tracing is off
};

struct RunOutput {
    RunSummary summary;
};

RunOutput execute(const Scenario& base, const RunSpec& spec) {
    Scenario s = base;
    s.strategy = spec.strategy;
    s.network.seed = spec.seed;
    const RunResult result = run(s.network, s.energy, s.sim_options(), s.traffic);
    emit_metrics_csv(result.frames, spec.metrics_path);
    if (!spec.trace_path.empty()) emit_trace_file(result.trace, spec.trace_path);
    return {result.summary};
}

std::string f6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"EDOCR wireless sensor network simulator"};

    std::string scenario_path;
    std::string seeds_spec;
    std::vector<std::string> strategy_names;
    std::string out_dir;
    std::uint32_t report_interval = 0;
    bool trace_on = false;
    std::uint32_t jobs = 1;

    app.add_option("-s,--scenario", scenario_path, "Scenario file (key = value lines)");
    app.add_option("--seeds", seeds_spec, "Seed N or inclusive range A..B");
    app.add_option("--strategy", strategy_names,
                   "Head strategy override: edocr, max_residual, random_rotation (repeatable)");
    app.add_option("-o,--out", out_dir, "Output directory");
    app.add_option("--report-interval", report_interval, "Metrics sampling interval in ticks");
    app.add_flag("--trace", trace_on, "Also write per-run event trace files");
    app.add_option("-j,--jobs", jobs, "Parallel runs for sweeps")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        Scenario scenario = scenario_path.empty() ? Scenario{} : load_scenario(scenario_path);
        if (!out_dir.empty()) scenario.output_dir = out_dir;
        if (report_interval > 0) scenario.reporting_interval = report_interval;

        std::vector<HeadStrategy> strategies;
        for (const std::string& name : strategy_names) {
            const auto parsed = parse_head_strategy(name);
            if (!parsed) throw ScenarioError("unknown strategy '" + name + "'");
            strategies.push_back(*parsed);
        }
        if (strategies.empty()) strategies.push_back(scenario.strategy);

        const SeedRange seeds =
            seeds_spec.empty() ? SeedRange{scenario.network.seed, scenario.network.seed}
                               : parse_seeds(seeds_spec);

        std::filesystem::create_directories(scenario.output_dir);

        std::vector<RunSpec> specs;
        for (HeadStrategy strat : strategies) {
            for (std::uint64_t seed = seeds.first; seed <= seeds.last; ++seed) {
                RunSpec spec;
                spec.strategy = strat;
                spec.seed = seed;
                const std::string stem = std::string(head_strategy_name(strat)) + "_seed" +
                                         std::to_string(seed);
                spec.metrics_path = scenario.output_dir + "/metrics_" + stem + ".csv";
                if (trace_on) spec.trace_path = scenario.output_dir + "/trace_" + stem + ".tsv";
                specs.push_back(std::move(spec));
            }
        }

        // Independent runs; results land in spec order regardless of jobs.
        std::vector<RunOutput> outputs(specs.size());
        for (std::size_t base = 0; base < specs.size(); base += jobs) {
            std::vector<std::future<RunOutput>> batch;
            const std::size_t end = std::min(specs.size(), base + jobs);
            for (std::size_t i = base; i < end; ++i)
                batch.push_back(std::async(std::launch::async,
                                           [&scenario, &specs, i] { return execute(scenario, specs[i]); }));
            for (std::size_t i = base; i < end; ++i) outputs[i] = batch[i - base].get();
        }

        const std::uint64_t seed_count = seeds.last - seeds.first + 1;
        if (strategies.size() > 1) {
            std::ofstream cmp(scenario.output_dir + "/summary.csv", std::ios::binary);
            cmp << "strategy,seeds,mean_pdr,mean_throughput,mean_first_partition_tick,"
                   "mean_final_alive_fraction\n";
            const std::int64_t horizon =
                static_cast<std::int64_t>(scenario.network.simulation_time / scenario.network.tick);
            for (std::size_t si = 0; si < strategies.size(); ++si) {
                double pdr = 0, tput = 0, part = 0, alive = 0;
                for (std::uint64_t k = 0; k < seed_count; ++k) {
                    const RunSummary& s = outputs[si * seed_count + k].summary;
                    pdr += s.final_pdr.value_or(0.0);
                    tput += s.final_throughput;
                    part += static_cast<double>(s.first_partition_tick.value_or(horizon));
                    alive += s.final_alive_fraction;
                }
                const auto n = static_cast<double>(seed_count);
                cmp << head_strategy_name(strategies[si]) << ',' << seed_count << ','
                    << f6(pdr / n) << ',' << f6(tput / n) << ',' << f6(part / n) << ','
                    << f6(alive / n) << '\n';
            }
            // Pairwise sign tests on per-seed final PDR.
            std::ofstream pairs(scenario.output_dir + "/comparison.csv", std::ios::binary);
            pairs << "strategy_a,strategy_b,pdr_wins_a,pdr_wins_b,pdr_sign_p\n";
            for (std::size_t a = 0; a < strategies.size(); ++a) {
                for (std::size_t b = a + 1; b < strategies.size(); ++b) {
                    std::uint64_t wins = 0, losses = 0;
                    for (std::uint64_t k = 0; k < seed_count; ++k) {
                        const double pa =
                            outputs[a * seed_count + k].summary.final_pdr.value_or(0.0);
                        const double pb =
                            outputs[b * seed_count + k].summary.final_pdr.value_or(0.0);
                        if (pa > pb) ++wins;
                        else if (pb > pa) ++losses;
                    }
                    pairs << head_strategy_name(strategies[a]) << ','
                          << head_strategy_name(strategies[b]) << ',' << wins << ',' << losses
                          << ',' << f6(sign_test_p(wins, losses)) << '\n';
                }
            }
        }

        nlohmann::json manifest;
        manifest["tool_version"] = kToolVersion;
        manifest["scenario_file"] = scenario_path;
        char hash[32];
        std::snprintf(hash, sizeof(hash), "%016llx",
                      static_cast<unsigned long long>(scenario_hash(scenario)));
        manifest["scenario_hash"] = hash;
        manifest["seeds"] = nlohmann::json::array();
        for (std::uint64_t seed = seeds.first; seed <= seeds.last; ++seed)
            manifest["seeds"].push_back(seed);
        manifest["strategies"] = nlohmann::json::array();
        for (HeadStrategy s : strategies) manifest["strategies"].push_back(head_strategy_name(s));
        manifest["artifacts"] = nlohmann::json::array();
        for (const RunSpec& spec : specs) {
            manifest["artifacts"].push_back(spec.metrics_path);
            if (!spec.trace_path.empty()) manifest["artifacts"].push_back(spec.trace_path);
        }
        std::ofstream mf(scenario.output_dir + "/manifest.json", std::ios::binary);
        mf << manifest.dump(2) << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "edocr_sim: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace edocr
