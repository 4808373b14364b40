// ssnet command-line tool: synth | ingest | filter-bots | build | analyze |
// report | run. `run` executes the whole pipeline; the other subcommands run
// one stage on the previous stage's artifacts.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssnet/analyze.hpp"
#include "ssnet/build.hpp"
#include "ssnet/ingest.hpp"
#include "ssnet/pipeline.hpp"
#include "ssnet/synth.hpp"

namespace fs = std::filesystem;
using namespace ssnet;

namespace {

int fail(const std::exception& e, int code) {
    std::cerr << "error: " << e.what() << "\n";
    return code;
}

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
    bool jobs_set = false;
    std::int64_t time_window = 0;
    std::vector<double> resolutions;
    std::string relation;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Declarative config file (JSON)");
        cmd->add_option("--out", out_dir, "Output directory");
        cmd->add_option("--seed", seed, "Top-level seed")->each([this](const std::string&) { seed_set = true; });
        cmd->add_option("--jobs", jobs, "Worker cap")->each([this](const std::string&) { jobs_set = true; });
        cmd->add_option("--time-window", time_window, "SSN time window in seconds");
        cmd->add_option("--resolution", resolutions, "Community resolution (repeatable)");
        cmd->add_option("--relation", relation, "Relation analyzed (default ssn)");
    }

    // Flags override config-file values.
    PipelineConfig resolve() const {
        PipelineConfig cfg;
        if (!config_path.empty()) cfg = load_pipeline_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed_set) cfg.seed = seed;
        if (jobs_set) cfg.jobs = jobs;
        if (time_window > 0) cfg.ssn.time_window = time_window;
        if (!resolutions.empty()) cfg.resolutions = resolutions;
        if (!relation.empty()) cfg.relation = relation;
        const char* env_seed = std::getenv("SSNET_SEED");
        if (!seed_set && env_seed) cfg.seed = std::strtoull(env_seed, nullptr, 10);
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Social scholarly network construction and analysis"};
    app.require_subcommand(1);

    // --- synth ---
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic mention stream");
    SynthConfig synth_cfg;
    std::string synth_out = "synth_out";
    std::string rt_dist = "zero", attach_mode = "uniform";
    synth_cmd->add_option("--out", synth_out, "Output directory");
    synth_cmd->add_option("--papers", synth_cfg.n_papers, "Paper count");
    synth_cmd->add_option("--users", synth_cfg.n_users, "User count");
    synth_cmd->add_option("--blocks", synth_cfg.n_blocks, "Planted block count");
    synth_cmd->add_option("--p-in", synth_cfg.p_in, "Intra-block mention probability weight");
    synth_cmd->add_option("--p-out", synth_cfg.p_out, "Inter-block mention probability weight");
    synth_cmd->add_option("--mentions-per-user", synth_cfg.mentions_per_user, "Mentions per user");
    synth_cmd->add_option("--bots", synth_cfg.bot_count, "Planted bot count");
    synth_cmd->add_option("--bot-rate", synth_cfg.bot_rate_multiplier, "Bot rate multiplier");
    synth_cmd->add_option("--rt", rt_dist, "Retweet distribution: zero|uniform|power_law");
    synth_cmd->add_option("--rt-param", synth_cfg.rt_param, "Uniform max / power-law exponent");
    synth_cmd->add_option("--attachment", attach_mode, "Paper choice: uniform|preferential");
    synth_cmd->add_option("--time-window", synth_cfg.time_window, "Window the mentions cluster in");
    synth_cmd->add_option("--seed", synth_cfg.seed, "Seed");

    // --- staged commands ---
    auto* ingest_cmd = app.add_subcommand("ingest", "Parse mentions and enrich papers");
    std::string mentions_path, metadata_fixture, citation_fixture, metadata_cache, citation_cache;
    CommonFlags ingest_flags;
    ingest_flags.attach(ingest_cmd);
    ingest_cmd->add_option("--mentions", mentions_path, "Mention stream (JSONL)");
    ingest_cmd->add_option("--metadata-fixture", metadata_fixture, "Metadata fixture (JSONL)");
    ingest_cmd->add_option("--citation-fixture", citation_fixture, "Citation fixture (JSONL)");
    ingest_cmd->add_option("--metadata-cache", metadata_cache, "Metadata cache path");
    ingest_cmd->add_option("--citation-cache", citation_cache, "Citation cache path");

    auto* filter_cmd = app.add_subcommand("filter-bots", "Remove bot users from parsed events");
    std::string events_path;
    double degree_z = 3.5, density_z = 3.5;
    std::int64_t density_bin = 3600;
    CommonFlags filter_flags;
    filter_flags.attach(filter_cmd);
    filter_cmd->add_option("--events", events_path, "Parsed events (events.jsonl)");
    filter_cmd->add_option("--degree-z", degree_z, "Degree z-score threshold");
    filter_cmd->add_option("--density-z", density_z, "Density z-score threshold");
    filter_cmd->add_option("--density-bin", density_bin, "Density bin in seconds");

    auto* build_cmd = app.add_subcommand("build", "Construct SSN + coauthorship GraphML");
    std::string build_events, build_papers;
    CommonFlags build_flags;
    build_flags.attach(build_cmd);
    build_cmd->add_option("--events", build_events, "Filtered events (events_filtered.jsonl)");
    build_cmd->add_option("--papers", build_papers, "Enriched papers (papers.jsonl)");

    auto* analyze_cmd = app.add_subcommand("analyze", "Run the analysis battery on a GraphML file");
    std::string analyze_graph;
    CommonFlags analyze_flags;
    analyze_flags.attach(analyze_cmd);
    analyze_cmd->add_option("--graph", analyze_graph, "Graph file (GraphML)");

    auto* report_cmd = app.add_subcommand("report", "Summarize a run directory");
    std::string report_dir;
    report_cmd->add_option("dir", report_dir, "Run directory")->required();

    auto* run_cmd = app.add_subcommand("run", "Full pipeline: ingest -> filter -> build -> analyze");
    std::string run_mentions, run_metadata, run_citations;
    CommonFlags run_flags;
    run_flags.attach(run_cmd);
    run_cmd->add_option("--mentions", run_mentions, "Mention stream (JSONL)");
    run_cmd->add_option("--metadata-fixture", run_metadata, "Metadata fixture (JSONL)");
    run_cmd->add_option("--citation-fixture", run_citations, "Citation fixture (JSONL)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (synth_cmd->parsed()) {
            if (rt_dist == "uniform") synth_cfg.rt_distribution = RtDistribution::Uniform;
            else if (rt_dist == "power_law") synth_cfg.rt_distribution = RtDistribution::PowerLaw;
            else if (rt_dist != "zero") throw PipelineError(PipelineError::Kind::Usage, "synth", "unknown rt distribution: " + rt_dist);
            if (attach_mode == "preferential") synth_cfg.attachment = AttachmentMode::Preferential;
            else if (attach_mode != "uniform") throw PipelineError(PipelineError::Kind::Usage, "synth", "unknown attachment mode: " + attach_mode);
            SynthOutput out = generate_stream(synth_cfg);
            fs::create_directories(synth_out);
            write_stream_jsonl(out.events, synth_out + "/mentions.jsonl");
            write_ground_truth_csv(out, synth_out + "/ground_truth.csv");
            std::cout << "wrote " << out.events.size() << " events to " << synth_out << "/mentions.jsonl\n";
            return 0;
        }
        if (ingest_cmd->parsed()) {
            PipelineConfig cfg = ingest_flags.resolve();
            if (!mentions_path.empty()) cfg.mentions_path = mentions_path;
            if (!metadata_fixture.empty()) cfg.metadata_fixture = metadata_fixture;
            if (!citation_fixture.empty()) cfg.citation_fixture = citation_fixture;
            if (!metadata_cache.empty()) cfg.metadata_cache = metadata_cache;
            if (!citation_cache.empty()) cfg.citation_cache = citation_cache;
            if (cfg.mentions_path.empty() || cfg.out_dir.empty()) {
                throw PipelineError(PipelineError::Kind::Usage, "ingest", "--mentions and --out are required");
            }
            fs::create_directories(cfg.out_dir);
            stage_ingest(cfg, cfg.out_dir);
            return 0;
        }
        if (filter_cmd->parsed()) {
            PipelineConfig cfg = filter_flags.resolve();
            if (degree_z > 0) cfg.bot_filter.degree_z_threshold = degree_z;
            if (density_z > 0) cfg.bot_filter.density_z_threshold = density_z;
            if (density_bin > 0) cfg.bot_filter.density_bin = density_bin;
            if (events_path.empty() || cfg.out_dir.empty()) {
                throw PipelineError(PipelineError::Kind::Usage, "filter-bots", "--events and --out are required");
            }
            fs::create_directories(cfg.out_dir);
            stage_filter_bots(events_path, cfg.bot_filter, cfg.out_dir);
            return 0;
        }
        if (build_cmd->parsed()) {
            PipelineConfig cfg = build_flags.resolve();
            if (build_events.empty() || build_papers.empty() || cfg.out_dir.empty()) {
                throw PipelineError(PipelineError::Kind::Usage, "build", "--events, --papers and --out are required");
            }
            fs::create_directories(cfg.out_dir);
            stage_build(build_events, build_papers, cfg.ssn, cfg.out_dir);
            return 0;
        }
        if (analyze_cmd->parsed()) {
            PipelineConfig cfg = analyze_flags.resolve();
            if (analyze_graph.empty() || cfg.out_dir.empty()) {
                throw PipelineError(PipelineError::Kind::Usage, "analyze", "--graph and --out are required");
            }
            stage_analyze(analyze_graph, cfg, cfg.out_dir);
            return 0;
        }
        if (report_cmd->parsed()) {
            std::cout << render_report(report_dir);
            return 0;
        }
        if (run_cmd->parsed()) {
            PipelineConfig cfg = run_flags.resolve();
            if (!run_mentions.empty()) cfg.mentions_path = run_mentions;
            if (!run_metadata.empty()) cfg.metadata_fixture = run_metadata;
            if (!run_citations.empty()) cfg.citation_fixture = run_citations;
            StageCounts counts = run_pipeline(cfg);
            std::cout << "events " << counts.events_parsed << " -> " << counts.events_after_bot_filter
                      << " after bot filter; " << counts.vertices << " vertices";
            for (const auto& [name, n] : counts.edges_per_relation) {
                std::cout << "; " << name << " edges " << n;
            }
            std::cout << "\n";
            return 0;
        }
    } catch (const PipelineError& e) {
        return fail(e, static_cast<int>(e.kind));
    } catch (const std::invalid_argument& e) {
        return fail(e, 2);
    } catch (const std::exception& e) {
        return fail(e, 3);
    }
    return 1;
}
