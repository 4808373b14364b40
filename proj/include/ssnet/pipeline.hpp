#ifndef SSNET_PIPELINE_HPP
#define SSNET_PIPELINE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ssnet/analyze.hpp"
#include "ssnet/build.hpp"
#include "ssnet/model.hpp"

namespace ssnet {

struct PipelineConfig {
    std::string mentions_path;
    std::string metadata_fixture;   // optional
    std::string citation_fixture;   // optional
    std::string metadata_cache;     // optional
    std::string citation_cache;     // optional
    SsnConfig ssn;
    BotFilterConfig bot_filter;
    std::vector<double> resolutions = {0.25, 1.0, 4.0};
    std::vector<AttributeMode> attributes = {AttributeMode::Category};
    std::string relation = "ssn";  // relation analyzed
    std::string out_dir;
    std::uint64_t seed = 0;
    int jobs = 1;

    void validate() const;
};

// Reads the declarative config file (JSON, keys matching the field names).
PipelineConfig load_pipeline_config(const std::string& path);

struct StageCounts {
    std::size_t lines_read = 0;
    std::size_t malformed_lines = 0;
    std::size_t events_parsed = 0;
    std::size_t events_after_bot_filter = 0;
    std::size_t users_removed = 0;
    std::size_t vertices = 0;
    std::map<std::string, std::size_t> edges_per_relation;
};

// Failure classification for CLI exit codes.
struct PipelineError : std::runtime_error {
    enum class Kind { Usage = 1, Input = 2, Internal = 3 };
    PipelineError(Kind kind, const std::string& stage, const std::string& message)
        : std::runtime_error("[" + stage + "] " + message), kind(kind) {}
    Kind kind;
};

// Executes ingest -> filter -> build -> analyze -> report into cfg.out_dir
// and writes manifest.json (config, seed, input digests, per-stage counts,
// output digests). Partial outputs are removed on failure.
StageCounts run_pipeline(const PipelineConfig& cfg);

// Standalone stages; each consumes the previous stage's artifacts.
// Every function writes into out_dir and returns quietly on success.
void stage_ingest(const PipelineConfig& cfg, const std::string& out_dir);
void stage_filter_bots(const std::string& events_path, const BotFilterConfig& cfg,
                       const std::string& out_dir);
void stage_build(const std::string& events_path, const std::string& papers_path,
                 const SsnConfig& cfg, const std::string& out_dir);
void stage_analyze(const std::string& graphml_path, const PipelineConfig& cfg,
                   const std::string& out_dir);

// Human-readable summary of a run directory: headline metrics and the top-10
// betweenness groups (closeness / betweenness / normalized columns).
std::string render_report(const std::string& run_dir);

std::string sha256_file(const std::string& path);

}  // namespace ssnet

#endif
