#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ssnet/analyze.hpp"
#include "ssnet/graph_io.hpp"
#include "ssnet/ingest.hpp"
#include "ssnet/pipeline.hpp"
#include "ssnet/synth.hpp"

namespace fs = std::filesystem;
using namespace ssnet;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("ssnet_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string write_synth_stream(const fs::path& dir, int bots = 0) {
    SynthConfig cfg;
    cfg.n_papers = 60;
    cfg.n_users = 80;
    cfg.n_blocks = 3;
    cfg.p_out = 0.02;
    cfg.bot_count = bots;
    cfg.seed = 14;
    auto out = generate_stream(cfg);
    std::string path = (dir / "mentions.jsonl").string();
    write_stream_jsonl(out.events, path);
    return path;
}

PipelineConfig basic_config(const std::string& mentions, const std::string& out_dir) {
    PipelineConfig cfg;
    cfg.mentions_path = mentions;
    cfg.out_dir = out_dir;
    cfg.resolutions = {1.0};
    cfg.seed = 3;
    return cfg;
}

}  // namespace

TEST_CASE("pipeline end-to-end produces the full artifact bundle") {
    TempDir tmp("e2e");
    auto mentions = write_synth_stream(tmp.path);
    auto cfg = basic_config(mentions, (tmp.path / "run").string());
    StageCounts counts = run_pipeline(cfg);

    CHECK(counts.events_parsed > 0);
    CHECK(counts.events_after_bot_filter == counts.events_parsed);  // clean stream
    CHECK(counts.vertices > 0);
    CHECK(counts.edges_per_relation.at("ssn") > 0);
    CHECK(counts.edges_per_relation.count("coauthorship"));

    for (const char* name :
         {"events.jsonl", "papers.jsonl", "ingest_stats.json", "events_filtered.jsonl",
          "bot_audit.csv", "graph.graphml", "edges_ssn.csv", "manifest.json",
          "report/degree_hist.csv", "report/power_law.csv", "report/partition_1.csv",
          "report/partition_compare.csv", "report/aggregate_category.graphml",
          "report/path_metrics.csv", "report/centrality.csv", "report/centrality_groups.csv"}) {
        CHECK_MESSAGE(fs::exists(tmp.path / "run" / name), name);
    }
}

TEST_CASE("pipeline counts reconcile with the written artifacts") {
    TempDir tmp("counts");
    auto mentions = write_synth_stream(tmp.path);
    auto cfg = basic_config(mentions, (tmp.path / "run").string());
    StageCounts counts = run_pipeline(cfg);

    auto kept = read_events((tmp.path / "run" / "events_filtered.jsonl").string());
    CHECK(kept.size() == counts.events_after_bot_filter);
    auto graph = read_graphml_file((tmp.path / "run" / "graph.graphml").string());
    CHECK(graph.vertices().size() == counts.vertices);
    CHECK(graph.edge_family().at("ssn").size() == counts.edges_per_relation.at("ssn"));
}

TEST_CASE("reruns are byte-identical") {
    TempDir tmp("rerun");
    auto mentions = write_synth_stream(tmp.path);
    auto cfg_a = basic_config(mentions, (tmp.path / "a").string());
    auto cfg_b = basic_config(mentions, (tmp.path / "b").string());
    run_pipeline(cfg_a);
    run_pipeline(cfg_b);

    // the manifest embeds digests of every other artifact, so comparing it
    // compares the whole bundle
    CHECK(slurp(tmp.path / "a" / "manifest.json") == slurp(tmp.path / "b" / "manifest.json"));
}

TEST_CASE("running the stages separately reproduces the monolithic run") {
    TempDir tmp("staged");
    auto mentions = write_synth_stream(tmp.path);
    auto mono_cfg = basic_config(mentions, (tmp.path / "mono").string());
    run_pipeline(mono_cfg);

    fs::path staged = tmp.path / "staged";
    fs::create_directories(staged);
    auto cfg = basic_config(mentions, staged.string());
    stage_ingest(cfg, staged.string());
    stage_filter_bots((staged / "events.jsonl").string(), cfg.bot_filter, staged.string());
    stage_build((staged / "events_filtered.jsonl").string(), (staged / "papers.jsonl").string(),
                cfg.ssn, staged.string());
    stage_analyze((staged / "graph.graphml").string(), cfg, (staged / "report").string());

    for (const char* name : {"events.jsonl", "papers.jsonl", "events_filtered.jsonl",
                             "graph.graphml", "report/partition_1.csv", "report/centrality.csv"}) {
        CHECK(sha256_file((staged / name).string()) ==
              sha256_file((tmp.path / "mono" / name).string()));
    }
}

TEST_CASE("pipeline filters planted bots before building") {
    TempDir tmp("bots");
    auto mentions = write_synth_stream(tmp.path, 3);
    auto cfg = basic_config(mentions, (tmp.path / "run").string());
    StageCounts counts = run_pipeline(cfg);
    CHECK(counts.users_removed == 3);
    CHECK(counts.events_after_bot_filter < counts.events_parsed);
    auto audit = slurp(tmp.path / "run" / "bot_audit.csv");
    CHECK(audit.find("bot0000") != std::string::npos);
    CHECK(audit.find("\nuser0") == std::string::npos);  // no regular-user rows
}

TEST_CASE("empty mentions input fails with an input-class error and cleans up") {
    TempDir tmp("empty");
    std::ofstream((tmp.path / "mentions.jsonl").string()).close();
    auto cfg = basic_config((tmp.path / "mentions.jsonl").string(), (tmp.path / "run").string());
    try {
        run_pipeline(cfg);
        FAIL("expected PipelineError");
    } catch (const PipelineError& e) {
        CHECK(e.kind == PipelineError::Kind::Input);
    }
    CHECK_FALSE(fs::exists(tmp.path / "run"));
}

TEST_CASE("missing mentions path is an input error") {
    TempDir tmp("missing");
    auto cfg = basic_config((tmp.path / "nope.jsonl").string(), (tmp.path / "run").string());
    try {
        run_pipeline(cfg);
        FAIL("expected PipelineError");
    } catch (const PipelineError& e) {
        CHECK(e.kind == PipelineError::Kind::Input);
    }
}

TEST_CASE("config validation catches usage errors") {
    PipelineConfig cfg;
    try {
        cfg.validate();
        FAIL("expected PipelineError");
    } catch (const PipelineError& e) {
        CHECK(e.kind == PipelineError::Kind::Usage);
    }
}

TEST_CASE("load_pipeline_config reads every override") {
    TempDir tmp("config");
    std::ofstream out(tmp.path / "cfg.json");
    out << R"({
        "mentions_path": "m.jsonl",
        "out_dir": "runs/x",
        "seed": 42,
        "jobs": 2,
        "time_window": 3600,
        "min_interval": 2,
        "rt_pair_rule": "max",
        "degree_z_threshold": 4.0,
        "density_bin": 600,
        "resolutions": [0.5, 2.0],
        "attributes": ["subcategory", "compound"],
        "relation": "coauthorship"
    })";
    out.close();
    auto cfg = load_pipeline_config((tmp.path / "cfg.json").string());
    CHECK(cfg.mentions_path == "m.jsonl");
    CHECK(cfg.out_dir == "runs/x");
    CHECK(cfg.seed == 42);
    CHECK(cfg.jobs == 2);
    CHECK(cfg.ssn.time_window == 3600);
    CHECK(cfg.ssn.min_interval == 2);
    CHECK(cfg.ssn.rt_pair_rule == RtPairRule::Max);
    CHECK(cfg.bot_filter.degree_z_threshold == doctest::Approx(4.0));
    CHECK(cfg.bot_filter.density_bin == 600);
    CHECK(cfg.resolutions == std::vector<double>{0.5, 2.0});
    REQUIRE(cfg.attributes.size() == 2);
    CHECK(cfg.attributes[0] == AttributeMode::Subcategory);
    CHECK(cfg.attributes[1] == AttributeMode::Compound);
    CHECK(cfg.relation == "coauthorship");
}

TEST_CASE("malformed config json is an input error") {
    TempDir tmp("badcfg");
    std::ofstream(tmp.path / "cfg.json") << "{ not json";
    try {
        load_pipeline_config((tmp.path / "cfg.json").string());
        FAIL("expected PipelineError");
    } catch (const PipelineError& e) {
        CHECK(e.kind == PipelineError::Kind::Input);
    }
}

TEST_CASE("analyze stage on a hand-written two-clique graph finds the cliques") {
    TempDir tmp("handgraph");
    MultiRelationalGraph graph;
    EdgeSet ssn("ssn");
    auto pid = [](int i) { return "1401.000" + std::to_string(10 + i); };
    for (int i = 0; i < 8; ++i) {
        PaperRecord rec;
        rec.paper_id = pid(i);
        rec.primary_category = i < 4 ? "cs.IR" : "math.CO";
        rec.enriched = true;
        graph.add_vertex(rec);
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            ssn.add_weight(pid(i), pid(j), 1.0);
            ssn.add_weight(pid(4 + i), pid(4 + j), 1.0);
        }
    }
    ssn.add_weight(pid(0), pid(4), 0.1);
    graph.add_relation(std::move(ssn));
    write_graphml_file(graph, (tmp.path / "g.graphml").string());

    PipelineConfig cfg;
    cfg.mentions_path = "unused";
    cfg.out_dir = "unused";
    cfg.resolutions = {1.0};
    stage_analyze((tmp.path / "g.graphml").string(), cfg, (tmp.path / "report").string());

    // partition file puts each clique in one community
    std::map<std::string, int> part;
    std::istringstream in(slurp(tmp.path / "report" / "partition_1.csv"));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        auto comma = line.find(',');
        if (comma != std::string::npos) part[line.substr(0, comma)] = std::stoi(line.substr(comma + 1));
    }
    REQUIRE(part.size() == 8);
    for (int i = 1; i < 4; ++i) {
        CHECK(part.at(pid(i)) == part.at(pid(0)));
        CHECK(part.at(pid(4 + i)) == part.at(pid(4)));
    }
    CHECK(part.at(pid(0)) != part.at(pid(4)));

    // comparison row agrees with the category split (identical partitions)
    auto compare = slurp(tmp.path / "report" / "partition_compare.csv");
    CHECK(compare.find("res_1:attr_category,1,1\n") != std::string::npos);
}

TEST_CASE("render_report surfaces headline metrics and the group table") {
    TempDir tmp("report");
    auto mentions = write_synth_stream(tmp.path);
    auto cfg = basic_config(mentions, (tmp.path / "run").string());
    run_pipeline(cfg);
    std::string report = render_report((tmp.path / "run").string());
    CHECK(report.find("Path metrics") != std::string::npos);
    CHECK(report.find("Power-law fit") != std::string::npos);
    CHECK(report.find("Top groups by betweenness") != std::string::npos);
    CHECK(report.find("Group\tCloseness\tBetweenness\tNormalized") != std::string::npos);
}
