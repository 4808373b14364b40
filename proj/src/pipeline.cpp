#include "ssnet/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "ssnet/graph_io.hpp"
#include "ssnet/ingest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ssnet {

namespace {

RtPairRule rt_rule_from_string(const std::string& s) {
    if (s == "mean") return RtPairRule::Mean;
    if (s == "min") return RtPairRule::Min;
    if (s == "max") return RtPairRule::Max;
    throw PipelineError(PipelineError::Kind::Usage, "config", "unknown rt_pair_rule: " + s);
}

std::string rt_rule_name(RtPairRule rule) {
    switch (rule) {
        case RtPairRule::Mean: return "mean";
        case RtPairRule::Min: return "min";
        case RtPairRule::Max: return "max";
    }
    return "?";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PipelineError(PipelineError::Kind::Internal, "io", "cannot write " + path);
    out << content;
}

// Aggregated group graph as GraphML: nodes carry self_mass, edges weight.
std::string aggregate_graphml(const AggregatedGraph& agg) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    out << "  <key id=\"v_self_mass\" for=\"node\" attr.name=\"self_mass\" attr.type=\"double\"/>\n";
    out << "  <key id=\"e_weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
    out << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    for (std::size_t g = 0; g < agg.group_names.size(); ++g) {
        out << "    <node id=\"" << agg.group_names[g] << "\"><data key=\"v_self_mass\">"
            << format_double(agg.self_mass[g]) << "</data></node>\n";
    }
    for (const auto& [key, w] : agg.edges) {
        out << "    <edge source=\"" << agg.group_names[static_cast<std::size_t>(key.first)]
            << "\" target=\"" << agg.group_names[static_cast<std::size_t>(key.second)]
            << "\"><data key=\"e_weight\">" << format_double(w) << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

std::string resolution_tag(double r) { return format_double(r); }

}  // namespace

void PipelineConfig::validate() const {
    if (mentions_path.empty()) {
        throw PipelineError(PipelineError::Kind::Usage, "config", "mentions_path is required");
    }
    if (out_dir.empty()) {
        throw PipelineError(PipelineError::Kind::Usage, "config", "out_dir is required");
    }
    if (resolutions.empty()) {
        throw PipelineError(PipelineError::Kind::Usage, "config", "resolutions must be non-empty");
    }
    ssn.validate();
    bot_filter.validate();
}

PipelineConfig load_pipeline_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PipelineError(PipelineError::Kind::Input, "config", "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw PipelineError(PipelineError::Kind::Input, "config", e.what());
    }
    PipelineConfig cfg;
    cfg.mentions_path = j.value("mentions_path", "");
    cfg.metadata_fixture = j.value("metadata_fixture", "");
    cfg.citation_fixture = j.value("citation_fixture", "");
    cfg.metadata_cache = j.value("metadata_cache", "");
    cfg.citation_cache = j.value("citation_cache", "");
    cfg.out_dir = j.value("out_dir", "");
    cfg.seed = j.value("seed", 0ULL);
    cfg.jobs = j.value("jobs", 1);
    cfg.relation = j.value("relation", "ssn");
    if (j.contains("time_window")) cfg.ssn.time_window = j["time_window"].get<std::int64_t>();
    if (j.contains("min_interval")) cfg.ssn.min_interval = j["min_interval"].get<std::int64_t>();
    if (j.contains("rt_pair_rule")) cfg.ssn.rt_pair_rule = rt_rule_from_string(j["rt_pair_rule"]);
    if (j.contains("degree_z_threshold")) cfg.bot_filter.degree_z_threshold = j["degree_z_threshold"];
    if (j.contains("density_z_threshold")) cfg.bot_filter.density_z_threshold = j["density_z_threshold"];
    if (j.contains("density_bin")) cfg.bot_filter.density_bin = j["density_bin"].get<std::int64_t>();
    if (j.contains("resolutions")) cfg.resolutions = j["resolutions"].get<std::vector<double>>();
    if (j.contains("attributes")) {
        cfg.attributes.clear();
        for (const auto& a : j["attributes"]) {
            cfg.attributes.push_back(attribute_mode_from_string(a.get<std::string>()));
        }
    }
    return cfg;
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PipelineError(PipelineError::Kind::Input, "digest", "cannot open " + path);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[65536];
    while (in.good()) {
        in.read(buf, sizeof(buf));
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

void stage_ingest(const PipelineConfig& cfg, const std::string& out_dir) {
    ParseStats stats;
    std::vector<MentionEvent> events;
    try {
        events = parse_mentions_file(cfg.mentions_path, stats);
    } catch (const std::exception& e) {
        throw PipelineError(PipelineError::Kind::Input, "ingest", e.what());
    }
    if (events.empty()) {
        throw PipelineError(PipelineError::Kind::Input, "ingest", "no events parsed from " + cfg.mentions_path);
    }

    std::set<std::string> paper_ids;
    for (const auto& ev : events) paper_ids.insert(ev.paper_id);

    std::map<std::string, PaperRecord> papers;
    if (!cfg.metadata_fixture.empty()) {
        FixtureMetadataClient client(cfg.metadata_fixture);
        papers = enrich_metadata(paper_ids, client, cfg.metadata_cache);
    } else {
        for (const auto& id : paper_ids) {
            PaperRecord stub;
            stub.paper_id = id;
            papers[id] = std::move(stub);
        }
    }
    if (!cfg.citation_fixture.empty()) {
        FixtureCitationClient client(cfg.citation_fixture);
        enrich_citations(papers, client, cfg.citation_cache);
    }

    write_events(events, out_dir + "/events.jsonl");
    write_paper_records(papers, out_dir + "/papers.jsonl");

    json stats_json;
    stats_json["lines_read"] = stats.lines_read;
    stats_json["malformed_lines"] = stats.malformed_lines;
    stats_json["urls_skipped"] = stats.urls_skipped;
    stats_json["events_parsed"] = events.size();
    write_text_file(out_dir + "/ingest_stats.json", stats_json.dump(2) + "\n");
}

void stage_filter_bots(const std::string& events_path, const BotFilterConfig& cfg,
                       const std::string& out_dir) {
    auto events = read_events(events_path);
    auto result = filter_bots(events, cfg);
    write_events(result.kept, out_dir + "/events_filtered.jsonl");
    std::ostringstream audit;
    write_bot_audit_csv(result.removed, audit);
    write_text_file(out_dir + "/bot_audit.csv", audit.str());
}

void stage_build(const std::string& events_path, const std::string& papers_path,
                 const SsnConfig& cfg, const std::string& out_dir) {
    auto events = read_events(events_path);
    if (events.empty()) {
        throw PipelineError(PipelineError::Kind::Input, "build", "no events in " + events_path);
    }
    auto papers = read_paper_records(papers_path);

    EdgeSet ssn = build_ssn(events, cfg);
    EdgeSet coauth = build_coauthorship(papers);

    MultiRelationalGraph graph;
    for (auto& [id, rec] : papers) graph.add_vertex(rec);
    // Events may reference papers the enrichment file does not cover.
    for (const auto& ev : events) {
        if (!graph.has_vertex(ev.paper_id)) {
            PaperRecord stub;
            stub.paper_id = ev.paper_id;
            graph.add_vertex(std::move(stub));
        }
    }
    graph.add_relation(std::move(ssn));
    graph.add_relation(std::move(coauth));
    graph.validate();

    write_graphml_file(graph, out_dir + "/graph.graphml");
    for (const auto& [name, es] : graph.edge_family()) {
        std::ostringstream csv;
        write_edge_csv(es, csv);
        write_text_file(out_dir + "/edges_" + name + ".csv", csv.str());
    }
}

void stage_analyze(const std::string& graphml_path, const PipelineConfig& cfg,
                   const std::string& out_dir) {
    MultiRelationalGraph graph;
    try {
        graph = read_graphml_file(graphml_path);
    } catch (const std::exception& e) {
        throw PipelineError(PipelineError::Kind::Input, "analyze", e.what());
    }
    if (!graph.has_relation(cfg.relation)) {
        throw PipelineError(PipelineError::Kind::Input, "analyze",
                            "relation '" + cfg.relation + "' not present in " + graphml_path);
    }
    GraphView view = single_relation_view(graph, cfg.relation);

    fs::create_directories(out_dir);

    auto hist = degree_distribution(view);
    {
        std::ostringstream csv;
        write_degree_hist_csv(hist, csv);
        write_text_file(out_dir + "/degree_hist.csv", csv.str());
    }

    {
        std::vector<int> degrees;
        for (std::size_t i = 0; i < view.vertex_count(); ++i) degrees.push_back(view.degree(static_cast<int>(i)));
        std::ostringstream csv;
        try {
            PowerLawFit fit = fit_power_law(degrees);
            write_power_law_csv(fit, csv);
        } catch (const std::exception&) {
            csv << "gamma,x_min,ks,n_tail,low_confidence\n";  // degenerate degree sequence
        }
        write_text_file(out_dir + "/power_law.csv", csv.str());
    }

    // named partitions for the comparison matrix
    std::vector<std::pair<std::string, std::map<std::string, int>>> named_partitions;
    for (double r : cfg.resolutions) {
        Partition part = detect_communities(view, r, cfg.seed);
        std::ostringstream csv;
        write_partition_csv(part.assignment, csv);
        write_text_file(out_dir + "/partition_" + resolution_tag(r) + ".csv", csv.str());
        named_partitions.emplace_back("res_" + resolution_tag(r), std::move(part.assignment));
    }

    AttributeAssignment first_attr;
    for (std::size_t a = 0; a < cfg.attributes.size(); ++a) {
        AttributeAssignment attr = attribute_partition(graph, cfg.attributes[a]);
        std::string name = attribute_mode_name(cfg.attributes[a]);
        AggregatedGraph agg = aggregate_by_attribute(view, attr.assignment, attr.label_names);
        write_text_file(out_dir + "/aggregate_" + name + ".graphml", aggregate_graphml(agg));
        named_partitions.emplace_back("attr_" + name, attr.assignment);
        if (a == 0) first_attr = attr;
    }

    {
        std::ostringstream csv;
        csv << "pair,nmi,ari\n";
        for (std::size_t i = 0; i < named_partitions.size(); ++i) {
            for (std::size_t j = i + 1; j < named_partitions.size(); ++j) {
                auto agree = compare_partitions(named_partitions[i].second, named_partitions[j].second);
                csv << named_partitions[i].first << ':' << named_partitions[j].first << ','
                    << format_double(agree.nmi) << ',' << format_double(agree.ari) << '\n';
            }
        }
        write_text_file(out_dir + "/partition_compare.csv", csv.str());
    }

    {
        std::ostringstream csv;
        try {
            PathMetrics pm = path_metrics(view);
            write_path_metrics_csv(pm, csv);
        } catch (const std::exception&) {
            csv << "diameter,avg_path_length,component_coverage\n";
        }
        write_text_file(out_dir + "/path_metrics.csv", csv.str());
    }

    {
        CentralityTable table = centrality(view, cfg.jobs);
        std::ostringstream csv;
        write_centrality_csv(table, csv);
        write_text_file(out_dir + "/centrality.csv", csv.str());

        std::ostringstream group_csv;
        if (!first_attr.assignment.empty()) {
            CentralityTable groups = centrality_groups(table, first_attr.assignment, first_attr.label_names);
            write_centrality_csv(groups, group_csv);
        } else {
            group_csv << "id,closeness,reciprocal_closeness,betweenness,normalized_betweenness\n";
        }
        write_text_file(out_dir + "/centrality_groups.csv", group_csv.str());
    }
}

StageCounts run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    bool created_out = false;
    if (!fs::exists(cfg.out_dir)) {
        fs::create_directories(cfg.out_dir);
        created_out = true;
    }

    StageCounts counts;
    try {
        stage_ingest(cfg, cfg.out_dir);
        {
            std::ifstream in(cfg.out_dir + "/ingest_stats.json");
            json stats;
            in >> stats;
            counts.lines_read = stats["lines_read"];
            counts.malformed_lines = stats["malformed_lines"];
            counts.events_parsed = stats["events_parsed"];
        }
        stage_filter_bots(cfg.out_dir + "/events.jsonl", cfg.bot_filter, cfg.out_dir);
        {
            auto kept = read_events(cfg.out_dir + "/events_filtered.jsonl");
            counts.events_after_bot_filter = kept.size();
            std::ifstream audit(cfg.out_dir + "/bot_audit.csv");
            std::string line;
            std::set<std::string> users;
            std::getline(audit, line);  // header
            while (std::getline(audit, line)) {
                if (!line.empty()) users.insert(line.substr(0, line.find(',')));
            }
            counts.users_removed = users.size();
        }
        if (counts.events_after_bot_filter == 0) {
            throw PipelineError(PipelineError::Kind::Input, "filter-bots", "no events left after bot filtering");
        }
        stage_build(cfg.out_dir + "/events_filtered.jsonl", cfg.out_dir + "/papers.jsonl", cfg.ssn,
                    cfg.out_dir);
        {
            MultiRelationalGraph graph = read_graphml_file(cfg.out_dir + "/graph.graphml");
            counts.vertices = graph.vertices().size();
            for (const auto& [name, es] : graph.edge_family()) {
                counts.edges_per_relation[name] = es.size();
            }
        }
        stage_analyze(cfg.out_dir + "/graph.graphml", cfg, cfg.out_dir + "/report");

        json manifest;
        manifest["config"]["mentions_path"] = cfg.mentions_path;
        manifest["config"]["metadata_fixture"] = cfg.metadata_fixture;
        manifest["config"]["citation_fixture"] = cfg.citation_fixture;
        manifest["config"]["time_window"] = cfg.ssn.time_window;
        manifest["config"]["min_interval"] = cfg.ssn.min_interval;
        manifest["config"]["rt_pair_rule"] = rt_rule_name(cfg.ssn.rt_pair_rule);
        manifest["config"]["degree_z_threshold"] = cfg.bot_filter.degree_z_threshold;
        manifest["config"]["density_z_threshold"] = cfg.bot_filter.density_z_threshold;
        manifest["config"]["density_bin"] = cfg.bot_filter.density_bin;
        manifest["config"]["resolutions"] = cfg.resolutions;
        {
            std::vector<std::string> attrs;
            for (auto a : cfg.attributes) attrs.push_back(attribute_mode_name(a));
            manifest["config"]["attributes"] = attrs;
        }
        manifest["config"]["relation"] = cfg.relation;
        manifest["seed"] = cfg.seed;
        manifest["inputs"][cfg.mentions_path] = sha256_file(cfg.mentions_path);
        if (!cfg.metadata_fixture.empty()) {
            manifest["inputs"][cfg.metadata_fixture] = sha256_file(cfg.metadata_fixture);
        }
        if (!cfg.citation_fixture.empty()) {
            manifest["inputs"][cfg.citation_fixture] = sha256_file(cfg.citation_fixture);
        }
        manifest["counts"]["lines_read"] = counts.lines_read;
        manifest["counts"]["malformed_lines"] = counts.malformed_lines;
        manifest["counts"]["events_parsed"] = counts.events_parsed;
        manifest["counts"]["events_after_bot_filter"] = counts.events_after_bot_filter;
        manifest["counts"]["users_removed"] = counts.users_removed;
        manifest["counts"]["vertices"] = counts.vertices;
        manifest["counts"]["edges_per_relation"] = counts.edges_per_relation;

        std::vector<fs::path> outputs;
        for (const auto& entry : fs::recursive_directory_iterator(cfg.out_dir)) {
            if (entry.is_regular_file() && entry.path().filename() != "manifest.json") {
                outputs.push_back(entry.path());
            }
        }
        std::sort(outputs.begin(), outputs.end());
        for (const auto& path : outputs) {
            manifest["outputs"][fs::relative(path, cfg.out_dir).generic_string()] = sha256_file(path.string());
        }
        write_text_file(cfg.out_dir + "/manifest.json", manifest.dump(2) + "\n");
    } catch (...) {
        std::error_code ec;
        if (created_out) {
            fs::remove_all(cfg.out_dir, ec);
        } else {
            // Only clear what this run produced.
            for (const char* name :
                 {"events.jsonl", "papers.jsonl", "ingest_stats.json", "events_filtered.jsonl",
                  "bot_audit.csv", "graph.graphml", "edges_ssn.csv", "edges_coauthorship.csv",
                  "manifest.json"}) {
                fs::remove(fs::path(cfg.out_dir) / name, ec);
            }
            fs::remove_all(fs::path(cfg.out_dir) / "report", ec);
        }
        throw;
    }
    return counts;
}

std::string render_report(const std::string& run_dir) {
    std::ostringstream out;
    auto read_all = [](const fs::path& p) -> std::string {
        std::ifstream in(p);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };

    fs::path report = fs::path(run_dir) / "report";
    if (!fs::exists(report)) report = run_dir;  // allow pointing at the report dir itself

    out << "Run summary: " << run_dir << "\n\n";

    fs::path pm_path = report / "path_metrics.csv";
    if (fs::exists(pm_path)) {
        std::istringstream in(read_all(pm_path));
        std::string header, row;
        std::getline(in, header);
        std::getline(in, row);
        out << "Path metrics (diameter, avg path length, coverage): " << row << "\n";
    }
    fs::path pl_path = report / "power_law.csv";
    if (fs::exists(pl_path)) {
        std::istringstream in(read_all(pl_path));
        std::string header, row;
        std::getline(in, header);
        std::getline(in, row);
        out << "Power-law fit (gamma, x_min, ks, n_tail, low_confidence): " << row << "\n";
    }

    fs::path groups_path = report / "centrality_groups.csv";
    if (fs::exists(groups_path)) {
        std::istringstream in(read_all(groups_path));
        std::string line;
        std::getline(in, line);  // header
        struct Row {
            std::string id, closeness, betweenness, normalized;
            double bw = 0.0;
        };
        std::vector<Row> rows;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<std::string> cols;
            std::istringstream ls(line);
            std::string col;
            while (std::getline(ls, col, ',')) cols.push_back(col);
            if (cols.size() < 5) continue;
            Row r{cols[0], cols[1], cols[3], cols[4], 0.0};
            try {
                r.bw = std::stod(cols[3]);
            } catch (...) {
            }
            rows.push_back(std::move(r));
        }
        std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.bw > b.bw; });
        out << "\nTop groups by betweenness\n";
        out << "Group\tCloseness\tBetweenness\tNormalized\n";
        for (std::size_t i = 0; i < rows.size() && i < 10; ++i) {
            out << rows[i].id << '\t' << rows[i].closeness << '\t' << rows[i].betweenness << '\t'
                << rows[i].normalized << '\n';
        }
    }
    return out.str();
}

}  // namespace ssnet
