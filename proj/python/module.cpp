// Python bindings for the ssnet core. Graphs cross the boundary as plain
// edge lists [(src, dst, weight)] plus an optional vertex list, so callers
// can stay in ordinary python data structures.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <set>
#include <sstream>

#include "ssnet/analyze.hpp"
#include "ssnet/build.hpp"
#include "ssnet/graph_io.hpp"
#include "ssnet/ingest.hpp"
#include "ssnet/model.hpp"
#include "ssnet/pipeline.hpp"
#include "ssnet/synth.hpp"

namespace py = pybind11;
using namespace ssnet;

namespace {

using PyEdge = std::tuple<std::string, std::string, double>;

EdgeSet edges_from_list(const std::vector<PyEdge>& edges, const std::string& relation = "edges") {
    EdgeSet es(relation);
    for (const auto& [a, b, w] : edges) es.add_weight(a, b, w);
    return es;
}

GraphView view_from_edges(const std::vector<PyEdge>& edges,
                          const std::vector<std::string>& vertices) {
    EdgeSet es = edges_from_list(edges);
    std::vector<std::string> ids = vertices;
    for (const auto& [key, w] : es.edges()) {
        ids.push_back(key.first);
        ids.push_back(key.second);
    }
    return GraphView(std::move(ids), es);
}

std::vector<PyEdge> edges_to_list(const EdgeSet& es) {
    std::vector<PyEdge> out;
    out.reserve(es.size());
    for (const auto& [key, w] : es.edges()) out.emplace_back(key.first, key.second, w);
    return out;
}

}  // namespace

PYBIND11_MODULE(_ssnet, m) {
    m.doc() = "Social scholarly network construction and analysis";

    py::class_<MentionEvent>(m, "MentionEvent")
        .def(py::init<>())
        .def(py::init([](std::string user_id, std::string paper_id, std::int64_t timestamp,
                         std::uint64_t retweet_count) {
                 return MentionEvent{std::move(user_id), std::move(paper_id), timestamp, retweet_count};
             }),
             py::arg("user_id"), py::arg("paper_id"), py::arg("timestamp"),
             py::arg("retweet_count") = 0)
        .def_readwrite("user_id", &MentionEvent::user_id)
        .def_readwrite("paper_id", &MentionEvent::paper_id)
        .def_readwrite("timestamp", &MentionEvent::timestamp)
        .def_readwrite("retweet_count", &MentionEvent::retweet_count)
        .def("__repr__", [](const MentionEvent& ev) {
            return "MentionEvent(" + ev.user_id + ", " + ev.paper_id + ", " +
                   std::to_string(ev.timestamp) + ")";
        });

    py::class_<PaperRecord>(m, "PaperRecord")
        .def(py::init<>())
        .def_readwrite("paper_id", &PaperRecord::paper_id)
        .def_readwrite("title", &PaperRecord::title)
        .def_readwrite("authors", &PaperRecord::authors)
        .def_readwrite("primary_category", &PaperRecord::primary_category)
        .def_readwrite("published", &PaperRecord::published)
        .def_readwrite("summary", &PaperRecord::summary)
        .def_readwrite("citation_count", &PaperRecord::citation_count)
        .def_readwrite("citation_cluster_id", &PaperRecord::citation_cluster_id)
        .def_readwrite("enriched", &PaperRecord::enriched)
        .def("category", &PaperRecord::category)
        .def("subcategory", &PaperRecord::subcategory);

    py::class_<PowerLawFit>(m, "PowerLawFit")
        .def_readonly("gamma", &PowerLawFit::gamma)
        .def_readonly("x_min", &PowerLawFit::x_min)
        .def_readonly("ks_statistic", &PowerLawFit::ks_statistic)
        .def_readonly("n_tail", &PowerLawFit::n_tail)
        .def_readonly("low_confidence", &PowerLawFit::low_confidence);

    py::class_<Partition>(m, "Partition")
        .def_readonly("assignment", &Partition::assignment)
        .def_readonly("modularity", &Partition::modularity)
        .def_readonly("resolution", &Partition::resolution)
        .def_readonly("seed", &Partition::seed)
        .def("community_count", &Partition::community_count);

    py::class_<PathMetrics>(m, "PathMetrics")
        .def_readonly("diameter", &PathMetrics::diameter)
        .def_readonly("avg_path_length", &PathMetrics::avg_path_length)
        .def_readonly("component_coverage", &PathMetrics::component_coverage);

    m.def("normalize_link", [](const std::string& url) {
        auto id = try_normalize_link(url);
        if (!id) throw py::value_error("not a paper link: " + url);
        return *id;
    });
    m.def("try_normalize_link", &try_normalize_link);

    m.def("parse_mentions", [](const std::string& path) {
        ParseStats stats;
        auto events = parse_mentions_file(path, stats);
        py::dict stats_dict;
        stats_dict["lines_read"] = stats.lines_read;
        stats_dict["malformed_lines"] = stats.malformed_lines;
        stats_dict["urls_skipped"] = stats.urls_skipped;
        return py::make_tuple(events, stats_dict);
    });

    m.def(
        "pair_weight",
        [](std::int64_t t_i, std::int64_t t_j, double rt, std::int64_t time_window,
           std::int64_t min_interval) {
            SsnConfig cfg;
            cfg.time_window = time_window;
            cfg.min_interval = min_interval;
            return pair_weight(t_i, t_j, rt, cfg);
        },
        py::arg("t_i"), py::arg("t_j"), py::arg("rt_norm_pair"),
        py::arg("time_window") = 7 * 86400, py::arg("min_interval") = 1);

    m.def("normalize_retweets", &normalize_retweets);

    m.def(
        "build_ssn",
        [](const std::vector<MentionEvent>& events, std::int64_t time_window,
           std::int64_t min_interval, const std::string& rt_rule) {
            SsnConfig cfg;
            cfg.time_window = time_window;
            cfg.min_interval = min_interval;
            if (rt_rule == "mean") cfg.rt_pair_rule = RtPairRule::Mean;
            else if (rt_rule == "min") cfg.rt_pair_rule = RtPairRule::Min;
            else if (rt_rule == "max") cfg.rt_pair_rule = RtPairRule::Max;
            else throw py::value_error("rt_rule must be mean|min|max");
            return edges_to_list(build_ssn(events, cfg));
        },
        py::arg("events"), py::arg("time_window") = 7 * 86400, py::arg("min_interval") = 1,
        py::arg("rt_rule") = "mean");

    m.def("build_coauthorship", [](const std::map<std::string, PaperRecord>& papers) {
        return edges_to_list(build_coauthorship(papers));
    });

    m.def(
        "filter_bots",
        [](const std::vector<MentionEvent>& events, double degree_z, double density_z,
           std::int64_t density_bin) {
            BotFilterConfig cfg;
            cfg.degree_z_threshold = degree_z;
            cfg.density_z_threshold = density_z;
            cfg.density_bin = density_bin;
            auto result = filter_bots(events, cfg);
            py::list removed;
            for (const auto& r : result.removed) {
                py::dict d;
                d["user_id"] = r.user_id;
                d["metric"] = r.metric;
                d["score"] = r.score;
                d["threshold"] = r.threshold;
                removed.append(d);
            }
            return py::make_tuple(result.kept, removed);
        },
        py::arg("events"), py::arg("degree_z") = 3.5, py::arg("density_z") = 3.5,
        py::arg("density_bin") = 3600);

    m.def(
        "detect_communities",
        [](const std::vector<PyEdge>& edges, double resolution, std::uint64_t seed,
           const std::vector<std::string>& vertices) {
            return detect_communities(view_from_edges(edges, vertices), resolution, seed);
        },
        py::arg("edges"), py::arg("resolution") = 1.0, py::arg("seed") = 0,
        py::arg("vertices") = std::vector<std::string>{});

    m.def(
        "modularity",
        [](const std::vector<PyEdge>& edges, const std::map<std::string, int>& assignment,
           double resolution, const std::vector<std::string>& vertices) {
            return modularity(view_from_edges(edges, vertices), assignment, resolution);
        },
        py::arg("edges"), py::arg("assignment"), py::arg("resolution") = 1.0,
        py::arg("vertices") = std::vector<std::string>{});

    m.def("fit_power_law", &fit_power_law);
    m.def("sample_power_law", &sample_power_law, py::arg("gamma"), py::arg("x_min"), py::arg("n"),
          py::arg("seed"));

    m.def("compare_partitions",
          [](const std::map<std::string, int>& a, const std::map<std::string, int>& b) {
              auto agree = compare_partitions(a, b);
              return py::make_tuple(agree.nmi, agree.ari);
          });

    m.def(
        "path_metrics",
        [](const std::vector<PyEdge>& edges, const std::vector<std::string>& vertices) {
            return path_metrics(view_from_edges(edges, vertices));
        },
        py::arg("edges"), py::arg("vertices") = std::vector<std::string>{});

    m.def(
        "centrality",
        [](const std::vector<PyEdge>& edges, const std::vector<std::string>& vertices, int jobs) {
            CentralityTable table = centrality(view_from_edges(edges, vertices), jobs);
            py::list rows;
            for (const auto& r : table.rows) {
                py::dict d;
                d["id"] = r.id;
                d["closeness"] = r.closeness;
                d["reciprocal_closeness"] = r.reciprocal_closeness;
                d["betweenness"] = r.betweenness;
                d["normalized_betweenness"] = r.normalized_betweenness;
                rows.append(d);
            }
            return rows;
        },
        py::arg("edges"), py::arg("vertices") = std::vector<std::string>{}, py::arg("jobs") = 1);

    m.def(
        "generate_stream",
        [](int papers, int users, int blocks, double p_in, double p_out, int mentions_per_user,
           int bots, double bot_rate, const std::string& attachment, double innovation,
           std::uint64_t seed) {
            SynthConfig cfg;
            cfg.n_papers = papers;
            cfg.n_users = users;
            cfg.n_blocks = blocks;
            cfg.p_in = p_in;
            cfg.p_out = p_out;
            cfg.mentions_per_user = mentions_per_user;
            cfg.bot_count = bots;
            cfg.bot_rate_multiplier = bot_rate;
            cfg.attachment = attachment == "preferential" ? AttachmentMode::Preferential
                                                          : AttachmentMode::Uniform;
            cfg.innovation = innovation;
            cfg.seed = seed;
            SynthOutput out = generate_stream(cfg);
            return py::make_tuple(out.events, out.block_of_paper, out.bot_users);
        },
        py::arg("papers") = 100, py::arg("users") = 50, py::arg("blocks") = 4,
        py::arg("p_in") = 0.3, py::arg("p_out") = 0.01, py::arg("mentions_per_user") = 8,
        py::arg("bots") = 0, py::arg("bot_rate") = 50.0, py::arg("attachment") = "uniform",
        py::arg("innovation") = 1.0 / 3.0, py::arg("seed") = 0);

    m.def("run_pipeline", [](const std::string& config_path, const std::string& out_dir) {
        PipelineConfig cfg = load_pipeline_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        StageCounts counts = run_pipeline(cfg);
        py::dict d;
        d["events_parsed"] = counts.events_parsed;
        d["events_after_bot_filter"] = counts.events_after_bot_filter;
        d["vertices"] = counts.vertices;
        d["edges_per_relation"] = counts.edges_per_relation;
        return d;
    }, py::arg("config_path"), py::arg("out_dir") = "");
}
