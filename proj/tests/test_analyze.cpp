#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "ssnet/analyze.hpp"
#include "ssnet/build.hpp"
#include "ssnet/model.hpp"
#include "ssnet/synth.hpp"

using namespace ssnet;

namespace {

std::string vid(int i) { return "v" + std::to_string(100 + i); }

GraphView make_view(int n, const std::vector<std::tuple<int, int, double>>& edges) {
    EdgeSet es("g");
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back(vid(i));
    for (const auto& [a, b, w] : edges) es.add_weight(vid(a), vid(b), w);
    return GraphView(std::move(ids), es);
}

GraphView random_view(int n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (unit(rng) < p) edges.emplace_back(i, j, 1.0);
        }
    }
    return make_view(n, edges);
}

GraphView two_cliques_with_bridge() {
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
            edges.emplace_back(i, j, 1.0);
            edges.emplace_back(5 + i, 5 + j, 1.0);
        }
    }
    edges.emplace_back(0, 5, 1.0);
    return make_view(10, edges);
}

// All-pairs path counting per source; betweenness(v) summed from
// sigma_sv * sigma_vt / sigma_st over pairs, a different route than the
// dependency-accumulation implementation.
struct NaiveCentrality {
    std::vector<double> betweenness;
    std::vector<double> mean_distance;
};

NaiveCentrality naive_centrality(const GraphView& view) {
    int n = static_cast<int>(view.vertex_count());
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
    std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
    for (int s = 0; s < n; ++s) {
        dist[s][s] = 0;
        sigma[s][s] = 1.0;
        std::vector<int> frontier{s};
        while (!frontier.empty()) {
            std::vector<int> next;
            for (int u : frontier) {
                for (const auto& [v, w] : view.neighbors(u)) {
                    if (dist[s][v] < 0) {
                        dist[s][v] = dist[s][u] + 1;
                        next.push_back(v);
                    }
                    if (dist[s][v] == dist[s][u] + 1) sigma[s][v] += sigma[s][u];
                }
            }
            std::set<int> uniq(next.begin(), next.end());
            frontier.assign(uniq.begin(), uniq.end());
        }
    }
    NaiveCentrality out;
    out.betweenness.assign(n, 0.0);
    out.mean_distance.assign(n, std::nan(""));
    for (int v = 0; v < n; ++v) {
        for (int s = 0; s < n; ++s) {
            for (int t = s + 1; t < n; ++t) {
                if (s == v || t == v || dist[s][t] < 0) continue;
                if (dist[s][v] >= 0 && dist[v][t] >= 0 && dist[s][v] + dist[v][t] == dist[s][t]) {
                    out.betweenness[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                }
            }
        }
        double sum = 0.0;
        int reach = 0;
        for (int t = 0; t < n; ++t) {
            if (t != v && dist[v][t] > 0) {
                sum += dist[v][t];
                ++reach;
            }
        }
        if (reach > 0) out.mean_distance[v] = sum / reach;
    }
    return out;
}

}  // namespace

TEST_CASE("degree distribution trivial shapes") {
    auto k3 = make_view(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
    CHECK(degree_distribution(k3) == std::map<int, std::size_t>{{2, 3}});

    auto star = make_view(5, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}});
    CHECK(degree_distribution(star) == std::map<int, std::size_t>{{1, 4}, {4, 1}});

    auto isolated = make_view(5, {});
    CHECK(degree_distribution(isolated) == std::map<int, std::size_t>{{0, 5}});
}

TEST_CASE("degree histogram counts sum to vertex count") {
    auto view = random_view(40, 0.1, 3);
    std::size_t total = 0;
    for (const auto& [d, c] : degree_distribution(view)) total += c;
    CHECK(total == view.vertex_count());
}

TEST_CASE("hurwitz zeta against reference values") {
    CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(1.6449340668482264).epsilon(1e-12));
    CHECK(hurwitz_zeta(3.0, 1.0) == doctest::Approx(1.2020569031595943).epsilon(1e-12));
    CHECK(hurwitz_zeta(2.5, 3.0) == doctest::Approx(hurwitz_zeta(2.5, 1.0) - 1.0 - std::pow(2.0, -2.5)).epsilon(1e-12));
}

TEST_CASE("fit_power_law recovers seeded synthetic exponents") {
    for (double gamma : {2.5, 3.0}) {
        auto samples = sample_power_law(gamma, 1, 10000, 424242);
        auto fit = fit_power_law(samples);
        CHECK(fit.gamma > gamma - 0.15);
        CHECK(fit.gamma < gamma + 0.15);
        CHECK(fit.n_tail >= 2);
        CHECK_FALSE(fit.low_confidence);
    }
}

TEST_CASE("fit_power_law rejects all-equal degrees") {
    CHECK_THROWS_AS(fit_power_law(std::vector<int>(100, 3)), std::invalid_argument);
}

TEST_CASE("fit_power_law flags small samples as low confidence") {
    auto fit = fit_power_law({1, 1, 2, 1, 3, 1, 2, 5, 1, 8, 1, 2, 1, 1, 4});
    CHECK(fit.low_confidence);
}

TEST_CASE("fit_power_law consistency: more data does not drift away from truth") {
    const double gamma = 2.5;
    int closer = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto small_fit = fit_power_law(sample_power_law(gamma, 1, 5000, seed));
        auto large_fit = fit_power_law(sample_power_law(gamma, 1, 10000, seed + 1000));
        if (std::fabs(large_fit.gamma - gamma) <= std::fabs(small_fit.gamma - gamma) + 0.05) ++closer;
    }
    CHECK(closer >= 8);  // allow sampling noise on individual seeds
}

TEST_CASE("modularity hand-checked values") {
    auto single_edge = make_view(2, {{0, 1, 1.0}});
    std::map<std::string, int> one_comm{{vid(0), 0}, {vid(1), 0}};
    CHECK(modularity(single_edge, one_comm, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    std::map<std::string, int> singletons{{vid(0), 0}, {vid(1), 1}};
    CHECK(modularity(single_edge, singletons, 1.0) == doctest::Approx(-0.5).epsilon(1e-14));

    // two disjoint 5-cliques, clique partition
    std::vector<std::tuple<int, int, double>> edges;
    std::map<std::string, int> cliques;
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
            edges.emplace_back(i, j, 1.0);
            edges.emplace_back(5 + i, 5 + j, 1.0);
        }
        cliques[vid(i)] = 0;
        cliques[vid(5 + i)] = 1;
    }
    auto view = make_view(10, edges);
    CHECK(modularity(view, cliques, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("modularity rejects incomplete assignments") {
    auto view = make_view(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    std::map<std::string, int> partial{{vid(0), 0}, {vid(1), 0}};
    CHECK_THROWS_AS(modularity(view, partial, 1.0), std::invalid_argument);
}

TEST_CASE("detect_communities separates two cliques joined by a bridge") {
    auto view = two_cliques_with_bridge();
    Partition part = detect_communities(view, 1.0, 1);
    CHECK(part.community_count() == 2);
    // members of each clique share a label
    for (int i = 1; i < 5; ++i) {
        CHECK(part.assignment.at(vid(i)) == part.assignment.at(vid(0)));
        CHECK(part.assignment.at(vid(5 + i)) == part.assignment.at(vid(5)));
    }
    CHECK(part.assignment.at(vid(0)) != part.assignment.at(vid(5)));
}

TEST_CASE("detect_communities stored modularity equals direct evaluation") {
    for (std::uint64_t seed : {1ULL, 7ULL, 42ULL}) {
        auto view = random_view(60, 0.08, seed);
        if (view.edge_count() == 0) continue;
        Partition part = detect_communities(view, 1.0, seed);
        CHECK(part.modularity ==
              doctest::Approx(modularity(view, part.assignment, 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("detect_communities labels are dense from zero") {
    auto view = two_cliques_with_bridge();
    Partition part = detect_communities(view, 1.0, 3);
    std::set<int> labels;
    for (const auto& [id, c] : part.assignment) labels.insert(c);
    CHECK(*labels.begin() == 0);
    CHECK(*labels.rbegin() == static_cast<int>(labels.size()) - 1);
    CHECK(part.assignment.size() == view.vertex_count());
}

TEST_CASE("detect_communities is deterministic for a fixed seed") {
    auto view = random_view(80, 0.06, 9);
    Partition a = detect_communities(view, 1.0, 5);
    Partition b = detect_communities(view, 1.0, 5);
    CHECK(a.assignment == b.assignment);
    CHECK(a.modularity == b.modularity);
}

TEST_CASE("detect_communities rejects edgeless views") {
    auto view = make_view(4, {});
    CHECK_THROWS_AS(detect_communities(view, 1.0, 0), std::invalid_argument);
}

TEST_CASE("resolution sweep: community count weakly grows with resolution") {
    SynthConfig cfg;
    cfg.n_papers = 100;
    cfg.n_users = 120;
    cfg.seed = 31;
    auto synth = generate_stream(cfg);
    SsnConfig ssn_cfg;
    EdgeSet ssn = build_ssn(synth.events, ssn_cfg);
    std::vector<std::string> ids;
    for (const auto& [p, b] : synth.block_of_paper) ids.push_back(p);
    GraphView view(ids, ssn);
    Partition coarse = detect_communities(view, 0.25, 7);
    Partition fine = detect_communities(view, 4.0, 7);
    CHECK(fine.community_count() >= coarse.community_count());
}

TEST_CASE("compare_partitions identical partitions score 1") {
    std::map<std::string, int> p{{"a", 0}, {"b", 0}, {"c", 1}, {"d", 1}};
    auto agree = compare_partitions(p, p);
    CHECK(agree.nmi == doctest::Approx(1.0));
    CHECK(agree.ari == doctest::Approx(1.0));
}

TEST_CASE("compare_partitions all-in-one side has zero NMI") {
    std::map<std::string, int> p{{"a", 0}, {"b", 1}, {"c", 0}, {"d", 1}};
    std::map<std::string, int> trivial{{"a", 0}, {"b", 0}, {"c", 0}, {"d", 0}};
    auto agree = compare_partitions(p, trivial);
    CHECK(agree.nmi == doctest::Approx(0.0));
}

TEST_CASE("compare_partitions independent random labels have near-zero ARI") {
    std::mt19937_64 rng(2024);
    std::map<std::string, int> a, b;
    for (int i = 0; i < 1000; ++i) {
        std::string id = "n" + std::to_string(i);
        a[id] = static_cast<int>(rng() % 5);
        b[id] = static_cast<int>(rng() % 5);
    }
    auto agree = compare_partitions(a, b);
    CHECK(std::fabs(agree.ari) < 0.05);
}

TEST_CASE("compare_partitions rejects mismatched vertex sets") {
    std::map<std::string, int> a{{"x", 0}, {"y", 1}};
    std::map<std::string, int> b{{"x", 0}, {"z", 1}};
    CHECK_THROWS_AS(compare_partitions(a, b), std::invalid_argument);
}

namespace {

MultiRelationalGraph categorized_graph() {
    MultiRelationalGraph g;
    auto add = [&](const char* id, const char* cat, bool enriched = true) {
        PaperRecord rec;
        rec.paper_id = id;
        rec.primary_category = cat;
        rec.enriched = enriched;
        g.add_vertex(rec);
    };
    add("p1", "cs.IR");
    add("p2", "cs.DB");
    add("p3", "cs.IR");
    add("p4", "", false);
    return g;
}

}  // namespace

TEST_CASE("attribute_partition groups by category value") {
    auto g = categorized_graph();
    auto attr = attribute_partition(g, AttributeMode::Category);
    CHECK(attr.assignment.at("p1") == attr.assignment.at("p2"));  // both "cs"
    CHECK(attr.assignment.at("p1") == attr.assignment.at("p3"));
    CHECK(attr.assignment.at("p1") != attr.assignment.at("p4"));  // unknown

    auto sub = attribute_partition(g, AttributeMode::Subcategory);
    CHECK(sub.assignment.at("p1") != sub.assignment.at("p2"));
    CHECK(sub.assignment.at("p1") == sub.assignment.at("p3"));
}

TEST_CASE("compound attribute key distinguishes category pairs") {
    auto g = categorized_graph();
    auto attr = attribute_partition(g, AttributeMode::Compound);
    CHECK(attr.label_names[static_cast<std::size_t>(attr.assignment.at("p1"))] == "cs+cs.IR");
    CHECK(attr.assignment.at("p1") != attr.assignment.at("p2"));
}

TEST_CASE("all-unenriched papers form a single unknown community") {
    MultiRelationalGraph g;
    for (const char* id : {"a", "b", "c"}) {
        PaperRecord rec;
        rec.paper_id = id;
        g.add_vertex(rec);
    }
    auto attr = attribute_partition(g, AttributeMode::Category);
    CHECK(attr.label_names == std::vector<std::string>{"unknown"});
    for (const auto& [id, c] : attr.assignment) CHECK(c == 0);
}

TEST_CASE("aggregate_by_attribute sums cross-group weights") {
    auto view = make_view(6, {{0, 3, 1.0}, {1, 4, 1.0}, {2, 5, 1.0}, {0, 1, 2.0}});
    std::map<std::string, int> groups;
    for (int i = 0; i < 3; ++i) groups[vid(i)] = 0;
    for (int i = 3; i < 6; ++i) groups[vid(i)] = 1;
    auto agg = aggregate_by_attribute(view, groups);
    REQUIRE(agg.edges.size() == 1);
    CHECK(agg.edges.at({0, 1}) == doctest::Approx(3.0));
    CHECK(agg.self_mass[0] == doctest::Approx(2.0));
    CHECK(agg.self_mass[1] == doctest::Approx(0.0));
}

TEST_CASE("aggregate of a single group has no edges") {
    auto view = make_view(3, {{0, 1, 1.0}, {1, 2, 1.5}});
    std::map<std::string, int> groups{{vid(0), 0}, {vid(1), 0}, {vid(2), 0}};
    auto agg = aggregate_by_attribute(view, groups);
    CHECK(agg.edges.empty());
    CHECK(agg.self_mass[0] == doctest::Approx(2.5));
}

TEST_CASE("aggregation conserves total edge weight and matches brute force") {
    std::mt19937_64 rng(88);
    auto view = random_view(30, 0.2, 88);
    std::map<std::string, int> groups;
    for (std::size_t i = 0; i < view.vertex_count(); ++i) {
        groups[view.id_of(static_cast<int>(i))] = static_cast<int>(rng() % 3);
    }
    auto agg = aggregate_by_attribute(view, groups);

    // brute force over all edges
    std::map<std::pair<int, int>, double> expect;
    std::vector<double> self(3, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < view.vertex_count(); ++i) {
        for (const auto& [j, w] : view.neighbors(static_cast<int>(i))) {
            if (static_cast<std::size_t>(j) <= i) continue;
            int gi = groups[view.id_of(static_cast<int>(i))];
            int gj = groups[view.id_of(j)];
            total += w;
            if (gi == gj) self[static_cast<std::size_t>(gi)] += w;
            else expect[{std::min(gi, gj), std::max(gi, gj)}] += w;
        }
    }
    CHECK(agg.edges == expect);
    double conserved = 0.0;
    for (const auto& [key, w] : agg.edges) conserved += w;
    for (double s : agg.self_mass) conserved += s;
    CHECK(conserved == doctest::Approx(total).epsilon(1e-14));
}

TEST_CASE("path metrics on P5 and K4") {
    auto p5 = make_view(5, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}});
    auto pm = path_metrics(p5);
    CHECK(pm.diameter == 4);
    CHECK(pm.avg_path_length == doctest::Approx(2.0));
    CHECK(pm.component_coverage == doctest::Approx(1.0));

    auto k4 = make_view(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}});
    pm = path_metrics(k4);
    CHECK(pm.diameter == 1);
    CHECK(pm.avg_path_length == doctest::Approx(1.0));
}

TEST_CASE("path metrics restrict to largest component and report coverage") {
    auto view = make_view(6, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}});
    auto pm = path_metrics(view);
    CHECK(pm.diameter == 2);
    CHECK(pm.component_coverage == doctest::Approx(6.0 / 30.0));
}

TEST_CASE("path metrics error without a size-2 component") {
    auto view = make_view(3, {});
    CHECK_THROWS_AS(path_metrics(view), std::invalid_argument);
}

TEST_CASE("centrality on star and path") {
    auto star = make_view(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
    auto table = centrality(star);
    CHECK(table.rows[0].betweenness == doctest::Approx(3.0));
    CHECK(table.rows[0].normalized_betweenness == doctest::Approx(1.0));
    for (int leaf = 1; leaf < 4; ++leaf) CHECK(table.rows[static_cast<std::size_t>(leaf)].betweenness == doctest::Approx(0.0));

    auto p3 = make_view(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    table = centrality(p3);
    CHECK(table.rows[1].betweenness == doctest::Approx(1.0));
    CHECK(table.rows[1].closeness == doctest::Approx(1.0));
}

TEST_CASE("centrality matches the naive path-counting oracle") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto view = random_view(50, 0.08, 700 + seed);
        auto table = centrality(view);
        auto naive = naive_centrality(view);
        for (std::size_t v = 0; v < view.vertex_count(); ++v) {
            CHECK(table.rows[v].betweenness == doctest::Approx(naive.betweenness[v]).epsilon(1e-9));
            if (std::isfinite(naive.mean_distance[v])) {
                CHECK(table.rows[v].closeness == doctest::Approx(naive.mean_distance[v]).epsilon(1e-9));
            } else {
                CHECK_FALSE(std::isfinite(table.rows[v].closeness));
            }
        }
    }
}

TEST_CASE("centrality is independent of worker count") {
    auto view = random_view(70, 0.1, 55);
    auto serial = centrality(view, 1);
    auto parallel = centrality(view, 4);
    for (std::size_t v = 0; v < view.vertex_count(); ++v) {
        CHECK(serial.rows[v].betweenness == parallel.rows[v].betweenness);  // bit-exact
        CHECK(serial.rows[v].closeness == parallel.rows[v].closeness);
    }
}

TEST_CASE("normalized betweenness lies in [0,1] on connected graphs") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto view = random_view(40, 0.2, 900 + seed);
        auto table = centrality(view);
        for (const auto& row : table.rows) {
            CHECK(row.normalized_betweenness >= 0.0);
            CHECK(row.normalized_betweenness <= 1.0);
        }
    }
}

TEST_CASE("group rollup averages member rows") {
    auto star = make_view(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
    auto table = centrality(star);
    std::map<std::string, int> groups{{vid(0), 0}, {vid(1), 1}, {vid(2), 1}, {vid(3), 1}};
    auto rollup = centrality_groups(table, groups, {"hub", "leaves"});
    REQUIRE(rollup.rows.size() == 2);
    CHECK(rollup.rows[0].id == "hub");
    CHECK(rollup.rows[0].betweenness == doctest::Approx(3.0));
    CHECK(rollup.rows[1].id == "leaves");
    CHECK(rollup.rows[1].betweenness == doctest::Approx(0.0));
    CHECK(rollup.rows[1].closeness == doctest::Approx((5.0 / 3.0 + 5.0 / 3.0 + 5.0 / 3.0) / 3.0));
}
