#ifndef SSNET_ANALYZE_HPP
#define SSNET_ANALYZE_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ssnet/model.hpp"

namespace ssnet {

// ---- degree distribution & power-law fit ----

// Unweighted degree histogram; counts sum to the vertex count.
std::map<int, std::size_t> degree_distribution(const GraphView& view);

struct PowerLawFit {
    double gamma = 0.0;
    int x_min = 1;
    double ks_statistic = 0.0;
    std::size_t n_tail = 0;
    bool low_confidence = false;  // fewer than 50 usable samples
};

// Discrete maximum-likelihood fit of P(k) ~ k^-gamma, x_min chosen to
// minimize the KS distance between the tail and the fitted model. Values
// below 1 are dropped. All-equal input throws.
PowerLawFit fit_power_law(const std::vector<int>& degrees);

// Hurwitz zeta, s > 1, a >= 1. Exposed for tests.
double hurwitz_zeta(double s, double a);

// ---- communities ----

// Resolution-parameterized weighted modularity:
//   Q = sum_c [ e_c/m - resolution * (a_c/(2m))^2 ]
// with m the total edge weight, e_c the intra-community weight and a_c the
// community's weighted degree sum. Assignment must cover every vertex.
double modularity(const GraphView& view, const std::map<std::string, int>& assignment,
                  double resolution);

// Multi-level local-moving modularity maximization. Deterministic for a
// fixed seed: vertex visit order is seeded-shuffled once per level, then
// fixed. Throws on an edgeless view.
Partition detect_communities(const GraphView& view, double resolution, std::uint64_t seed);

struct PartitionAgreement {
    double nmi = 0.0;  // arithmetic normalization
    double ari = 0.0;
};

PartitionAgreement compare_partitions(const std::map<std::string, int>& a,
                                      const std::map<std::string, int>& b);

enum class AttributeMode { Category, Subcategory, Compound };

AttributeMode attribute_mode_from_string(const std::string& s);
std::string attribute_mode_name(AttributeMode mode);

struct AttributeAssignment {
    std::map<std::string, int> assignment;
    std::vector<std::string> label_names;  // index = community label
};

// One community per distinct attribute value; unenriched papers (or empty
// attribute values) fall under "unknown".
AttributeAssignment attribute_partition(const MultiRelationalGraph& graph, AttributeMode mode);

// ---- aggregation ----

struct AggregatedGraph {
    std::vector<std::string> group_names;           // index = group label
    std::map<std::pair<int, int>, double> edges;    // inter-group, key first < second
    std::vector<double> self_mass;                  // intra-group weight per group
};

AggregatedGraph aggregate_by_attribute(const GraphView& view,
                                       const std::map<std::string, int>& assignment,
                                       const std::vector<std::string>& group_names = {});

// ---- paths & centrality ----

struct PathMetrics {
    int diameter = 0;
    double avg_path_length = 0.0;
    double component_coverage = 0.0;  // fraction of ordered pairs inside the largest component
};

// Unweighted BFS metrics on the largest connected component. Throws when no
// component has >= 2 vertices.
PathMetrics path_metrics(const GraphView& view);

struct CentralityRow {
    std::string id;
    double closeness = 0.0;             // mean distance to reachable vertices (lower = central)
    double reciprocal_closeness = 0.0;  // conventional (n_reach) / sum of distances
    double betweenness = 0.0;
    double normalized_betweenness = 0.0;
};

struct CentralityTable {
    std::vector<CentralityRow> rows;  // ordered by vertex id
};

// Unweighted shortest-path betweenness (each pair counted once) and average
// distance closeness. `jobs` caps worker threads; results are identical for
// any worker count. Isolated vertices get closeness NaN, betweenness 0.
CentralityTable centrality(const GraphView& view, int jobs = 1);

// Mean of the member rows per group label.
CentralityTable centrality_groups(const CentralityTable& per_vertex,
                                  const std::map<std::string, int>& assignment,
                                  const std::vector<std::string>& group_names);

// ---- CSV writers for the report bundle ----

void write_degree_hist_csv(const std::map<int, std::size_t>& hist, std::ostream& out);
void write_power_law_csv(const PowerLawFit& fit, std::ostream& out);
void write_partition_csv(const std::map<std::string, int>& assignment, std::ostream& out);
void write_path_metrics_csv(const PathMetrics& pm, std::ostream& out);
void write_centrality_csv(const CentralityTable& table, std::ostream& out);

}  // namespace ssnet

#endif
