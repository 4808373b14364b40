#include "ssnet/analyze.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

#include "ssnet/graph_io.hpp"

namespace ssnet {

std::map<int, std::size_t> degree_distribution(const GraphView& view) {
    std::map<int, std::size_t> hist;
    for (std::size_t i = 0; i < view.vertex_count(); ++i) {
        hist[view.degree(static_cast<int>(i))]++;
    }
    return hist;
}

// Euler-Maclaurin with three Bernoulli correction terms; plenty for the
// tolerances used here (relative error well below 1e-10 for s in [1.1, 10]).
double hurwitz_zeta(double s, double a) {
    constexpr int kDirectTerms = 25;
    double sum = 0.0;
    for (int k = 0; k < kDirectTerms; ++k) sum += std::pow(a + k, -s);
    double b = a + kDirectTerms;
    sum += std::pow(b, 1.0 - s) / (s - 1.0);
    sum += 0.5 * std::pow(b, -s);
    sum += s * std::pow(b, -s - 1.0) / 12.0;
    sum -= s * (s + 1.0) * (s + 2.0) * std::pow(b, -s - 3.0) / 720.0;
    sum += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * std::pow(b, -s - 5.0) / 30240.0;
    return sum;
}

namespace {

// Maximizes the discrete power-law log-likelihood
//   ll(g) = -n ln zeta(g, x_min) - g * sum(ln x)
// by golden-section search over the exponent.
double mle_gamma(double sum_log, std::size_t n, int x_min) {
    auto neg_ll = [&](double g) {
        return static_cast<double>(n) * std::log(hurwitz_zeta(g, x_min)) + g * sum_log;
    };
    double lo = 1.001, hi = 12.0;
    constexpr double kGolden = 0.6180339887498949;
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = neg_ll(x1), f2 = neg_ll(x2);
    for (int iter = 0; iter < 90; ++iter) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = neg_ll(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = neg_ll(x2);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

PowerLawFit fit_power_law(const std::vector<int>& degrees) {
    std::vector<int> values;
    values.reserve(degrees.size());
    for (int d : degrees) {
        if (d >= 1) values.push_back(d);
    }
    if (values.size() < 2) throw std::invalid_argument("fit_power_law: need at least 2 positive values");
    std::sort(values.begin(), values.end());
    if (values.front() == values.back()) {
        throw std::invalid_argument("fit_power_law: degenerate input (all values equal)");
    }

    // unique value -> first index in the sorted array
    std::vector<int> unique_vals;
    std::vector<std::size_t> first_index;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (unique_vals.empty() || values[i] != unique_vals.back()) {
            unique_vals.push_back(values[i]);
            first_index.push_back(i);
        }
    }

    std::vector<double> log_suffix(values.size() + 1, 0.0);
    for (std::size_t i = values.size(); i-- > 0;) {
        log_suffix[i] = log_suffix[i + 1] + std::log(static_cast<double>(values[i]));
    }

    PowerLawFit best;
    best.ks_statistic = std::numeric_limits<double>::infinity();

    constexpr std::size_t kMinTail = 10;
    constexpr std::size_t kMaxCandidates = 200;
    std::size_t candidates_tried = 0;
    for (std::size_t u = 0; u < unique_vals.size() && candidates_tried < kMaxCandidates; ++u) {
        int x_min = unique_vals[u];
        std::size_t start = first_index[u];
        std::size_t n_tail = values.size() - start;
        if (n_tail < std::max<std::size_t>(kMinTail, 2)) break;
        if (values[start] == values.back()) break;  // all-equal tail
        ++candidates_tried;

        double gamma = mle_gamma(log_suffix[start], n_tail, x_min);
        double z_xmin = hurwitz_zeta(gamma, x_min);

        double ks = 0.0;
        std::size_t cum = 0;
        for (std::size_t v = u; v < unique_vals.size(); ++v) {
            std::size_t next = v + 1 < unique_vals.size() ? first_index[v + 1] : values.size();
            cum += next - first_index[v];
            double f_emp = static_cast<double>(cum) / static_cast<double>(n_tail);
            double f_model = 1.0 - hurwitz_zeta(gamma, unique_vals[v] + 1) / z_xmin;
            ks = std::max(ks, std::fabs(f_emp - f_model));
        }

        if (ks < best.ks_statistic) {
            best.gamma = gamma;
            best.x_min = x_min;
            best.ks_statistic = ks;
            best.n_tail = n_tail;
        }
    }

    if (!std::isfinite(best.ks_statistic)) {
        // Fall back to the smallest value when every tail was too short.
        int x_min = unique_vals.front();
        std::size_t n_tail = values.size();
        best.gamma = mle_gamma(log_suffix[0], n_tail, x_min);
        best.x_min = x_min;
        best.n_tail = n_tail;
        best.ks_statistic = 1.0;
    }
    best.low_confidence = values.size() < 50;
    return best;
}

double modularity(const GraphView& view, const std::map<std::string, int>& assignment,
                  double resolution) {
    std::vector<int> labels(view.vertex_count(), -1);
    for (const auto& [id, c] : assignment) {
        int idx = view.index_of(id);
        if (idx >= 0) labels[static_cast<std::size_t>(idx)] = c;
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0) {
            throw std::invalid_argument("modularity: assignment missing vertex '" + view.id_of(static_cast<int>(i)) + "'");
        }
    }
    double m = view.total_weight();
    if (m <= 0.0) throw std::invalid_argument("modularity: graph has no edges");

    std::map<int, double> intra, degree_sum;
    for (std::size_t i = 0; i < view.vertex_count(); ++i) {
        int ci = labels[i];
        degree_sum[ci] += view.weighted_degree(static_cast<int>(i));
        for (const auto& [j, w] : view.neighbors(static_cast<int>(i))) {
            if (static_cast<std::size_t>(j) > i && labels[static_cast<std::size_t>(j)] == ci) {
                intra[ci] += w;
            }
        }
    }
    double q = 0.0;
    for (const auto& [c, a_c] : degree_sum) {
        double e_c = intra.count(c) ? intra.at(c) : 0.0;
        double frac = a_c / (2.0 * m);
        q += e_c / m - resolution * frac * frac;
    }
    return q;
}

namespace {

struct LevelGraph {
    std::vector<std::vector<std::pair<int, double>>> adj;  // no self entries
    std::vector<double> self_loop;                         // intra weight folded into a node
    double m = 0.0;                                        // total weight incl self loops

    std::size_t size() const { return adj.size(); }
    double node_degree(int i) const {
        double k = 2.0 * self_loop[static_cast<std::size_t>(i)];
        for (const auto& [j, w] : adj[static_cast<std::size_t>(i)]) k += w;
        return k;
    }
};

// One pass of local moving; returns true when any node changed community.
bool local_moving(const LevelGraph& g, std::vector<int>& community, double resolution,
                  std::mt19937_64& rng) {
    std::size_t n = g.size();
    std::vector<double> tot(n, 0.0);  // per community: sum of node degrees
    std::vector<double> k(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        k[i] = g.node_degree(static_cast<int>(i));
        tot[static_cast<std::size_t>(community[i])] += k[i];
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    double two_m = 2.0 * g.m;
    bool any_move = false;
    bool improved = true;
    std::vector<double> neigh_weight(n, 0.0);
    std::vector<int> touched;
    while (improved) {
        improved = false;
        for (std::size_t oi = 0; oi < n; ++oi) {
            int i = static_cast<int>(order[oi]);
            int old_c = community[static_cast<std::size_t>(i)];

            touched.clear();
            for (const auto& [j, w] : g.adj[static_cast<std::size_t>(i)]) {
                int cj = community[static_cast<std::size_t>(j)];
                if (neigh_weight[static_cast<std::size_t>(cj)] == 0.0) touched.push_back(cj);
                neigh_weight[static_cast<std::size_t>(cj)] += w;
            }

            tot[static_cast<std::size_t>(old_c)] -= k[static_cast<std::size_t>(i)];
            double best_gain = neigh_weight[static_cast<std::size_t>(old_c)] -
                               resolution * tot[static_cast<std::size_t>(old_c)] *
                                   k[static_cast<std::size_t>(i)] / two_m;
            int best_c = old_c;
            std::sort(touched.begin(), touched.end());
            for (int c : touched) {
                if (c == old_c) continue;
                double gain = neigh_weight[static_cast<std::size_t>(c)] -
                              resolution * tot[static_cast<std::size_t>(c)] *
                                  k[static_cast<std::size_t>(i)] / two_m;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best_c = c;
                }
            }
            tot[static_cast<std::size_t>(best_c)] += k[static_cast<std::size_t>(i)];
            community[static_cast<std::size_t>(i)] = best_c;
            if (best_c != old_c) {
                improved = true;
                any_move = true;
            }

            for (int c : touched) neigh_weight[static_cast<std::size_t>(c)] = 0.0;
            neigh_weight[static_cast<std::size_t>(old_c)] = 0.0;
        }
    }
    return any_move;
}

LevelGraph coarsen(const LevelGraph& g, const std::vector<int>& community, int n_comms) {
    LevelGraph out;
    out.adj.assign(static_cast<std::size_t>(n_comms), {});
    out.self_loop.assign(static_cast<std::size_t>(n_comms), 0.0);
    out.m = g.m;
    std::map<std::pair<int, int>, double> agg;
    for (std::size_t i = 0; i < g.size(); ++i) {
        int ci = community[i];
        out.self_loop[static_cast<std::size_t>(ci)] += g.self_loop[i];
        for (const auto& [j, w] : g.adj[i]) {
            if (static_cast<std::size_t>(j) < i) continue;  // each edge once
            int cj = community[static_cast<std::size_t>(j)];
            if (ci == cj) {
                out.self_loop[static_cast<std::size_t>(ci)] += w;
            } else {
                agg[{std::min(ci, cj), std::max(ci, cj)}] += w;
            }
        }
    }
    for (const auto& [key, w] : agg) {
        out.adj[static_cast<std::size_t>(key.first)].emplace_back(key.second, w);
        out.adj[static_cast<std::size_t>(key.second)].emplace_back(key.first, w);
    }
    return out;
}

int relabel_dense(std::vector<int>& community) {
    std::map<int, int> remap;
    for (int& c : community) {
        auto [it, inserted] = remap.emplace(c, static_cast<int>(remap.size()));
        c = it->second;
    }
    return static_cast<int>(remap.size());
}

}  // namespace

Partition detect_communities(const GraphView& view, double resolution, std::uint64_t seed) {
    if (resolution <= 0.0) throw std::invalid_argument("detect_communities: resolution must be > 0");
    if (view.edge_count() == 0) throw std::invalid_argument("detect_communities: graph has no edges");

    std::mt19937_64 rng(seed);

    LevelGraph level;
    level.adj.resize(view.vertex_count());
    level.self_loop.assign(view.vertex_count(), 0.0);
    for (std::size_t i = 0; i < view.vertex_count(); ++i) {
        level.adj[i] = view.neighbors(static_cast<int>(i));
    }
    level.m = view.total_weight();

    // node -> community at the finest level, refined through the hierarchy
    std::vector<int> membership(view.vertex_count());
    std::iota(membership.begin(), membership.end(), 0);

    for (;;) {
        std::vector<int> community(level.size());
        std::iota(community.begin(), community.end(), 0);
        bool moved = local_moving(level, community, resolution, rng);
        int n_comms = relabel_dense(community);
        if (!moved || static_cast<std::size_t>(n_comms) == level.size()) break;
        for (int& c : membership) c = community[static_cast<std::size_t>(c)];
        level = coarsen(level, community, n_comms);
    }

    relabel_dense(membership);
    Partition part;
    part.resolution = resolution;
    part.seed = seed;
    for (std::size_t i = 0; i < view.vertex_count(); ++i) {
        part.assignment[view.id_of(static_cast<int>(i))] = membership[i];
    }
    part.modularity = modularity(view, part.assignment, resolution);
    return part;
}

PartitionAgreement compare_partitions(const std::map<std::string, int>& a,
                                      const std::map<std::string, int>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("compare_partitions: vertex sets differ");
    for (const auto& [id, c] : a) {
        if (!b.count(id)) throw std::invalid_argument("compare_partitions: vertex '" + id + "' missing from second partition");
    }
    double n = static_cast<double>(a.size());
    if (n == 0) throw std::invalid_argument("compare_partitions: empty partitions");

    std::map<std::pair<int, int>, std::size_t> joint;
    std::map<int, std::size_t> count_a, count_b;
    for (const auto& [id, ca] : a) {
        int cb = b.at(id);
        joint[{ca, cb}]++;
        count_a[ca]++;
        count_b[cb]++;
    }

    double h_a = 0.0, h_b = 0.0, mi = 0.0;
    for (const auto& [c, cnt] : count_a) {
        double p = cnt / n;
        h_a -= p * std::log(p);
    }
    for (const auto& [c, cnt] : count_b) {
        double p = cnt / n;
        h_b -= p * std::log(p);
    }
    for (const auto& [key, cnt] : joint) {
        double p = cnt / n;
        double pa = count_a.at(key.first) / n;
        double pb = count_b.at(key.second) / n;
        mi += p * std::log(p / (pa * pb));
    }

    PartitionAgreement out;
    double denom = 0.5 * (h_a + h_b);
    out.nmi = denom > 0.0 ? mi / denom : 1.0;

    auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
    double sum_joint = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [key, cnt] : joint) sum_joint += choose2(static_cast<double>(cnt));
    for (const auto& [c, cnt] : count_a) sum_a += choose2(static_cast<double>(cnt));
    for (const auto& [c, cnt] : count_b) sum_b += choose2(static_cast<double>(cnt));
    double total_pairs = choose2(n);
    double expected = sum_a * sum_b / total_pairs;
    double max_index = 0.5 * (sum_a + sum_b);
    out.ari = (max_index - expected) == 0.0 ? 1.0 : (sum_joint - expected) / (max_index - expected);
    return out;
}

AttributeMode attribute_mode_from_string(const std::string& s) {
    if (s == "category") return AttributeMode::Category;
    if (s == "subcategory") return AttributeMode::Subcategory;
    if (s == "compound" || s == "category+subcategory") return AttributeMode::Compound;
    throw std::invalid_argument("unknown attribute mode: " + s);
}

std::string attribute_mode_name(AttributeMode mode) {
    switch (mode) {
        case AttributeMode::Category: return "category";
        case AttributeMode::Subcategory: return "subcategory";
        case AttributeMode::Compound: return "compound";
    }
    return "?";
}

AttributeAssignment attribute_partition(const MultiRelationalGraph& graph, AttributeMode mode) {
    AttributeAssignment out;
    std::map<std::string, int> label_of;
    for (const auto& [id, rec] : graph.vertices()) {
        std::string value;
        if (rec.enriched && !rec.primary_category.empty()) {
            switch (mode) {
                case AttributeMode::Category: value = rec.category(); break;
                case AttributeMode::Subcategory: value = rec.subcategory(); break;
                case AttributeMode::Compound: value = rec.category() + "+" + rec.primary_category; break;
            }
        }
        if (value.empty()) value = "unknown";
        auto [it, inserted] = label_of.emplace(value, static_cast<int>(label_of.size()));
        if (inserted) out.label_names.push_back(value);
        out.assignment[id] = it->second;
    }
    return out;
}

AggregatedGraph aggregate_by_attribute(const GraphView& view,
                                       const std::map<std::string, int>& assignment,
                                       const std::vector<std::string>& group_names) {
    std::vector<int> labels(view.vertex_count(), -1);
    int max_label = -1;
    for (std::size_t i = 0; i < view.vertex_count(); ++i) {
        auto it = assignment.find(view.id_of(static_cast<int>(i)));
        if (it == assignment.end()) {
            throw std::invalid_argument("aggregate_by_attribute: assignment missing vertex '" +
                                        view.id_of(static_cast<int>(i)) + "'");
        }
        labels[i] = it->second;
        max_label = std::max(max_label, it->second);
    }

    AggregatedGraph out;
    out.self_mass.assign(static_cast<std::size_t>(max_label + 1), 0.0);
    if (!group_names.empty()) {
        out.group_names = group_names;
    } else {
        for (int g = 0; g <= max_label; ++g) out.group_names.push_back("group_" + std::to_string(g));
    }
    for (std::size_t i = 0; i < view.vertex_count(); ++i) {
        for (const auto& [j, w] : view.neighbors(static_cast<int>(i))) {
            if (static_cast<std::size_t>(j) <= i) continue;
            int gi = labels[i], gj = labels[static_cast<std::size_t>(j)];
            if (gi == gj) {
                out.self_mass[static_cast<std::size_t>(gi)] += w;
            } else {
                out.edges[{std::min(gi, gj), std::max(gi, gj)}] += w;
            }
        }
    }
    return out;
}

namespace {

std::vector<int> bfs_distances(const GraphView& view, int source) {
    std::vector<int> dist(view.vertex_count(), -1);
    std::deque<int> queue{source};
    dist[static_cast<std::size_t>(source)] = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (const auto& [v, w] : view.neighbors(u)) {
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

std::vector<int> largest_component(const GraphView& view) {
    std::vector<int> comp(view.vertex_count(), -1);
    int n_comp = 0;
    for (std::size_t s = 0; s < view.vertex_count(); ++s) {
        if (comp[s] >= 0) continue;
        std::deque<int> queue{static_cast<int>(s)};
        comp[s] = n_comp;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (const auto& [v, w] : view.neighbors(u)) {
                if (comp[static_cast<std::size_t>(v)] < 0) {
                    comp[static_cast<std::size_t>(v)] = n_comp;
                    queue.push_back(v);
                }
            }
        }
        ++n_comp;
    }
    std::vector<std::size_t> sizes(static_cast<std::size_t>(n_comp), 0);
    for (int c : comp) sizes[static_cast<std::size_t>(c)]++;
    int largest = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::vector<int> members;
    for (std::size_t i = 0; i < comp.size(); ++i) {
        if (comp[i] == largest) members.push_back(static_cast<int>(i));
    }
    return members;
}

}  // namespace

PathMetrics path_metrics(const GraphView& view) {
    auto members = largest_component(view);
    if (members.size() < 2) {
        throw std::invalid_argument("path_metrics: no connected component with >= 2 vertices");
    }
    long long diameter = 0;
    long long sum_dist = 0;
    for (int s : members) {
        auto dist = bfs_distances(view, s);
        for (int t : members) {
            if (t == s) continue;
            diameter = std::max<long long>(diameter, dist[static_cast<std::size_t>(t)]);
            sum_dist += dist[static_cast<std::size_t>(t)];
        }
    }
    PathMetrics pm;
    pm.diameter = static_cast<int>(diameter);
    double pairs = static_cast<double>(members.size()) * (static_cast<double>(members.size()) - 1.0);
    pm.avg_path_length = static_cast<double>(sum_dist) / pairs;
    double n = static_cast<double>(view.vertex_count());
    pm.component_coverage = n > 1 ? pairs / (n * (n - 1.0)) : 1.0;
    return pm;
}

namespace {

struct SourceResult {
    std::vector<double> delta_betweenness;  // contribution of this chunk of sources
    std::vector<double> closeness;          // per source in chunk: mean distance
    std::vector<double> reciprocal;         // per source in chunk
};

// Brandes accumulation for one source; adds pair-dependencies into `acc`.
void brandes_from(const GraphView& view, int source, std::vector<double>& acc,
                  double& closeness, double& reciprocal) {
    std::size_t n = view.vertex_count();
    std::vector<int> dist(n, -1);
    std::vector<double> sigma(n, 0.0);
    std::vector<double> delta(n, 0.0);
    std::vector<int> order;
    order.reserve(n);
    std::deque<int> queue{source};
    dist[static_cast<std::size_t>(source)] = 0;
    sigma[static_cast<std::size_t>(source)] = 1.0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        order.push_back(u);
        for (const auto& [v, w] : view.neighbors(u)) {
            auto vi = static_cast<std::size_t>(v);
            if (dist[vi] < 0) {
                dist[vi] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(v);
            }
            if (dist[vi] == dist[static_cast<std::size_t>(u)] + 1) {
                sigma[vi] += sigma[static_cast<std::size_t>(u)];
            }
        }
    }

    long long sum_dist = 0;
    std::size_t reachable = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (dist[v] > 0) {
            sum_dist += dist[v];
            ++reachable;
        }
    }
    if (reachable > 0) {
        closeness = static_cast<double>(sum_dist) / static_cast<double>(reachable);
        reciprocal = static_cast<double>(reachable) / static_cast<double>(sum_dist);
    } else {
        closeness = std::numeric_limits<double>::quiet_NaN();
        reciprocal = 0.0;
    }

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int w = *it;
        auto wi = static_cast<std::size_t>(w);
        for (const auto& [v, wt] : view.neighbors(w)) {
            auto vi = static_cast<std::size_t>(v);
            if (dist[vi] == dist[wi] - 1) {
                delta[vi] += sigma[vi] / sigma[wi] * (1.0 + delta[wi]);
            }
        }
        if (w != source) acc[wi] += delta[wi];
    }
}

}  // namespace

CentralityTable centrality(const GraphView& view, int jobs) {
    std::size_t n = view.vertex_count();
    CentralityTable table;
    table.rows.resize(n);
    if (n == 0) return table;

    // Fixed-size chunks merged in chunk order, so the floating-point sum
    // order is independent of the worker count.
    constexpr std::size_t kChunk = 64;
    std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<SourceResult> chunks(n_chunks);

    auto run_chunk = [&](std::size_t c) {
        SourceResult& res = chunks[c];
        res.delta_betweenness.assign(n, 0.0);
        std::size_t begin = c * kChunk;
        std::size_t end = std::min(n, begin + kChunk);
        res.closeness.resize(end - begin);
        res.reciprocal.resize(end - begin);
        for (std::size_t s = begin; s < end; ++s) {
            brandes_from(view, static_cast<int>(s), res.delta_betweenness, res.closeness[s - begin],
                         res.reciprocal[s - begin]);
        }
    };

    int workers = std::max(1, jobs);
    if (workers == 1 || n_chunks == 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t c = next.fetch_add(1);
                    if (c >= n_chunks) break;
                    run_chunk(c);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    std::vector<double> betweenness(n, 0.0);
    for (std::size_t c = 0; c < n_chunks; ++c) {
        for (std::size_t v = 0; v < n; ++v) betweenness[v] += chunks[c].delta_betweenness[v];
    }

    double norm = n >= 3 ? (static_cast<double>(n) - 1.0) * (static_cast<double>(n) - 2.0) / 2.0 : 1.0;
    for (std::size_t v = 0; v < n; ++v) {
        CentralityRow& row = table.rows[v];
        row.id = view.id_of(static_cast<int>(v));
        std::size_t c = v / kChunk;
        row.closeness = chunks[c].closeness[v - c * kChunk];
        row.reciprocal_closeness = chunks[c].reciprocal[v - c * kChunk];
        row.betweenness = betweenness[v] / 2.0;  // undirected: each pair counted twice
        row.normalized_betweenness = row.betweenness / norm;
    }
    return table;
}

CentralityTable centrality_groups(const CentralityTable& per_vertex,
                                  const std::map<std::string, int>& assignment,
                                  const std::vector<std::string>& group_names) {
    std::map<int, std::vector<const CentralityRow*>> members;
    for (const auto& row : per_vertex.rows) {
        auto it = assignment.find(row.id);
        if (it == assignment.end()) continue;
        members[it->second].push_back(&row);
    }
    CentralityTable out;
    for (const auto& [label, rows] : members) {
        CentralityRow agg;
        agg.id = static_cast<std::size_t>(label) < group_names.size()
                     ? group_names[static_cast<std::size_t>(label)]
                     : "group_" + std::to_string(label);
        double n_close = 0.0;
        for (const CentralityRow* r : rows) {
            if (std::isfinite(r->closeness)) {
                agg.closeness += r->closeness;
                agg.reciprocal_closeness += r->reciprocal_closeness;
                n_close += 1.0;
            }
            agg.betweenness += r->betweenness;
            agg.normalized_betweenness += r->normalized_betweenness;
        }
        if (n_close > 0.0) {
            agg.closeness /= n_close;
            agg.reciprocal_closeness /= n_close;
        } else {
            agg.closeness = std::numeric_limits<double>::quiet_NaN();
        }
        agg.betweenness /= static_cast<double>(rows.size());
        agg.normalized_betweenness /= static_cast<double>(rows.size());
        out.rows.push_back(std::move(agg));
    }
    return out;
}

void write_degree_hist_csv(const std::map<int, std::size_t>& hist, std::ostream& out) {
    out << "degree,count\n";
    for (const auto& [deg, count] : hist) out << deg << ',' << count << '\n';
}

void write_power_law_csv(const PowerLawFit& fit, std::ostream& out) {
    out << "gamma,x_min,ks,n_tail,low_confidence\n";
    out << format_double(fit.gamma) << ',' << fit.x_min << ',' << format_double(fit.ks_statistic)
        << ',' << fit.n_tail << ',' << (fit.low_confidence ? 1 : 0) << '\n';
}

void write_partition_csv(const std::map<std::string, int>& assignment, std::ostream& out) {
    out << "vertex,community\n";
    for (const auto& [id, c] : assignment) out << id << ',' << c << '\n';
}

void write_path_metrics_csv(const PathMetrics& pm, std::ostream& out) {
    out << "diameter,avg_path_length,component_coverage\n";
    out << pm.diameter << ',' << format_double(pm.avg_path_length) << ','
        << format_double(pm.component_coverage) << '\n';
}

void write_centrality_csv(const CentralityTable& table, std::ostream& out) {
    out << "id,closeness,reciprocal_closeness,betweenness,normalized_betweenness\n";
    for (const auto& row : table.rows) {
        out << row.id << ',';
        if (std::isfinite(row.closeness)) {
            out << format_double(row.closeness);
        }
        out << ',' << format_double(row.reciprocal_closeness) << ',' << format_double(row.betweenness)
            << ',' << format_double(row.normalized_betweenness) << '\n';
    }
}

}  // namespace ssnet
