#ifndef SSNET_MODEL_HPP
#define SSNET_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ssnet {

// One user mentioning one paper at one instant. Timestamps are UTC epoch
// seconds throughout.
struct MentionEvent {
    std::string user_id;
    std::string paper_id;
    std::int64_t timestamp = 0;
    std::uint64_t retweet_count = 0;

    bool operator==(const MentionEvent&) const = default;
};

struct PaperRecord {
    std::string paper_id;
    std::string title;
    std::vector<std::string> authors;
    std::string primary_category;  // e.g. "cs.IR"
    std::string published;         // ISO date, empty until enriched
    std::string summary;
    std::optional<std::uint64_t> citation_count;
    std::optional<std::string> citation_cluster_id;
    bool enriched = false;

    // "cs" from "cs.IR"; whole string when there is no dot.
    std::string category() const;
    // "IR" from "cs.IR"; empty when there is no dot.
    std::string subcategory() const;

    bool operator==(const PaperRecord&) const = default;
};

// One named relation: undirected weighted simple edges over paper ids.
// Pairs are stored order-normalized (first < second); inserting the same
// pair again sums the weights.
class EdgeSet {
public:
    using Key = std::pair<std::string, std::string>;

    EdgeSet() = default;
    explicit EdgeSet(std::string relation_name) : relation_name_(std::move(relation_name)) {}

    const std::string& relation_name() const { return relation_name_; }

    // Accumulates weight onto the unordered pair {a, b}. Self-loops and
    // non-positive contributions are rejected.
    void add_weight(const std::string& a, const std::string& b, double w);

    std::optional<double> weight(const std::string& a, const std::string& b) const;

    std::size_t size() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }

    // Sorted by key, so iteration order is deterministic.
    const std::map<Key, double>& edges() const { return edges_; }

    static Key make_key(const std::string& a, const std::string& b);

private:
    std::string relation_name_;
    std::map<Key, double> edges_;
};

// M = (V, family of edge sets). Vertices are papers keyed by canonical id.
class MultiRelationalGraph {
public:
    void add_vertex(PaperRecord record);
    bool has_vertex(const std::string& paper_id) const;
    const PaperRecord* find_vertex(const std::string& paper_id) const;

    // Relation names must be unique; every endpoint must already be a vertex.
    void add_relation(EdgeSet edge_set);
    bool has_relation(const std::string& name) const;

    const std::map<std::string, PaperRecord>& vertices() const { return vertices_; }
    const std::map<std::string, EdgeSet>& edge_family() const { return edge_family_; }

    // Referential-integrity pass: every edge endpoint exists. Throws on
    // violation, returns quietly otherwise.
    void validate() const;

private:
    std::map<std::string, PaperRecord> vertices_;
    std::map<std::string, EdgeSet> edge_family_;
};

// Community assignment for a graph view, together with the objective value
// and parameters that produced it. Labels are dense integers from 0.
struct Partition {
    std::map<std::string, int> assignment;
    double modularity = 0.0;
    double resolution = 1.0;
    std::uint64_t seed = 0;

    int community_count() const;
};

// Index-interned projection of one relation: all vertices, the named
// relation's edges only. Views are immutable once built and safe to share
// across threads.
class GraphView {
public:
    GraphView(const MultiRelationalGraph& graph, const std::string& relation_name);

    // Build a view directly from vertex ids and an edge set (for tests and
    // for graphs that exist only as an EdgeSet).
    GraphView(std::vector<std::string> vertex_ids, const EdgeSet& edges);

    std::size_t vertex_count() const { return ids_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    double total_weight() const { return total_weight_; }

    const std::vector<std::string>& vertex_ids() const { return ids_; }
    const std::string& id_of(int index) const { return ids_[static_cast<std::size_t>(index)]; }
    int index_of(const std::string& id) const;  // -1 when absent

    // neighbor index -> weight, sorted by neighbor index.
    const std::vector<std::pair<int, double>>& neighbors(int index) const {
        return adjacency_[static_cast<std::size_t>(index)];
    }

    double weighted_degree(int index) const { return weighted_degree_[static_cast<std::size_t>(index)]; }
    int degree(int index) const { return static_cast<int>(adjacency_[static_cast<std::size_t>(index)].size()); }

private:
    void build_adjacency(const EdgeSet& edges);

    std::vector<std::string> ids_;                              // sorted
    std::map<std::string, int> index_;
    std::vector<std::vector<std::pair<int, double>>> adjacency_;
    std::vector<double> weighted_degree_;
    std::size_t edge_count_ = 0;
    double total_weight_ = 0.0;
};

GraphView single_relation_view(const MultiRelationalGraph& graph, const std::string& relation_name);

}  // namespace ssnet

#endif
