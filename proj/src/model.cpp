#include "ssnet/model.hpp"

#include <algorithm>
#include <set>

namespace ssnet {

std::string PaperRecord::category() const {
    auto dot = primary_category.find('.');
    return dot == std::string::npos ? primary_category : primary_category.substr(0, dot);
}

std::string PaperRecord::subcategory() const {
    auto dot = primary_category.find('.');
    return dot == std::string::npos ? std::string{} : primary_category.substr(dot + 1);
}

EdgeSet::Key EdgeSet::make_key(const std::string& a, const std::string& b) {
    return a < b ? Key{a, b} : Key{b, a};
}

void EdgeSet::add_weight(const std::string& a, const std::string& b, double w) {
    if (a == b) {
        throw std::invalid_argument("EdgeSet '" + relation_name_ + "': self-loop on '" + a + "'");
    }
    if (!(w > 0.0)) {
        throw std::invalid_argument("EdgeSet '" + relation_name_ + "': non-positive weight");
    }
    edges_[make_key(a, b)] += w;
}

std::optional<double> EdgeSet::weight(const std::string& a, const std::string& b) const {
    auto it = edges_.find(make_key(a, b));
    if (it == edges_.end()) return std::nullopt;
    return it->second;
}

void MultiRelationalGraph::add_vertex(PaperRecord record) {
    std::string id = record.paper_id;
    if (id.empty()) throw std::invalid_argument("vertex with empty paper_id");
    vertices_[id] = std::move(record);
}

bool MultiRelationalGraph::has_vertex(const std::string& paper_id) const {
    return vertices_.count(paper_id) != 0;
}

const PaperRecord* MultiRelationalGraph::find_vertex(const std::string& paper_id) const {
    auto it = vertices_.find(paper_id);
    return it == vertices_.end() ? nullptr : &it->second;
}

void MultiRelationalGraph::add_relation(EdgeSet edge_set) {
    const std::string& name = edge_set.relation_name();
    if (name.empty()) throw std::invalid_argument("relation with empty name");
    if (edge_family_.count(name)) throw std::invalid_argument("duplicate relation '" + name + "'");
    for (const auto& [key, w] : edge_set.edges()) {
        if (!has_vertex(key.first) || !has_vertex(key.second)) {
            throw std::invalid_argument("relation '" + name + "' references unknown vertex '" +
                                        (has_vertex(key.first) ? key.second : key.first) + "'");
        }
    }
    edge_family_.emplace(name, std::move(edge_set));
}

bool MultiRelationalGraph::has_relation(const std::string& name) const {
    return edge_family_.count(name) != 0;
}

void MultiRelationalGraph::validate() const {
    for (const auto& [name, es] : edge_family_) {
        for (const auto& [key, w] : es.edges()) {
            if (!has_vertex(key.first) || !has_vertex(key.second)) {
                throw std::runtime_error("relation '" + name + "' has dangling edge (" + key.first +
                                         "," + key.second + ")");
            }
            if (!(w > 0.0)) {
                throw std::runtime_error("relation '" + name + "' has non-positive weight");
            }
        }
    }
}

int Partition::community_count() const {
    std::set<int> labels;
    for (const auto& [id, c] : assignment) labels.insert(c);
    return static_cast<int>(labels.size());
}

GraphView::GraphView(const MultiRelationalGraph& graph, const std::string& relation_name) {
    auto it = graph.edge_family().find(relation_name);
    if (it == graph.edge_family().end()) {
        throw std::invalid_argument("unknown relation '" + relation_name + "'");
    }
    ids_.reserve(graph.vertices().size());
    for (const auto& [id, rec] : graph.vertices()) ids_.push_back(id);
    for (std::size_t i = 0; i < ids_.size(); ++i) index_[ids_[i]] = static_cast<int>(i);
    build_adjacency(it->second);
}

GraphView::GraphView(std::vector<std::string> vertex_ids, const EdgeSet& edges)
    : ids_(std::move(vertex_ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
    for (std::size_t i = 0; i < ids_.size(); ++i) index_[ids_[i]] = static_cast<int>(i);
    build_adjacency(edges);
}

void GraphView::build_adjacency(const EdgeSet& edges) {
    adjacency_.assign(ids_.size(), {});
    weighted_degree_.assign(ids_.size(), 0.0);
    for (const auto& [key, w] : edges.edges()) {
        int u = index_of(key.first);
        int v = index_of(key.second);
        if (u < 0 || v < 0) {
            throw std::invalid_argument("edge endpoint not in vertex set: (" + key.first + "," +
                                        key.second + ")");
        }
        adjacency_[static_cast<std::size_t>(u)].emplace_back(v, w);
        adjacency_[static_cast<std::size_t>(v)].emplace_back(u, w);
        weighted_degree_[static_cast<std::size_t>(u)] += w;
        weighted_degree_[static_cast<std::size_t>(v)] += w;
        total_weight_ += w;
        ++edge_count_;
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

int GraphView::index_of(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
}

GraphView single_relation_view(const MultiRelationalGraph& graph, const std::string& relation_name) {
    return GraphView(graph, relation_name);
}

}  // namespace ssnet
