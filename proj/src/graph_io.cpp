#include "ssnet/graph_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace ssnet {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string xml_unescape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] == '&') {
            auto semi = s.find(';', i);
            if (semi != std::string::npos && semi - i <= 5) {
                std::string ent = s.substr(i + 1, semi - i - 1);
                if (ent == "amp") { out += '&'; i = semi + 1; continue; }
                if (ent == "lt") { out += '<'; i = semi + 1; continue; }
                if (ent == "gt") { out += '>'; i = semi + 1; continue; }
                if (ent == "quot") { out += '"'; i = semi + 1; continue; }
                if (ent == "apos") { out += '\''; i = semi + 1; continue; }
            }
        }
        out += s[i++];
    }
    return out;
}

// Shortest representation that parses back to the same double.
std::string format_roundtrip(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string join_pipe(const std::vector<std::string>& authors) {
    std::string out;
    for (std::size_t i = 0; i < authors.size(); ++i) {
        if (i) out += '|';
        out += authors[i];
    }
    return out;
}

std::vector<std::string> split_pipe(const std::string& s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    for (;;) {
        auto bar = s.find('|', start);
        if (bar == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, bar - start));
        start = bar + 1;
    }
    return out;
}

struct XmlTag {
    std::string name;
    std::map<std::string, std::string> attrs;
    bool closing = false;       // </name>
    bool self_closing = false;  // <name/>
    std::string text_after;     // raw text following this tag, up to the next '<'
};

// Just enough of an XML reader for GraphML: tags, attributes, text nodes.
// Comments, processing instructions and CDATA in attribute values are not
// supported beyond being skipped.
class XmlScanner {
public:
    explicit XmlScanner(std::string content) : content_(std::move(content)) {}

    bool next(XmlTag& tag) {
        for (;;) {
            auto lt = content_.find('<', pos_);
            if (lt == std::string::npos) return false;
            auto gt = content_.find('>', lt);
            if (gt == std::string::npos) throw std::runtime_error("graphml: unterminated tag");
            std::string inner = content_.substr(lt + 1, gt - lt - 1);
            pos_ = gt + 1;
            if (inner.empty()) continue;
            if (inner[0] == '?' || inner[0] == '!') continue;  // decl / comment / doctype
            tag = parse_tag(inner);
            auto next_lt = content_.find('<', pos_);
            tag.text_after = content_.substr(pos_, (next_lt == std::string::npos ? content_.size() : next_lt) - pos_);
            return true;
        }
    }

private:
    static XmlTag parse_tag(const std::string& inner) {
        XmlTag tag;
        std::size_t i = 0;
        if (inner[0] == '/') {
            tag.closing = true;
            i = 1;
        }
        std::size_t end = inner.size();
        if (inner.back() == '/') {
            tag.self_closing = true;
            --end;
        }
        while (i < end && !isspace(static_cast<unsigned char>(inner[i]))) tag.name += inner[i++];
        while (i < end) {
            while (i < end && isspace(static_cast<unsigned char>(inner[i]))) ++i;
            if (i >= end) break;
            std::string key;
            while (i < end && inner[i] != '=' && !isspace(static_cast<unsigned char>(inner[i]))) key += inner[i++];
            while (i < end && isspace(static_cast<unsigned char>(inner[i]))) ++i;
            if (i < end && inner[i] == '=') {
                ++i;
                while (i < end && isspace(static_cast<unsigned char>(inner[i]))) ++i;
                if (i < end && (inner[i] == '"' || inner[i] == '\'')) {
                    char quote = inner[i++];
                    std::string value;
                    while (i < end && inner[i] != quote) value += inner[i++];
                    if (i < end) ++i;
                    tag.attrs[key] = xml_unescape(value);
                }
            }
        }
        return tag;
    }

    std::string content_;
    std::size_t pos_ = 0;
};

const char* kNodeKeys[][2] = {
    {"v_title", "title"},
    {"v_authors", "authors"},
    {"v_category", "primary_category"},
    {"v_published", "published"},
    {"v_summary", "summary"},
    {"v_citations", "citation_count"},
    {"v_cluster", "citation_cluster_id"},
    {"v_enriched", "enriched"},
};

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void write_graphml(const MultiRelationalGraph& graph, std::ostream& out) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    for (const auto& [id, name] : kNodeKeys) {
        out << "  <key id=\"" << id << "\" for=\"node\" attr.name=\"" << name
            << "\" attr.type=\"string\"/>\n";
    }
    out << "  <key id=\"e_relation\" for=\"edge\" attr.name=\"relation\" attr.type=\"string\"/>\n";
    out << "  <key id=\"e_weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
    out << "  <key id=\"g_relations\" for=\"graph\" attr.name=\"relations\" attr.type=\"string\"/>\n";
    out << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    {
        // Declare the relation family up front so relations without edges
        // survive a round-trip.
        std::string names;
        for (const auto& [relation, es] : graph.edge_family()) {
            if (!names.empty()) names += '|';
            names += relation;
        }
        out << "    <data key=\"g_relations\">" << xml_escape(names) << "</data>\n";
    }
    for (const auto& [id, rec] : graph.vertices()) {
        out << "    <node id=\"" << xml_escape(id) << "\">\n";
        auto data = [&](const char* key, const std::string& value) {
            if (!value.empty()) {
                out << "      <data key=\"" << key << "\">" << xml_escape(value) << "</data>\n";
            }
        };
        data("v_title", rec.title);
        data("v_authors", join_pipe(rec.authors));
        data("v_category", rec.primary_category);
        data("v_published", rec.published);
        data("v_summary", rec.summary);
        if (rec.citation_count) data("v_citations", std::to_string(*rec.citation_count));
        if (rec.citation_cluster_id) data("v_cluster", *rec.citation_cluster_id);
        data("v_enriched", rec.enriched ? "true" : "");
        out << "    </node>\n";
    }
    for (const auto& [relation, es] : graph.edge_family()) {
        for (const auto& [key, w] : es.edges()) {
            out << "    <edge source=\"" << xml_escape(key.first) << "\" target=\""
                << xml_escape(key.second) << "\">"
                << "<data key=\"e_relation\">" << xml_escape(relation) << "</data>"
                << "<data key=\"e_weight\">" << format_roundtrip(w) << "</data>"
                << "</edge>\n";
        }
    }
    out << "  </graph>\n</graphml>\n";
}

MultiRelationalGraph read_graphml(std::istream& in) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    XmlScanner scanner(buffer.str());

    MultiRelationalGraph graph;
    std::map<std::string, std::string> key_names;  // key id -> attr.name
    std::map<std::string, EdgeSet> relations;

    PaperRecord node;
    std::string edge_src, edge_dst, edge_relation;
    double edge_weight = 1.0;
    enum { Top, InNode, InEdge } state = Top;
    std::string pending_data_key;

    XmlTag tag;
    while (scanner.next(tag)) {
        if (tag.name == "key" && !tag.closing) {
            auto id = tag.attrs.find("id");
            auto name = tag.attrs.find("attr.name");
            if (id != tag.attrs.end() && name != tag.attrs.end()) key_names[id->second] = name->second;
        } else if (tag.name == "node" && !tag.closing) {
            node = PaperRecord{};
            node.paper_id = tag.attrs["id"];
            state = InNode;
            if (tag.self_closing) {
                graph.add_vertex(node);
                state = Top;
            }
        } else if (tag.name == "node" && tag.closing) {
            graph.add_vertex(node);
            state = Top;
        } else if (tag.name == "edge" && !tag.closing) {
            edge_src = tag.attrs["source"];
            edge_dst = tag.attrs["target"];
            edge_relation = "default";
            edge_weight = 1.0;
            state = InEdge;
            if (tag.self_closing) {
                relations.try_emplace(edge_relation, edge_relation).first->second.add_weight(edge_src, edge_dst, edge_weight);
                state = Top;
            }
        } else if (tag.name == "edge" && tag.closing) {
            relations.try_emplace(edge_relation, edge_relation).first->second.add_weight(edge_src, edge_dst, edge_weight);
            state = Top;
        } else if (tag.name == "data" && !tag.closing && !tag.self_closing) {
            std::string value = xml_unescape(tag.text_after);
            auto named = key_names.find(tag.attrs["key"]);
            std::string name = named == key_names.end() ? tag.attrs["key"] : named->second;
            if (state == InNode) {
                if (name == "title") node.title = value;
                else if (name == "authors") node.authors = split_pipe(value);
                else if (name == "primary_category") node.primary_category = value;
                else if (name == "published") node.published = value;
                else if (name == "summary") node.summary = value;
                else if (name == "citation_count") node.citation_count = std::stoull(value);
                else if (name == "citation_cluster_id") node.citation_cluster_id = value;
                else if (name == "enriched") node.enriched = (value == "true");
            } else if (state == InEdge) {
                if (name == "relation") edge_relation = value;
                else if (name == "weight") edge_weight = std::stod(value);
            } else if (name == "relations" && !value.empty()) {
                for (const auto& relation : split_pipe(value)) {
                    relations.try_emplace(relation, relation);
                }
            }
        }
    }
    for (auto& [name, es] : relations) graph.add_relation(std::move(es));
    graph.validate();
    return graph;
}

void write_graphml_file(const MultiRelationalGraph& graph, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_graphml(graph, out);
}

MultiRelationalGraph read_graphml_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return read_graphml(in);
}

void write_edge_csv(const EdgeSet& edges, std::ostream& out) {
    out << "src,dst,weight\n";
    for (const auto& [key, w] : edges.edges()) {
        out << key.first << ',' << key.second << ',' << format_roundtrip(w) << '\n';
    }
}

}  // namespace ssnet
