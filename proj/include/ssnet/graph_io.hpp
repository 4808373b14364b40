#ifndef SSNET_GRAPH_IO_HPP
#define SSNET_GRAPH_IO_HPP

#include <iosfwd>
#include <string>

#include "ssnet/model.hpp"

namespace ssnet {

// Canonical on-disk format. Edges carry `relation` and `weight` attributes;
// node attributes mirror PaperRecord (authors joined with '|').
void write_graphml(const MultiRelationalGraph& graph, std::ostream& out);
MultiRelationalGraph read_graphml(std::istream& in);

void write_graphml_file(const MultiRelationalGraph& graph, const std::string& path);
MultiRelationalGraph read_graphml_file(const std::string& path);

// Secondary export: `src,dst,weight` with a header row, sorted by pair.
void write_edge_csv(const EdgeSet& edges, std::ostream& out);

// Floating point as printed in every CSV/GraphML artifact: 6 significant
// digits, shortest form.
std::string format_double(double v);

}  // namespace ssnet

#endif
