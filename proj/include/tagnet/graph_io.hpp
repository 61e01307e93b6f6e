#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "tagnet/graph.hpp"

namespace tagnet {

// Optional analysis results attached to an export. Empty vector = attribute
// absent. Per-vertex vectors are indexed by vertex id, edge_betweenness by
// edge id.
struct GraphAnnotations {
    std::vector<double> eigenvector;
    std::vector<double> vertex_betweenness;
    std::vector<std::uint32_t> community;
    std::vector<std::string> area;
    std::vector<double> edge_betweenness;
};

// All writers emit vertices in id order and edges sorted by (u, v), so a
// given graph always serializes to the same bytes.
void write_graphml(std::ostream& out, const WeightedGraph& g,
                   const GraphAnnotations& ann = {});
void write_dot(std::ostream& out, const WeightedGraph& g, const GraphAnnotations& ann = {});
void write_edge_csv(std::ostream& out, const WeightedGraph& g,
                    const GraphAnnotations& ann = {});
void write_centrality_csv(std::ostream& out, const WeightedGraph& g,
                          const GraphAnnotations& ann = {});
void write_graph_json(std::ostream& out, const WeightedGraph& g,
                      const GraphAnnotations& ann = {});

struct ImportedGraph {
    WeightedGraph graph;
    GraphAnnotations annotations;
};

// Readers for the two formats the pipeline round-trips: the GraphML subset
// written above (full attributes) and the edge table (labels + weights;
// vertex frequencies are not part of that table and come back as 0).
ImportedGraph read_graphml(std::istream& in);
ImportedGraph read_edge_csv(std::istream& in);

// Deterministic shortest-round-trip rendering used by every writer.
std::string format_double(double value);

}  // namespace tagnet
