#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mhwalk {

using NodeId = uint32_t;

// CSR adjacency. Immutable after construction; safe for concurrent reads.
// Neighbor slices are sorted by node id so adjacency tests are a binary search.
struct Graph {
    std::vector<uint64_t> offsets;   // length node_count()+1, offsets[0] == 0
    std::vector<NodeId> neighbors;   // sorted ascending within each slice
    std::vector<double> weights;     // parallel to neighbors, all >= 0
    std::vector<uint16_t> node_types; // empty if untyped
    std::vector<uint16_t> edge_types; // empty unless an edge-type file was loaded
    uint16_t num_node_types = 0;
    uint16_t num_edge_types = 0;
    bool symmetric = false;

    NodeId node_count() const { return static_cast<NodeId>(offsets.size() - 1); }
    uint64_t arc_count() const { return neighbors.size(); }
    uint32_t degree(NodeId v) const { return static_cast<uint32_t>(offsets[v + 1] - offsets[v]); }

    std::span<const NodeId> neighbors_of(NodeId v) const {
        return {neighbors.data() + offsets[v], degree(v)};
    }
    std::span<const double> weights_of(NodeId v) const {
        return {weights.data() + offsets[v], degree(v)};
    }
    NodeId neighbor(NodeId v, uint32_t idx) const { return neighbors[offsets[v] + idx]; }
    double weight(NodeId v, uint32_t idx) const { return weights[offsets[v] + idx]; }

    // Index of u within v's neighbor slice, if adjacent.
    std::optional<uint32_t> neighbor_index_of(NodeId v, NodeId u) const;
    bool is_adjacent(NodeId v, NodeId u) const { return neighbor_index_of(v, u).has_value(); }

    uint16_t node_type(NodeId v) const { return node_types[v]; }
    bool has_node_types() const { return !node_types.empty(); }

    // Explicit type of arc (v, idx) if an edge-type file was loaded, else the
    // derived pair code type(v) * num_node_types + type(u).
    uint16_t edge_type(NodeId v, uint32_t idx) const {
        if (!edge_types.empty()) return edge_types[offsets[v] + idx];
        return static_cast<uint16_t>(node_types[v] * num_node_types + node_types[neighbor(v, idx)]);
    }
    uint16_t edge_type_count() const {
        if (!edge_types.empty()) return num_edge_types;
        return static_cast<uint16_t>(num_node_types * num_node_types);
    }
};

struct LoadOptions {
    bool weighted = false;
    bool symmetrize = false;
};

// Edge-list text: lines "src dst [weight]", '#' comments, whitespace separated.
// Duplicate edges collapse by summing weights.
Graph load_edge_list(const std::string& path, const LoadOptions& options);

// Lines "node_id type_id"; every node must be covered.
void load_node_types(const std::string& path, Graph& graph);

// Lines "src dst type_id"; every stored arc must be covered. For symmetric
// graphs the type applies to both directions.
void load_edge_types(const std::string& path, Graph& graph);

// Inverse of load_edge_list (one directed arc per line, weights always written).
void write_edge_list(const Graph& graph, const std::string& path);

} // namespace mhwalk
