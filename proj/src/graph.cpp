#include "mhwalk/graph.hpp"

#include "mhwalk/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mhwalk {

std::optional<uint32_t> Graph::neighbor_index_of(NodeId v, NodeId u) const {
    auto slice = neighbors_of(v);
    auto it = std::lower_bound(slice.begin(), slice.end(), u);
    if (it == slice.end() || *it != u) return std::nullopt;
    return static_cast<uint32_t>(it - slice.begin());
}

namespace {

struct RawEdge {
    NodeId src, dst;
    double w;
};

bool blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

Graph build_csr(std::vector<RawEdge>& edges, bool symmetric) {
    NodeId max_id = 0;
    for (const auto& e : edges) max_id = std::max({max_id, e.src, e.dst});
    NodeId n = edges.empty() ? 0 : max_id + 1;

    std::sort(edges.begin(), edges.end(), [](const RawEdge& a, const RawEdge& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    // collapse duplicates by weight summation
    size_t out = 0;
    for (size_t i = 0; i < edges.size(); ++i) {
        if (out > 0 && edges[out - 1].src == edges[i].src && edges[out - 1].dst == edges[i].dst) {
            edges[out - 1].w += edges[i].w;
        } else {
            edges[out++] = edges[i];
        }
    }
    edges.resize(out);

    Graph g;
    g.symmetric = symmetric;
    g.offsets.assign(n + 1, 0);
    for (const auto& e : edges) ++g.offsets[e.src + 1];
    for (NodeId v = 0; v < n; ++v) g.offsets[v + 1] += g.offsets[v];
    g.neighbors.reserve(edges.size());
    g.weights.reserve(edges.size());
    for (const auto& e : edges) {
        g.neighbors.push_back(e.dst);
        g.weights.push_back(e.w);
    }
    return g;
}

} // namespace

Graph load_edge_list(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open edge list: " + path);

    std::vector<RawEdge> edges;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank_or_comment(line)) continue;
        std::istringstream ss(line);
        long long src, dst;
        if (!(ss >> src >> dst) || src < 0 || dst < 0) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected \"src dst [weight]\"");
        }
        double w = 1.0;
        if (options.weighted) {
            if (!(ss >> w)) {
                throw ParseError(path + ":" + std::to_string(lineno) + ": missing edge weight");
            }
            if (w < 0) {
                throw ValidationError(path + ":" + std::to_string(lineno) + ": negative edge weight");
            }
        }
        edges.push_back({static_cast<NodeId>(src), static_cast<NodeId>(dst), w});
        if (options.symmetrize && src != dst) {
            edges.push_back({static_cast<NodeId>(dst), static_cast<NodeId>(src), w});
        }
    }
    return build_csr(edges, options.symmetrize);
}

void load_node_types(const std::string& path, Graph& graph) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open node-type file: " + path);

    const NodeId n = graph.node_count();
    std::vector<uint16_t> types(n, 0);
    std::vector<bool> covered(n, false);
    std::string line;
    size_t lineno = 0;
    uint16_t max_type = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank_or_comment(line)) continue;
        std::istringstream ss(line);
        long long node, type;
        if (!(ss >> node >> type) || node < 0 || type < 0) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected \"node_id type_id\"");
        }
        if (node >= n) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": unknown node id " +
                                  std::to_string(node));
        }
        types[node] = static_cast<uint16_t>(type);
        covered[node] = true;
        max_type = std::max(max_type, static_cast<uint16_t>(type));
    }
    for (NodeId v = 0; v < n; ++v) {
        if (!covered[v]) {
            throw ValidationError(path + ": node " + std::to_string(v) + " has no type assignment");
        }
    }
    graph.node_types = std::move(types);
    graph.num_node_types = static_cast<uint16_t>(max_type + 1);
}

void load_edge_types(const std::string& path, Graph& graph) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open edge-type file: " + path);

    std::vector<uint16_t> types(graph.arc_count(), 0);
    std::vector<bool> covered(graph.arc_count(), false);
    std::string line;
    size_t lineno = 0;
    uint16_t max_type = 0;
    auto assign = [&](NodeId s, NodeId d, uint16_t t) {
        auto idx = graph.neighbor_index_of(s, d);
        if (!idx) return false;
        types[graph.offsets[s] + *idx] = t;
        covered[graph.offsets[s] + *idx] = true;
        return true;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (blank_or_comment(line)) continue;
        std::istringstream ss(line);
        long long src, dst, type;
        if (!(ss >> src >> dst >> type) || src < 0 || dst < 0 || type < 0) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected \"src dst type_id\"");
        }
        if (src >= graph.node_count() || dst >= graph.node_count() ||
            !assign(static_cast<NodeId>(src), static_cast<NodeId>(dst), static_cast<uint16_t>(type))) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": edge not present in graph");
        }
        if (graph.symmetric) {
            assign(static_cast<NodeId>(dst), static_cast<NodeId>(src), static_cast<uint16_t>(type));
        }
        max_type = std::max(max_type, static_cast<uint16_t>(type));
    }
    for (uint64_t i = 0; i < graph.arc_count(); ++i) {
        if (!covered[i]) {
            throw ValidationError(path + ": arc " + std::to_string(i) + " has no type assignment");
        }
    }
    graph.edge_types = std::move(types);
    graph.num_edge_types = static_cast<uint16_t>(max_type + 1);
}

void write_edge_list(const Graph& graph, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.precision(17);
    for (NodeId v = 0; v < graph.node_count(); ++v) {
        for (uint32_t i = 0; i < graph.degree(v); ++i) {
            out << v << ' ' << graph.neighbor(v, i) << ' ' << graph.weight(v, i) << '\n';
        }
    }
    if (!out) throw IoError("write failed: " + path);
}

} // namespace mhwalk
