#include "mhwalk/models.hpp"

#include "mhwalk/errors.hpp"

#include <cassert>

namespace mhwalk {

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "deepwalk") return ModelKind::deepwalk;
    if (name == "node2vec") return ModelKind::node2vec;
    if (name == "metapath2vec") return ModelKind::metapath2vec;
    if (name == "edge2vec") return ModelKind::edge2vec;
    if (name == "fairwalk") return ModelKind::fairwalk;
    throw ValidationError("unknown model: " + name);
}

std::string to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::deepwalk: return "deepwalk";
    case ModelKind::node2vec: return "node2vec";
    case ModelKind::metapath2vec: return "metapath2vec";
    case ModelKind::edge2vec: return "edge2vec";
    case ModelKind::fairwalk: return "fairwalk";
    }
    return "?";
}

void WalkModel::bind(const Graph& graph) {
    num_types_ = graph.num_node_types;

    if (second_order()) {
        if (p <= 0 || q <= 0) throw ValidationError("p and q must be positive");
        if (!graph.symmetric) {
            throw ValidationError(to_string(kind) +
                                  " requires a symmetric graph (load with symmetrize)");
        }
    }
    if (kind == ModelKind::metapath2vec || kind == ModelKind::fairwalk ||
        kind == ModelKind::edge2vec) {
        if (!graph.has_node_types()) {
            throw ValidationError(to_string(kind) + " requires node types");
        }
    }
    if (kind == ModelKind::metapath2vec) {
        if (metapath.size() < 2) throw ValidationError("metapath needs at least 2 types");
        for (uint16_t t : metapath) {
            if (t >= num_types_) {
                throw ValidationError("metapath type " + std::to_string(t) + " not in graph");
            }
        }
    }
    if (kind == ModelKind::edge2vec) {
        const size_t dim = graph.edge_type_count();
        if (type_matrix.size() != dim) {
            throw ValidationError("edge type matrix must be " + std::to_string(dim) + "x" +
                                  std::to_string(dim));
        }
        for (const auto& row : type_matrix) {
            if (row.size() != dim) throw ValidationError("edge type matrix is not square");
            for (double x : row) {
                if (x < 0) throw ValidationError("edge type matrix entries must be non-negative");
            }
        }
    }
    if (kind == ModelKind::fairwalk) {
        type_counts_.assign(static_cast<size_t>(graph.node_count()) * num_types_, 0);
        for (NodeId v = 0; v < graph.node_count(); ++v) {
            for (NodeId u : graph.neighbors_of(v)) {
                ++type_counts_[static_cast<size_t>(v) * num_types_ + graph.node_type(u)];
            }
        }
    }
}

double WalkModel::alpha(const Graph& graph, NodeId prev, NodeId candidate) const {
    if (candidate == prev) return 1.0 / p;       // d(u,s) = 0, takes precedence
    if (graph.is_adjacent(prev, candidate)) return 1.0;
    return 1.0 / q;
}

double WalkModel::calculate_weight(const Graph& graph, const WalkerState& state,
                                   EdgeRef candidate) const {
    assert(candidate.source == state.position);
    const NodeId v = state.position;
    const double w = graph.weight(v, candidate.neighbor_index);

    switch (kind) {
    case ModelKind::deepwalk:
        return w;
    case ModelKind::metapath2vec: {
        const NodeId u = graph.neighbor(v, candidate.neighbor_index);
        return graph.node_type(u) == required_type(state) ? w : 0.0;
    }
    default:
        break;
    }

    // second-order models; bootstrap state has no previous node
    if (state.affixture == kNoAffix) return w;
    const NodeId s = graph.neighbor(v, state.affixture);
    const NodeId u = graph.neighbor(v, candidate.neighbor_index);
    const double a = alpha(graph, s, u);

    switch (kind) {
    case ModelKind::node2vec:
        return a * w;
    case ModelKind::edge2vec: {
        auto sv = graph.neighbor_index_of(s, v);
        assert(sv);
        const uint16_t in_type = graph.edge_type(s, *sv);
        const uint16_t out_type = graph.edge_type(v, candidate.neighbor_index);
        return a * type_matrix[in_type][out_type] * w;
    }
    case ModelKind::fairwalk: {
        const uint32_t group =
            type_counts_[static_cast<size_t>(v) * num_types_ + graph.node_type(u)];
        return a * w / group;
    }
    default:
        return w;
    }
}

WalkerState WalkModel::update_state(const Graph& graph, const WalkerState& state,
                                    EdgeRef chosen) const {
    const NodeId next = graph.neighbor(chosen.source, chosen.neighbor_index);
    if (kind == ModelKind::deepwalk) return {next, kNoAffix};
    if (kind == ModelKind::metapath2vec) return {next, metapath_next(state.affixture)};
    auto back = graph.neighbor_index_of(next, state.position);
    if (!back) {
        throw ValidationError("second-order walk on asymmetric adjacency: no back edge " +
                              std::to_string(next) + "->" + std::to_string(state.position));
    }
    return {next, *back};
}

std::optional<WalkerState> WalkModel::initial_state(const Graph& graph, NodeId start) const {
    if (kind == ModelKind::metapath2vec) {
        if (graph.node_type(start) != metapath.front()) return std::nullopt;
        return WalkerState{start, 0};
    }
    return WalkerState{start, kNoAffix};
}

uint64_t WalkModel::state_count(const Graph& graph) const {
    switch (kind) {
    case ModelKind::deepwalk: return graph.node_count();
    case ModelKind::metapath2vec:
        return static_cast<uint64_t>(graph.node_count()) * num_types_;
    default: return graph.arc_count();
    }
}

uint32_t WalkModel::bucket_width(const Graph& graph, NodeId v) const {
    switch (kind) {
    case ModelKind::deepwalk: return 1;
    case ModelKind::metapath2vec: return num_types_;
    default: return graph.degree(v);
    }
}

uint32_t WalkModel::slot_affix(const Graph& graph, const WalkerState& state) const {
    (void)graph;
    switch (kind) {
    case ModelKind::deepwalk: return 0;
    case ModelKind::metapath2vec: return required_type(state);
    default:
        assert(state.affixture != kNoAffix);
        return state.affixture;
    }
}

} // namespace mhwalk
