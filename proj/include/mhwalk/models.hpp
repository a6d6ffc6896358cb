#pragma once

#include "mhwalk/graph.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace mhwalk {

enum class ModelKind { deepwalk, node2vec, metapath2vec, edge2vec, fairwalk };

ModelKind model_kind_from_string(const std::string& name);
std::string to_string(ModelKind kind);

// Affixture sentinel: no previous node yet (first-order models keep it forever;
// second-order models carry it only in the bootstrap state before step one).
constexpr uint32_t kNoAffix = std::numeric_limits<uint32_t>::max();

// (position, affixture) identifies one transition distribution.
// Second-order models: affixture = index of the previous node within
// neighbors_of(position). metapath2vec: affixture = current index in the metapath.
struct WalkerState {
    NodeId position;
    uint32_t affixture;

    bool operator==(const WalkerState&) const = default;
};

// Handle for a directed arc (source, neighbors_of(source)[neighbor_index]).
struct EdgeRef {
    NodeId source;
    uint32_t neighbor_index;
};

// A random walk model: dynamic edge weight + state update rule.
// Immutable once bound; calculate_weight/update_state are pure.
class WalkModel {
public:
    ModelKind kind = ModelKind::deepwalk;
    double p = 1.0;
    double q = 1.0;
    std::vector<uint16_t> metapath;                 // metapath2vec
    std::vector<std::vector<double>> type_matrix;   // edge2vec, |edge types| x |edge types|

    // Validates parameters against the graph and precomputes per-node type
    // counts (fairwalk). Must be called before any other operation.
    void bind(const Graph& graph);

    bool second_order() const {
        return kind == ModelKind::node2vec || kind == ModelKind::edge2vec ||
               kind == ModelKind::fairwalk;
    }

    // Unnormalized dynamic weight w' of the candidate arc under `state`.
    // A second-order state with affixture == kNoAffix (bootstrap) falls back to
    // the static weight, so the first step follows the first-order distribution.
    double calculate_weight(const Graph& graph, const WalkerState& state, EdgeRef candidate) const;

    WalkerState update_state(const Graph& graph, const WalkerState& state, EdgeRef chosen) const;

    // nullopt: start is skipped (metapath type mismatch).
    std::optional<WalkerState> initial_state(const Graph& graph, NodeId start) const;

    // Number of distinct walker states over the graph.
    uint64_t state_count(const Graph& graph) const;

    // Sampler slots reserved per node in the 2D layout.
    uint32_t bucket_width(const Graph& graph, NodeId v) const;

    // Offset of the state's sampler within its node bucket.
    uint32_t slot_affix(const Graph& graph, const WalkerState& state) const;

    // metapath2vec: type required of the next node.
    uint16_t required_type(const WalkerState& state) const {
        return metapath[metapath_next(state.affixture)];
    }

    // Successor index in the (cyclic) metapath.
    uint32_t metapath_next(uint32_t affix) const {
        if (affix + 1 < metapath.size()) return affix + 1;
        return metapath.front() == metapath.back() && metapath.size() > 1 ? 1 : 0;
    }

private:
    double alpha(const Graph& graph, NodeId prev, NodeId candidate) const;

    std::vector<uint32_t> type_counts_; // fairwalk: node_count * num_node_types
    uint16_t num_types_ = 0;
};

} // namespace mhwalk
