#pragma once

#include "mhwalk/graph.hpp"
#include "mhwalk/models.hpp"
#include "mhwalk/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mhwalk {

// One M-H chain step over a support of size n with unnormalized weights given
// by `weight(i)`. Proposes uniformly over the full support and accepts with
// min{1, w_cand / w_last}. Returns the new last sample. If the current last
// has weight 0, the acceptance ratio is taken as 1.
template <class WeightFn>
uint32_t mh_transition(uint32_t last, uint32_t n, WeightFn&& weight, Rng& rng,
                       bool* accepted = nullptr) {
    const uint32_t cand = rng.uniform_index(n);
    const double wc = weight(cand);
    const double wl = weight(last);
    const bool accept = wl <= 0.0 || wc >= wl || rng.uniform_real() * wl < wc;
    if (accepted) *accepted = accept;
    return accept ? cand : last;
}

struct InitStrategy {
    enum class Kind { random, high_weight, burn_in };
    Kind kind = Kind::random;
    uint32_t burn_in_steps = 100;
    uint32_t hw_sample_size = 32;
};

InitStrategy::Kind init_kind_from_string(const std::string& name);

// Picks the initial Last slot for the chain of `state`. nullopt when every
// candidate has zero dynamic weight (the walk dead-ends here).
std::optional<uint32_t> mh_init(const InitStrategy& strategy, const WalkModel& model,
                                const Graph& graph, const WalkerState& state, Rng& rng);

// One M-H sampling call (Last slot owned by the caller). Returns the neighbor
// index of the sampled edge and updates `last` in place.
inline uint32_t mh_sample(uint32_t& last, const WalkModel& model, const Graph& graph,
                          const WalkerState& state, Rng& rng) {
    last = mh_transition(
        last, graph.degree(state.position),
        [&](uint32_t i) {
            return model.calculate_weight(graph, state, {state.position, i});
        },
        rng);
    return last;
}

// Walker's alias method.
struct AliasTable {
    std::vector<double> prob;
    std::vector<uint32_t> alias;

    size_t size() const { return prob.size(); }
    // Exact probabilities the table encodes (for verification).
    std::vector<double> decode() const;
};

AliasTable alias_build(std::span<const double> weights);

inline uint32_t alias_sample(const AliasTable& table, Rng& rng) {
    const uint32_t i = rng.uniform_index(static_cast<uint32_t>(table.size()));
    return rng.uniform_real() < table.prob[i] ? i : table.alias[i];
}

// Linear-scan inverse-CDF draw over unnormalized weights.
uint32_t direct_sample(std::span<const double> weights, Rng& rng);

struct RejectionResult {
    uint32_t index;
    uint64_t trials;
};

// Draws from `proposal` (built over proposal_weights) and accepts index i with
// probability target_weights[i] / (bound * proposal_weights[i]). `bound` must
// dominate every ratio target/proposal; validated up front.
RejectionResult rejection_sample(std::span<const double> target_weights,
                                 std::span<const double> proposal_weights,
                                 const AliasTable& proposal, double bound, Rng& rng);

} // namespace mhwalk
