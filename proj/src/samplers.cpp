#include "mhwalk/samplers.hpp"

#include "mhwalk/errors.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace mhwalk {

InitStrategy::Kind init_kind_from_string(const std::string& name) {
    if (name == "random") return InitStrategy::Kind::random;
    if (name == "high-weight" || name == "high_weight") return InitStrategy::Kind::high_weight;
    if (name == "burn-in" || name == "burn_in") return InitStrategy::Kind::burn_in;
    throw ValidationError("unknown init strategy: " + name);
}

namespace {

// Uniform pick among candidates with strictly positive dynamic weight.
template <class WeightFn>
std::optional<uint32_t> random_positive(uint32_t n, WeightFn&& weight, Rng& rng) {
    uint32_t positive = 0;
    for (uint32_t i = 0; i < n; ++i) {
        if (weight(i) > 0) ++positive;
    }
    if (positive == 0) return std::nullopt;
    uint32_t pick = rng.uniform_index(positive);
    for (uint32_t i = 0; i < n; ++i) {
        if (weight(i) > 0 && pick-- == 0) return i;
    }
    return std::nullopt; // unreachable
}

} // namespace

std::optional<uint32_t> mh_init(const InitStrategy& strategy, const WalkModel& model,
                                const Graph& graph, const WalkerState& state, Rng& rng) {
    const uint32_t n = graph.degree(state.position);
    if (n == 0) return std::nullopt;
    auto weight = [&](uint32_t i) {
        return model.calculate_weight(graph, state, {state.position, i});
    };

    switch (strategy.kind) {
    case InitStrategy::Kind::random:
        return random_positive(n, weight, rng);

    case InitStrategy::Kind::high_weight: {
        double best_w = 0.0;
        uint32_t best = 0;
        bool found = false;
        if (n <= strategy.hw_sample_size) {
            for (uint32_t i = 0; i < n; ++i) {
                const double w = weight(i);
                if (w > best_w) { best_w = w; best = i; found = true; }
            }
        } else {
            for (uint32_t probe = 0; probe < strategy.hw_sample_size; ++probe) {
                const uint32_t i = rng.uniform_index(n);
                const double w = weight(i);
                if (w > best_w || (w == best_w && found && i < best)) {
                    if (w > 0) { best_w = w; best = i; found = true; }
                }
            }
            // all probes landed on zero weight; fall back to a full scan
            if (!found) return random_positive(n, weight, rng);
        }
        return found ? std::optional<uint32_t>(best) : std::nullopt;
    }

    case InitStrategy::Kind::burn_in: {
        auto start = random_positive(n, weight, rng);
        if (!start) return std::nullopt;
        uint32_t last = *start;
        for (uint32_t i = 0; i < strategy.burn_in_steps; ++i) {
            last = mh_transition(last, n, weight, rng);
        }
        return last;
    }
    }
    return std::nullopt;
}

std::vector<double> AliasTable::decode() const {
    std::vector<double> probs(size(), 0.0);
    const double cell = 1.0 / static_cast<double>(size());
    for (size_t i = 0; i < size(); ++i) {
        probs[i] += prob[i] * cell;
        probs[alias[i]] += (1.0 - prob[i]) * cell;
    }
    return probs;
}

AliasTable alias_build(std::span<const double> weights) {
    const size_t n = weights.size();
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (n == 0 || total <= 0) throw ValidationError("alias_build: no positive weight");
    for (double w : weights) {
        if (w < 0) throw ValidationError("alias_build: negative weight");
    }

    AliasTable t;
    t.prob.assign(n, 1.0);
    t.alias.resize(n);
    std::iota(t.alias.begin(), t.alias.end(), 0u);

    std::vector<double> scaled(n);
    for (size_t i = 0; i < n; ++i) scaled[i] = weights[i] * n / total;

    std::vector<uint32_t> small, large;
    for (size_t i = 0; i < n; ++i) {
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        const uint32_t s = small.back();
        const uint32_t l = large.back();
        small.pop_back();
        t.prob[s] = scaled[s];
        t.alias[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    // leftovers are 1.0 up to rounding
    for (uint32_t i : small) t.prob[i] = 1.0;
    for (uint32_t i : large) t.prob[i] = 1.0;
    return t;
}

uint32_t direct_sample(std::span<const double> weights, Rng& rng) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (total <= 0) throw ValidationError("direct_sample: no positive weight");
    double r = rng.uniform_real() * total;
    for (size_t i = 0; i < weights.size(); ++i) {
        r -= weights[i];
        if (r < 0) return static_cast<uint32_t>(i);
    }
    // rounding pushed r to the end; return the last positive entry
    for (size_t i = weights.size(); i-- > 0;) {
        if (weights[i] > 0) return static_cast<uint32_t>(i);
    }
    return 0;
}

RejectionResult rejection_sample(std::span<const double> target_weights,
                                 std::span<const double> proposal_weights,
                                 const AliasTable& proposal, double bound, Rng& rng) {
    const size_t n = target_weights.size();
    if (proposal_weights.size() != n || proposal.size() != n) {
        throw ValidationError("rejection_sample: size mismatch");
    }
    for (size_t i = 0; i < n; ++i) {
        if (target_weights[i] > bound * proposal_weights[i]) {
            throw ValidationError("rejection_sample: envelope violated at index " +
                                  std::to_string(i));
        }
    }
    uint64_t trials = 0;
    for (;;) {
        ++trials;
        const uint32_t i = alias_sample(proposal, rng);
        const double accept = target_weights[i] / (bound * proposal_weights[i]);
        if (accept >= 1.0 || rng.uniform_real() < accept) return {i, trials};
    }
}

} // namespace mhwalk
