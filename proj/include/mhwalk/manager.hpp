#pragma once

#include "mhwalk/graph.hpp"
#include "mhwalk/models.hpp"
#include "mhwalk/samplers.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace mhwalk {

// 2D position/affixture layout: one Last slot per walker state, grouped into
// one bucket per node. Slots are allocated uninitialized; a slot runs its
// initialization strategy the first time it is queried.
//
// Concurrency: initialization happens at most once per slot (atomic claim;
// losers spin until the winner publishes). Last is a single word read/written
// atomically; concurrent acceptances may overwrite each other, which keeps
// the chain valid since every retained value is some accepted sample.
class SamplerManager {
public:
    SamplerManager(const Graph& graph, const WalkModel& model);

    uint64_t slot_count() const { return slot_count_; }

    uint64_t slot_index(const WalkerState& state) const {
        return bucket_offsets_[state.position] + model_->slot_affix(*graph_, state);
    }

    // One M-H sampling call through the state's slot. nullopt: dead end (no
    // positive-weight candidate at this state).
    std::optional<uint32_t> sample(const WalkerState& state, const InitStrategy& strategy,
                                   Rng& rng);

    // Test hook: slot status without side effects.
    bool initialized(const WalkerState& state) const {
        return status_[slot_index(state)].load(std::memory_order_acquire) >= kReady;
    }
    uint64_t initialized_count() const;

    // Seconds spent running slot initializations (summed across threads).
    double init_seconds() const { return static_cast<double>(init_nanos_.load()) * 1e-9; }

private:
    static constexpr uint8_t kEmpty = 0, kClaiming = 1, kReady = 2, kDeadEnd = 3;

    const Graph* graph_;
    const WalkModel* model_;
    std::vector<uint64_t> bucket_offsets_;
    uint64_t slot_count_ = 0;
    std::unique_ptr<std::atomic<uint32_t>[]> last_;
    std::unique_ptr<std::atomic<uint8_t>[]> status_;
    std::atomic<uint64_t> init_nanos_{0};
};

} // namespace mhwalk
