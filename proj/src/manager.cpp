#include "mhwalk/manager.hpp"

#include "mhwalk/errors.hpp"

#include <chrono>
#include <thread>

namespace mhwalk {

SamplerManager::SamplerManager(const Graph& graph, const WalkModel& model)
    : graph_(&graph), model_(&model) {
    const NodeId n = graph.node_count();
    bucket_offsets_.assign(n + 1, 0);
    for (NodeId v = 0; v < n; ++v) {
        bucket_offsets_[v + 1] = bucket_offsets_[v] + model.bucket_width(graph, v);
    }
    slot_count_ = bucket_offsets_[n];
    if (slot_count_ > (uint64_t{1} << 40)) {
        throw ValidationError("sampler layout too large: " + std::to_string(slot_count_) +
                              " slots");
    }
    last_ = std::make_unique<std::atomic<uint32_t>[]>(slot_count_);
    status_ = std::make_unique<std::atomic<uint8_t>[]>(slot_count_);
    for (uint64_t i = 0; i < slot_count_; ++i) {
        last_[i].store(0, std::memory_order_relaxed);
        status_[i].store(kEmpty, std::memory_order_relaxed);
    }
}

std::optional<uint32_t> SamplerManager::sample(const WalkerState& state,
                                               const InitStrategy& strategy, Rng& rng) {
    const uint64_t slot = slot_index(state);
    uint8_t st = status_[slot].load(std::memory_order_acquire);

    if (st == kEmpty) {
        uint8_t expected = kEmpty;
        if (status_[slot].compare_exchange_strong(expected, kClaiming,
                                                  std::memory_order_acq_rel)) {
            const auto t0 = std::chrono::steady_clock::now();
            auto init = mh_init(strategy, *model_, *graph_, state, rng);
            const auto t1 = std::chrono::steady_clock::now();
            init_nanos_.fetch_add(
                std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count(),
                std::memory_order_relaxed);
            if (init) {
                last_[slot].store(*init, std::memory_order_relaxed);
                status_[slot].store(kReady, std::memory_order_release);
                st = kReady;
            } else {
                status_[slot].store(kDeadEnd, std::memory_order_release);
                st = kDeadEnd;
            }
        } else {
            st = expected;
        }
    }
    while (st == kClaiming) {
        std::this_thread::yield();
        st = status_[slot].load(std::memory_order_acquire);
    }
    if (st == kDeadEnd) return std::nullopt;

    uint32_t last = last_[slot].load(std::memory_order_relaxed);
    const uint32_t next = mh_transition(
        last, graph_->degree(state.position),
        [&](uint32_t i) {
            return model_->calculate_weight(*graph_, state, {state.position, i});
        },
        rng);
    if (next != last) last_[slot].store(next, std::memory_order_relaxed);
    return next;
}

uint64_t SamplerManager::initialized_count() const {
    uint64_t count = 0;
    for (uint64_t i = 0; i < slot_count_; ++i) {
        if (status_[i].load(std::memory_order_relaxed) >= kReady) ++count;
    }
    return count;
}

} // namespace mhwalk
