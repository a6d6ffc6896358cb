#include "mhwalk/engine.hpp"

#include "mhwalk/errors.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace mhwalk {

SamplerKind sampler_kind_from_string(const std::string& name) {
    if (name == "mh") return SamplerKind::mh;
    if (name == "alias") return SamplerKind::alias;
    if (name == "direct") return SamplerKind::direct;
    if (name == "rejection") return SamplerKind::rejection;
    throw ValidationError("unknown sampler: " + name);
}

std::string to_string(SamplerKind kind) {
    switch (kind) {
    case SamplerKind::mh: return "mh";
    case SamplerKind::alias: return "alias";
    case SamplerKind::direct: return "direct";
    case SamplerKind::rejection: return "rejection";
    }
    return "?";
}

namespace {

// Envelope on w'/w implied by the model parameters (rejection baseline).
double rejection_bound(const WalkModel& model) {
    double alpha_max = std::max({1.0, 1.0 / model.p, 1.0 / model.q});
    switch (model.kind) {
    case ModelKind::deepwalk:
    case ModelKind::metapath2vec:
        return 1.0;
    case ModelKind::node2vec:
    case ModelKind::fairwalk:
        return alpha_max;
    case ModelKind::edge2vec: {
        double m_max = 0.0;
        for (const auto& row : model.type_matrix) {
            for (double x : row) m_max = std::max(m_max, x);
        }
        return alpha_max * m_max;
    }
    }
    return 1.0;
}

// Baseline sampler state shared across walkers (lazily built, mutex guarded;
// map nodes are stable so references stay valid after unlock).
struct BaselineTables {
    std::mutex mutex;
    std::unordered_map<uint64_t, AliasTable> dynamic_alias;   // keyed by state slot
    std::unordered_map<NodeId, AliasTable> static_proposals;  // rejection, per node
};

class WalkerContext {
public:
    WalkerContext(const Graph& g, const WalkModel& m, const WalkConfig& c, SamplerManager& mgr,
                  BaselineTables& tables)
        : graph_(g), model_(m), config_(c), manager_(mgr), tables_(tables),
          bound_(rejection_bound(m)) {}

    // nullopt: dead end.
    std::optional<uint32_t> next_edge(const WalkerState& state, Rng& rng) {
        const NodeId v = state.position;
        const uint32_t deg = graph_.degree(v);
        if (deg == 0) return std::nullopt;

        // bootstrap step of a second-order walk: draw from the static weights
        if (model_.second_order() && state.affixture == kNoAffix) {
            return draw_static(v, rng);
        }

        switch (config_.sampler_kind) {
        case SamplerKind::mh:
            return manager_.sample(state, config_.init, rng);
        case SamplerKind::direct: {
            auto w = dynamic_weights(state);
            if (std::accumulate(w.begin(), w.end(), 0.0) <= 0) return std::nullopt;
            return direct_sample(w, rng);
        }
        case SamplerKind::alias: {
            const AliasTable* table = nullptr;
            {
                std::lock_guard lock(tables_.mutex);
                auto it = tables_.dynamic_alias.find(manager_.slot_index(state));
                if (it == tables_.dynamic_alias.end()) {
                    auto w = dynamic_weights(state);
                    if (std::accumulate(w.begin(), w.end(), 0.0) <= 0) return std::nullopt;
                    it = tables_.dynamic_alias
                             .emplace(manager_.slot_index(state), alias_build(w))
                             .first;
                }
                table = &it->second;
            }
            return alias_sample(*table, rng);
        }
        case SamplerKind::rejection: {
            const AliasTable* proposal = static_proposal(v);
            if (!proposal) return std::nullopt;
            auto target = dynamic_weights(state);
            if (std::accumulate(target.begin(), target.end(), 0.0) <= 0) return std::nullopt;
            return rejection_sample(target, graph_.weights_of(v), *proposal, bound_, rng).index;
        }
        }
        return std::nullopt;
    }

private:
    std::vector<double> dynamic_weights(const WalkerState& state) const {
        const uint32_t deg = graph_.degree(state.position);
        std::vector<double> w(deg);
        for (uint32_t i = 0; i < deg; ++i) {
            w[i] = model_.calculate_weight(graph_, state, {state.position, i});
        }
        return w;
    }

    std::optional<uint32_t> draw_static(NodeId v, Rng& rng) {
        auto w = graph_.weights_of(v);
        if (std::accumulate(w.begin(), w.end(), 0.0) <= 0) return std::nullopt;
        return direct_sample(w, rng);
    }

    const AliasTable* static_proposal(NodeId v) {
        std::lock_guard lock(tables_.mutex);
        auto it = tables_.static_proposals.find(v);
        if (it == tables_.static_proposals.end()) {
            auto w = graph_.weights_of(v);
            if (std::accumulate(w.begin(), w.end(), 0.0) <= 0) return nullptr;
            it = tables_.static_proposals.emplace(v, alias_build(w)).first;
        }
        return &it->second;
    }

    const Graph& graph_;
    const WalkModel& model_;
    const WalkConfig& config_;
    SamplerManager& manager_;
    BaselineTables& tables_;
    double bound_;
};

} // namespace

WalkCorpus generate_walks(const Graph& graph, const WalkModel& model, const WalkConfig& config) {
    if (config.walks_per_node == 0 || config.walk_length == 0 || config.threads == 0) {
        throw ValidationError("walks_per_node, walk_length and threads must be positive");
    }

    const NodeId n = graph.node_count();
    const uint64_t total_walkers = static_cast<uint64_t>(n) * config.walks_per_node;
    const uint32_t threads = static_cast<uint32_t>(
        std::min<uint64_t>(config.threads, std::max<uint64_t>(total_walkers, 1)));

    SamplerManager manager(graph, model);
    BaselineTables tables;
    WalkerContext ctx(graph, model, config, manager, tables);

    struct ThreadOut {
        std::vector<std::vector<NodeId>> walks;
        uint64_t early = 0, skipped = 0, steps = 0;
    };
    std::vector<ThreadOut> outs(threads);

    const auto t0 = std::chrono::steady_clock::now();
    auto worker = [&](uint32_t tid) {
        const uint64_t begin = total_walkers * tid / threads;
        const uint64_t end = total_walkers * (tid + 1) / threads;
        ThreadOut& out = outs[tid];
        for (uint64_t idx = begin; idx < end; ++idx) {
            const NodeId v = static_cast<NodeId>(idx / config.walks_per_node);
            const uint32_t k = static_cast<uint32_t>(idx % config.walks_per_node);
            Rng rng = walker_stream(config.seed, v, k);

            auto state = model.initial_state(graph, v);
            if (!state) {
                ++out.skipped;
                continue;
            }
            std::vector<NodeId> walk;
            walk.reserve(config.walk_length + 1);
            walk.push_back(v);
            for (uint32_t step = 0; step < config.walk_length; ++step) {
                auto edge = ctx.next_edge(*state, rng);
                if (!edge) {
                    ++out.early;
                    break;
                }
                const EdgeRef chosen{state->position, *edge};
                walk.push_back(graph.neighbor(chosen.source, chosen.neighbor_index));
                *state = model.update_state(graph, *state, chosen);
                ++out.steps;
            }
            out.walks.push_back(std::move(walk));
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (uint32_t t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    const auto t1 = std::chrono::steady_clock::now();

    WalkCorpus corpus;
    for (auto& out : outs) {
        corpus.stats.early_terminations += out.early;
        corpus.stats.skipped_starts += out.skipped;
        corpus.stats.steps += out.steps;
        for (auto& w : out.walks) corpus.walks.push_back(std::move(w));
    }
    corpus.stats.walks = corpus.walks.size();
    const double elapsed = std::chrono::duration<double>(t1 - t0).count();
    corpus.stats.init_seconds = manager.init_seconds();
    corpus.stats.walk_seconds = std::max(0.0, elapsed - corpus.stats.init_seconds);
    corpus.stats.steps_per_sec =
        elapsed > 0 ? static_cast<double>(corpus.stats.steps) / elapsed : 0.0;
    return corpus;
}

void write_corpus(const WalkCorpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (const auto& walk : corpus.walks) {
        for (size_t i = 0; i < walk.size(); ++i) {
            if (i) out << ' ';
            out << walk[i];
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);

    nlohmann::json stats = {
        {"walks", corpus.stats.walks},
        {"early_terminations", corpus.stats.early_terminations},
        {"skipped_starts", corpus.stats.skipped_starts},
        {"steps", corpus.stats.steps},
        {"steps_per_sec", corpus.stats.steps_per_sec},
        {"init_seconds", corpus.stats.init_seconds},
        {"walk_seconds", corpus.stats.walk_seconds},
    };
    std::ofstream sidecar(path + ".stats.jsonl");
    if (!sidecar) throw IoError("cannot open for writing: " + path + ".stats.jsonl");
    sidecar << stats.dump() << '\n';
}

std::vector<std::vector<NodeId>> read_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus: " + path);
    std::vector<std::vector<NodeId>> walks;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::vector<NodeId> walk;
        uint64_t id;
        while (ss >> id) walk.push_back(static_cast<NodeId>(id));
        if (!walk.empty()) walks.push_back(std::move(walk));
    }
    return walks;
}

} // namespace mhwalk
