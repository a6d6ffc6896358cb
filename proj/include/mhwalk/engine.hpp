#pragma once

#include "mhwalk/graph.hpp"
#include "mhwalk/manager.hpp"
#include "mhwalk/models.hpp"
#include "mhwalk/samplers.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mhwalk {

enum class SamplerKind { mh, alias, direct, rejection };

SamplerKind sampler_kind_from_string(const std::string& name);
std::string to_string(SamplerKind kind);

struct WalkConfig {
    uint32_t walks_per_node = 10; // K
    uint32_t walk_length = 80;    // L, number of steps; a walk holds up to L+1 nodes
    uint32_t threads = 1;
    uint64_t seed = 0;
    SamplerKind sampler_kind = SamplerKind::mh;
    InitStrategy init;
};

struct RunStats {
    uint64_t walks = 0;
    uint64_t early_terminations = 0;
    uint64_t skipped_starts = 0;
    uint64_t steps = 0;
    double steps_per_sec = 0.0;
    double init_seconds = 0.0;
    double walk_seconds = 0.0;
};

struct WalkCorpus {
    std::vector<std::vector<NodeId>> walks;
    RunStats stats;
};

// Algorithm: for every node and every k in 1..K, start a walker and extend it
// up to L steps (query sampler, sample, update state). Walkers are statically
// partitioned across threads; each walker draws from its own seed-derived
// random stream, so with threads=1 the corpus is bit-reproducible.
WalkCorpus generate_walks(const Graph& graph, const WalkModel& model, const WalkConfig& config);

// One walk per line, space-separated node ids. Stats go to <path>.stats.jsonl.
void write_corpus(const WalkCorpus& corpus, const std::string& path);

std::vector<std::vector<NodeId>> read_corpus(const std::string& path);

} // namespace mhwalk
