#include "mhwalk/analysis.hpp"
#include "mhwalk/engine.hpp"
#include "mhwalk/errors.hpp"
#include "mhwalk/graph.hpp"
#include "mhwalk/manager.hpp"
#include "mhwalk/models.hpp"
#include "mhwalk/samplers.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace {

constexpr const char* kVersion = "0.1.0";

using namespace mhwalk;

struct ModelFlags {
    std::string model = "deepwalk";
    double p = 1.0;
    double q = 1.0;
    std::string metapath;     // comma-separated type ids
    std::string edge_matrix;  // CSV path
    std::string node_types;   // path
    std::string edge_types;   // path
};

struct GraphFlags {
    std::string input;
    bool weighted = false;
    bool symmetrize = false;
};

void add_graph_flags(CLI::App* cmd, GraphFlags& g) {
    cmd->add_option("--input", g.input, "edge list file")->required();
    cmd->add_flag("--weighted", g.weighted, "edge list has a weight column");
    cmd->add_flag("--symmetrize", g.symmetrize, "insert every edge in both directions");
}

void add_model_flags(CLI::App* cmd, ModelFlags& m) {
    cmd->add_option("--model", m.model,
                    "deepwalk|node2vec|metapath2vec|edge2vec|fairwalk");
    cmd->add_option("--p", m.p, "return parameter");
    cmd->add_option("--q", m.q, "in-out parameter");
    cmd->add_option("--metapath", m.metapath, "comma-separated node type ids");
    cmd->add_option("--edge-matrix", m.edge_matrix, "edge type transition matrix CSV");
    cmd->add_option("--node-types", m.node_types, "node type file");
    cmd->add_option("--edge-types", m.edge_types, "edge type file");
}

std::vector<uint16_t> parse_metapath(const std::string& text) {
    std::vector<uint16_t> path;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        path.push_back(static_cast<uint16_t>(std::stoul(token)));
    }
    return path;
}

std::vector<std::vector<double>> load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open matrix: " + path);
    std::vector<std::vector<double>> m;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        for (char& c : line) {
            if (c == ',') c = ' ';
        }
        std::istringstream ss(line);
        std::vector<double> row;
        double x;
        while (ss >> x) row.push_back(x);
        if (!row.empty()) m.push_back(std::move(row));
    }
    return m;
}

Graph load_graph(const GraphFlags& gf, const ModelFlags& mf) {
    Graph g = load_edge_list(gf.input, {gf.weighted, gf.symmetrize});
    if (!mf.node_types.empty()) load_node_types(mf.node_types, g);
    if (!mf.edge_types.empty()) load_edge_types(mf.edge_types, g);
    return g;
}

WalkModel make_model(const ModelFlags& mf, const Graph& graph) {
    WalkModel model;
    model.kind = model_kind_from_string(mf.model);
    model.p = mf.p;
    model.q = mf.q;
    if (!mf.metapath.empty()) model.metapath = parse_metapath(mf.metapath);
    if (!mf.edge_matrix.empty()) model.type_matrix = load_matrix(mf.edge_matrix);
    model.bind(graph);
    return model;
}

uint64_t graph_checksum(const Graph& g) {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](uint64_t x) {
        h ^= x;
        h *= 0x100000001b3ULL;
    };
    for (auto o : g.offsets) mix(o);
    for (auto v : g.neighbors) mix(v);
    for (auto w : g.weights) {
        uint64_t bits;
        static_assert(sizeof(bits) == sizeof(w));
        std::memcpy(&bits, &w, sizeof(bits));
        mix(bits);
    }
    return h;
}

uint32_t default_threads() {
    if (const char* env = std::getenv("MHWALK_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<uint32_t>(v);
    }
    return 1;
}

// ---------------------------------------------------------------- walk

int cmd_walk(const GraphFlags& gf, const ModelFlags& mf, const WalkConfig& wc,
             const std::string& output, const std::string& init_name) {
    Graph graph = load_graph(gf, mf);
    WalkModel model = make_model(mf, graph);

    WalkCorpus corpus = generate_walks(graph, model, wc);
    write_corpus(corpus, output);

    nlohmann::json manifest = {
        {"version", kVersion},
        {"config",
         {{"input", gf.input},
          {"weighted", gf.weighted},
          {"symmetrize", gf.symmetrize},
          {"model", mf.model},
          {"p", mf.p},
          {"q", mf.q},
          {"metapath", mf.metapath},
          {"edge_matrix", mf.edge_matrix},
          {"node_types", mf.node_types},
          {"edge_types", mf.edge_types},
          {"walks_per_node", wc.walks_per_node},
          {"walk_length", wc.walk_length},
          {"walk_length_unit", "steps"},
          {"sampler", to_string(wc.sampler_kind)},
          {"init", init_name},
          {"burn_in_steps", wc.init.burn_in_steps},
          {"hw_sample_size", wc.init.hw_sample_size},
          {"threads", wc.threads},
          {"seed", wc.seed},
          {"output", output}}},
        {"graph",
         {{"nodes", graph.node_count()},
          {"arcs", graph.arc_count()},
          {"checksum", graph_checksum(graph)}}},
        {"timing", {{"T_i", corpus.stats.init_seconds}, {"T_w", corpus.stats.walk_seconds}}},
    };
    std::ofstream mout(output + ".manifest.json");
    if (!mout) throw IoError("cannot open for writing: " + output + ".manifest.json");
    mout << manifest.dump(2) << '\n';

    std::cerr << "walks=" << corpus.stats.walks << " steps=" << corpus.stats.steps
              << " steps/sec=" << corpus.stats.steps_per_sec << '\n';
    return 0;
}

// ---------------------------------------------------------------- check

// Uniformly drawn well-formed states for the bound model.
std::vector<WalkerState> random_states(const Graph& g, const WalkModel& model, uint32_t count,
                                       Rng& rng) {
    std::vector<WalkerState> states;
    uint32_t attempts = 0;
    while (states.size() < count && attempts++ < count * 100) {
        const NodeId v = rng.uniform_index(g.node_count());
        if (g.degree(v) == 0) continue;
        switch (model.kind) {
        case ModelKind::deepwalk:
            states.push_back({v, kNoAffix});
            break;
        case ModelKind::metapath2vec: {
            const uint32_t i = rng.uniform_index(static_cast<uint32_t>(model.metapath.size()));
            if (model.metapath[i] != g.node_type(v)) continue;
            states.push_back({v, i});
            break;
        }
        default:
            states.push_back({v, rng.uniform_index(g.degree(v))});
            break;
        }
    }
    return states;
}

std::vector<double> exact_target(const Graph& g, const WalkModel& model,
                                 const WalkerState& state) {
    const uint32_t deg = g.degree(state.position);
    std::vector<double> w(deg);
    for (uint32_t i = 0; i < deg; ++i) {
        w[i] = model.calculate_weight(g, state, {state.position, i});
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (total > 0) {
        for (auto& x : w) x /= total;
    }
    return w;
}

int cmd_check(const GraphFlags& gf, const ModelFlags& mf, uint32_t states, uint64_t draws,
              double tolerance, uint64_t seed, const std::string& output) {
    Graph graph = load_graph(gf, mf);
    WalkModel model = make_model(mf, graph);
    Rng rng(seed);

    std::ostringstream csv;
    csv << "position,affixture,kl\n";
    double max_kl = 0.0;
    for (const auto& state : random_states(graph, model, states, rng)) {
        auto target = exact_target(graph, model, state);
        if (std::accumulate(target.begin(), target.end(), 0.0) <= 0) continue;

        auto init = mh_init({}, model, graph, state, rng);
        if (!init) continue;
        uint32_t last = *init;
        std::vector<uint64_t> counts(target.size(), 0);
        for (uint64_t d = 0; d < draws; ++d) {
            last = mh_sample(last, model, graph, state, rng);
            ++counts[last];
        }
        std::vector<double> empirical(target.size());
        for (size_t i = 0; i < target.size(); ++i) {
            empirical[i] = static_cast<double>(counts[i]) / static_cast<double>(draws);
        }
        const double kl = kl_divergence(empirical, target);
        max_kl = std::max(max_kl, kl);
        csv << state.position << ','
            << (state.affixture == kNoAffix ? -1 : static_cast<int64_t>(state.affixture)) << ','
            << kl << '\n';
    }
    csv << "max,," << max_kl << '\n';

    if (output.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(output);
        if (!out) throw IoError("cannot open for writing: " + output);
        out << csv.str();
    }
    std::cerr << "max KL = " << max_kl << " (tolerance " << tolerance << ")\n";
    return max_kl < tolerance ? 0 : 3;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const SimConfig& base, const std::vector<double>& ratios, uint64_t seed,
                 const std::string& output) {
    std::ostringstream csv;
    csv << "n,t,ratio,kl_random,kl_high,kl_ratio\n";
    for (double r : ratios) {
        SimConfig config = base;
        config.ratio = r;
        SimResult res = run_init_simulation(config, seed);
        csv << config.n << ',' << config.t << ',' << r << ',' << res.kl_random << ','
            << res.kl_high << ',' << res.ratio << '\n';
    }
    if (output.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(output);
        if (!out) throw IoError("cannot open for writing: " + output);
        out << csv.str();
    }
    return 0;
}

// ---------------------------------------------------------------- bench

struct BenchRow {
    std::string sampler;
    double steps_per_sec = 0.0;
    double acceptance = -1.0; // mh / rejection only
    uint64_t aux_memory = 0;  // bytes, analytic estimate
};

BenchRow bench_sampler(SamplerKind kind, const Graph& g, const WalkModel& model,
                       const std::vector<WalkerState>& states, uint64_t steps, uint64_t seed) {
    BenchRow row{to_string(kind)};
    Rng rng(seed);

    // analytic auxiliary-memory accounting
    uint64_t per_state_tables = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        per_state_tables += static_cast<uint64_t>(model.bucket_width(g, v)) * g.degree(v);
    }
    switch (kind) {
    case SamplerKind::mh: row.aux_memory = model.state_count(g) * 5; break;       // Last + flag
    case SamplerKind::alias: row.aux_memory = per_state_tables * 12; break;       // prob + alias
    case SamplerKind::direct: row.aux_memory = 0; break;
    case SamplerKind::rejection: row.aux_memory = g.arc_count() * 12; break;      // proposals
    }

    const auto t0 = std::chrono::steady_clock::now();
    uint64_t accepted = 0, trials = 0;

    switch (kind) {
    case SamplerKind::mh: {
        InitStrategy strategy;
        std::vector<uint32_t> lasts;
        lasts.reserve(states.size());
        for (const auto& st : states) {
            lasts.push_back(mh_init(strategy, model, g, st, rng).value_or(0));
        }
        for (uint64_t s = 0; s < steps; ++s) {
            const size_t i = s % states.size();
            const auto& st = states[i];
            bool accept = false;
            lasts[i] = mh_transition(
                lasts[i], g.degree(st.position),
                [&](uint32_t j) {
                    return model.calculate_weight(g, st, {st.position, j});
                },
                rng, &accept);
            if (accept) ++accepted;
        }
        trials = steps;
        break;
    }
    case SamplerKind::alias: {
        std::vector<AliasTable> tables;
        tables.reserve(states.size());
        for (const auto& st : states) tables.push_back(alias_build(exact_target(g, model, st)));
        for (uint64_t s = 0; s < steps; ++s) {
            alias_sample(tables[s % tables.size()], rng);
        }
        break;
    }
    case SamplerKind::direct: {
        for (uint64_t s = 0; s < steps; ++s) {
            const auto& st = states[s % states.size()];
            const uint32_t deg = g.degree(st.position);
            std::vector<double> w(deg);
            for (uint32_t i = 0; i < deg; ++i) {
                w[i] = model.calculate_weight(g, st, {st.position, i});
            }
            direct_sample(w, rng);
        }
        break;
    }
    case SamplerKind::rejection: {
        std::vector<AliasTable> proposals;
        std::vector<std::vector<double>> targets;
        for (const auto& st : states) {
            proposals.push_back(alias_build(g.weights_of(st.position)));
            const uint32_t deg = g.degree(st.position);
            std::vector<double> w(deg);
            for (uint32_t i = 0; i < deg; ++i) {
                w[i] = model.calculate_weight(g, st, {st.position, i});
            }
            targets.push_back(std::move(w));
        }
        double bound = 1.0;
        for (size_t s = 0; s < states.size(); ++s) {
            auto ws = g.weights_of(states[s].position);
            for (size_t i = 0; i < targets[s].size(); ++i) {
                if (ws[i] > 0) bound = std::max(bound, targets[s][i] / ws[i]);
            }
        }
        for (uint64_t s = 0; s < steps; ++s) {
            const size_t i = s % states.size();
            auto res = rejection_sample(targets[i], g.weights_of(states[i].position),
                                        proposals[i], bound, rng);
            ++accepted;
            trials += res.trials;
        }
        break;
    }
    }
    const auto t1 = std::chrono::steady_clock::now();
    const double elapsed = std::chrono::duration<double>(t1 - t0).count();
    row.steps_per_sec = elapsed > 0 ? static_cast<double>(steps) / elapsed : 0.0;
    if (kind == SamplerKind::mh) {
        row.acceptance = static_cast<double>(accepted) / static_cast<double>(steps);
    } else if (kind == SamplerKind::rejection) {
        row.acceptance = trials > 0 ? static_cast<double>(accepted) / static_cast<double>(trials)
                                    : 0.0;
    }
    return row;
}

int cmd_bench(const GraphFlags& gf, const ModelFlags& mf,
              const std::vector<std::string>& samplers, uint64_t steps, uint64_t seed,
              const std::string& output) {
    Graph graph = load_graph(gf, mf);
    WalkModel model = make_model(mf, graph);
    Rng rng(seed);
    auto states = random_states(graph, model, 256, rng);
    if (states.empty()) throw ValidationError("no usable walker states in graph");

    std::ostringstream csv;
    csv << "sampler,steps_per_sec,acceptance_ratio,aux_memory_bytes\n";
    for (const auto& name : samplers) {
        BenchRow row = bench_sampler(sampler_kind_from_string(name), graph, model, states,
                                     steps, seed);
        csv << row.sampler << ',' << row.steps_per_sec << ',';
        if (row.acceptance >= 0) csv << row.acceptance;
        csv << ',' << row.aux_memory << '\n';
    }
    if (output.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(output);
        if (!out) throw IoError("cannot open for writing: " + output);
        out << csv.str();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random walk corpus generator with M-H edge sampling"};
    app.require_subcommand(1);

    // walk
    GraphFlags walk_gf;
    ModelFlags walk_mf;
    WalkConfig wc;
    wc.threads = default_threads();
    std::string walk_output, walk_sampler = "mh", walk_init = "random";
    auto* walk = app.add_subcommand("walk", "generate a random walk corpus");
    add_graph_flags(walk, walk_gf);
    add_model_flags(walk, walk_mf);
    walk->add_option("--walks-per-node", wc.walks_per_node);
    walk->add_option("--walk-length", wc.walk_length, "steps per walk");
    walk->add_option("--sampler", walk_sampler, "mh|alias|direct|rejection");
    walk->add_option("--init", walk_init, "random|high-weight|burn-in");
    walk->add_option("--burn-in-steps", wc.init.burn_in_steps);
    walk->add_option("--hw-sample-size", wc.init.hw_sample_size);
    walk->add_option("--threads", wc.threads);
    walk->add_option("--seed", wc.seed);
    walk->add_option("--output", walk_output)->required();

    // check
    GraphFlags check_gf;
    ModelFlags check_mf;
    uint32_t check_states = 100;
    uint64_t check_draws = 100000, check_seed = 0;
    double check_tolerance = 0.01;
    std::string check_output;
    auto* check = app.add_subcommand("check", "audit empirical sampler distributions");
    add_graph_flags(check, check_gf);
    add_model_flags(check, check_mf);
    check->add_option("--states", check_states, "random states to audit");
    check->add_option("--draws", check_draws, "draws per state");
    check->add_option("--tolerance", check_tolerance, "max acceptable KL");
    check->add_option("--seed", check_seed);
    check->add_option("--output", check_output, "CSV path (default stdout)");

    // simulate
    SimConfig sim;
    sim.distributions = 1000;
    sim.repeats = 20;
    sim.threads = default_threads();
    std::vector<double> sim_ratios;
    uint64_t sim_seed = 0;
    std::string sim_output;
    auto* simulate = app.add_subcommand("simulate", "initialization-strategy KL simulation");
    simulate->add_option("--n", sim.n, "support size");
    simulate->add_option("--t", sim.t, "number of maximal entries");
    simulate->add_option("--ratios", sim_ratios, "pi_max/pi_min grid")->expected(-1);
    simulate->add_option("--distributions", sim.distributions);
    simulate->add_option("--repeats", sim.repeats);
    simulate->add_option("--samples-per-run", sim.samples_per_run, "default 5n");
    simulate->add_option("--threads", sim.threads);
    simulate->add_option("--seed", sim_seed);
    simulate->add_option("--output", sim_output, "CSV path (default stdout)");

    // bench
    GraphFlags bench_gf;
    ModelFlags bench_mf;
    std::vector<std::string> bench_samplers{"mh", "alias", "direct", "rejection"};
    uint64_t bench_steps = 1000000, bench_seed = 0;
    std::string bench_output;
    auto* bench = app.add_subcommand("bench", "sampler throughput and acceptance ratios");
    add_graph_flags(bench, bench_gf);
    add_model_flags(bench, bench_mf);
    bench->add_option("--samplers", bench_samplers)->expected(-1);
    bench->add_option("--steps", bench_steps);
    bench->add_option("--seed", bench_seed);
    bench->add_option("--output", bench_output, "CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (walk->parsed()) {
            wc.sampler_kind = sampler_kind_from_string(walk_sampler);
            wc.init.kind = init_kind_from_string(walk_init);
            return cmd_walk(walk_gf, walk_mf, wc, walk_output, walk_init);
        }
        if (check->parsed()) {
            return cmd_check(check_gf, check_mf, check_states, check_draws, check_tolerance,
                             check_seed, check_output);
        }
        if (simulate->parsed()) {
            if (sim_ratios.empty()) {
                const double nt = static_cast<double>(sim.n) / sim.t;
                sim_ratios = {1.0, 2.0, nt / 2, nt, 2 * nt, 10 * nt};
                std::erase_if(sim_ratios, [](double r) { return r < 1.0; });
            }
            return cmd_simulate(sim, sim_ratios, sim_seed, sim_output);
        }
        if (bench->parsed()) {
            return cmd_bench(bench_gf, bench_mf, bench_samplers, bench_steps, bench_seed,
                             bench_output);
        }
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
