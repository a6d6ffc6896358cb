#pragma once

#include "mhwalk/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mhwalk {

// Explicit finite discrete distribution (support entries are all positive).
struct TargetDistribution {
    std::vector<double> probs;
    double pi_max = 0.0;
    double pi_min = 0.0;
    uint32_t t = 0; // entries equal to pi_max (within 1e-12)

    uint32_t n() const { return static_cast<uint32_t>(probs.size()); }

    static TargetDistribution from_weights(std::span<const double> weights);
};

// Sum p_i * log(p_i / q_i), natural log, 0 log 0 := 0. Throws if q is zero
// where p is positive.
double kl_divergence(std::span<const double> p, std::span<const double> q);

// a = 1 / (deg * pi_max) for the uniform proposal; equals 1 iff uniform target.
double mh_coefficient_a(const TargetDistribution& dist, uint32_t deg);

// kappa * rho^i * (1 + kappa * rho^i) with rho = 1 - a.
double kl_upper_bound(double kappa, double a, uint64_t i);

enum class InitKind { random_init, high_weight_init };

// Closed forms: kappa_h = max{1/(t*pi_max) - 1, 1},
//               kappa_r = max{1 - 1/(n*pi_max), 1/(n*pi_min) - 1}.
double kappa_for(InitKind init, const TargetDistribution& dist);

// Generic definition ||pi0/pi - 1||_inf for an arbitrary initial distribution.
double kappa_generic(std::span<const double> pi0, const TargetDistribution& dist);

// True iff high-weight initialization converges faster:
// (pi_max < 1/(2t) and pi_max/pi_min > n/t) or (pi_max >= 1/(2t) and pi_min < 1/(2n)).
bool high_weight_better(const TargetDistribution& dist);

struct SimConfig {
    uint32_t n = 1000;
    uint32_t t = 200;
    double ratio = 5.0;        // pi_max / pi_min
    uint32_t distributions = 1000;
    uint32_t repeats = 20;
    uint64_t samples_per_run = 0; // 0 -> 5n
    uint32_t threads = 1;
};

// Two-level unnormalized weights: t entries at `ratio`, the remaining n-t at 1.
// Exactly t maximal entries and pi_max/pi_min = ratio by construction.
TargetDistribution generate_target(const SimConfig& config, Rng& rng);

struct SimResult {
    double kl_random = 0.0;
    double kl_high = 0.0;
    double ratio = 0.0; // kl_random / kl_high
};

// Per target and strategy: pool samples_per_run M-H draws (uniform proposal
// over the support) from freshly initialized sampler instances taking
// samples_per_run/n draws each, and take KL(empirical, target); repeated
// `repeats` times per distribution, grand-averaged per strategy.
SimResult run_init_simulation(const SimConfig& config, uint64_t seed);

} // namespace mhwalk
