#include <doctest.h>

#include "mhwalk/analysis.hpp"
#include "mhwalk/errors.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace mhwalk;

TEST_CASE("kl divergence basics") {
    std::vector<double> u{0.25, 0.25, 0.25, 0.25};
    CHECK(kl_divergence(u, u) == 0.0);

    std::vector<double> p{1.0, 0.0};
    std::vector<double> q{0.5, 0.5};
    CHECK(kl_divergence(p, q) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(kl_divergence(q, p), ValidationError); // q zero where p positive
}

TEST_CASE("kl divergence is non-negative and zero iff equal") {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const uint32_t n = 2 + rng.uniform_index(20);
        auto p = oracles::normalize(oracles::random_weights(n, rng));
        auto q = oracles::normalize(oracles::random_weights(n, rng));
        CHECK(kl_divergence(p, q) >= 0.0);
        CHECK(kl_divergence(p, p) < 1e-12);
    }
}

TEST_CASE("mh coefficient a") {
    auto uniform = TargetDistribution::from_weights(std::vector<double>{1, 1, 1, 1});
    CHECK(mh_coefficient_a(uniform, 4) == doctest::Approx(1.0));

    auto skew = TargetDistribution::from_weights(std::vector<double>{0.5, 0.25, 0.25});
    CHECK(mh_coefficient_a(skew, 3) == doctest::Approx(2.0 / 3.0));

    Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        const uint32_t n = 2 + rng.uniform_index(30);
        auto d = TargetDistribution::from_weights(oracles::random_weights(n, rng));
        const double a = mh_coefficient_a(d, n);
        CHECK(a > 0.0);
        CHECK(a <= 1.0);
        if (d.t < n) CHECK(a < 1.0);
    }
}

TEST_CASE("kl upper bound closed form") {
    CHECK(kl_upper_bound(5.0, 1.0, 1) == 0.0);
    CHECK(kl_upper_bound(5.0, 1.0, 100) == 0.0);
    CHECK(kl_upper_bound(1.0, 0.5, 2) == doctest::Approx(0.25 * 1.25));
    // monotone non-increasing in i
    double prev = kl_upper_bound(2.0, 0.3, 0);
    for (uint64_t i = 1; i < 50; ++i) {
        const double cur = kl_upper_bound(2.0, 0.3, i);
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("kappa closed forms") {
    auto uniform = TargetDistribution::from_weights(std::vector<double>{1, 1, 1, 1});
    CHECK(kappa_for(InitKind::random_init, uniform) == doctest::Approx(0.0));

    auto d = TargetDistribution::from_weights(std::vector<double>{0.4, 0.4, 0.1, 0.1});
    CHECK(d.t == 2);
    CHECK(kappa_for(InitKind::high_weight_init, d) == doctest::Approx(1.0));
    CHECK(kappa_for(InitKind::random_init, d) == doctest::Approx(1.5));
}

TEST_CASE("kappa closed forms agree with the generic supremum definition") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        SimConfig config;
        config.n = 3 + rng.uniform_index(60);
        config.t = 1 + rng.uniform_index(config.n - 2);
        config.ratio = 1.5 + 50 * rng.uniform_real();
        auto d = generate_target(config, rng);

        std::vector<double> pi0_random(d.n(), 1.0 / d.n());
        std::vector<double> pi0_high(d.n(), 0.0);
        for (uint32_t j = 0; j < d.n(); ++j) {
            if (d.probs[j] >= d.pi_max - 1e-12) pi0_high[j] = 1.0 / d.t;
        }
        CHECK(std::abs(kappa_for(InitKind::random_init, d) - kappa_generic(pi0_random, d)) <
              1e-10);
        CHECK(std::abs(kappa_for(InitKind::high_weight_init, d) - kappa_generic(pi0_high, d)) <
              1e-10);
    }
}

TEST_CASE("high-weight condition") {
    auto uniform = TargetDistribution::from_weights(std::vector<double>{1, 1, 1});
    CHECK_FALSE(high_weight_better(uniform));

    // n=1000, t=200, ratio just above n/t with pi_max < 1/(2t)
    auto build = [](double top) {
        std::vector<double> w(1000, 2.0);
        for (int i = 0; i < 200; ++i) w[i] = top;
        w[200] = 1.0;
        return TargetDistribution::from_weights(w);
    };
    auto d = build(5.5);
    CHECK(d.pi_max < 1.0 / 400);
    CHECK(d.pi_max / d.pi_min == doctest::Approx(5.5));
    CHECK(high_weight_better(d));

    // and just below the threshold it flips
    CHECK_FALSE(high_weight_better(build(4.5)));
}

TEST_CASE("condition is equivalent to kappa_h < kappa_r") {
    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
        SimConfig config;
        config.n = 3 + rng.uniform_index(100);
        config.t = 1 + rng.uniform_index(config.n - 2);
        config.ratio = 1.0 + 80 * rng.uniform_real();
        auto d = generate_target(config, rng);
        const bool faster = kappa_for(InitKind::high_weight_init, d) <
                            kappa_for(InitKind::random_init, d);
        CHECK(high_weight_better(d) == faster);
    }
}

TEST_CASE("generate_target construction") {
    SimConfig config{.n = 3, .t = 1, .ratio = 2.0};
    Rng rng(6);
    auto d = generate_target(config, rng);
    CHECK(d.n() == 3);
    CHECK(d.t == 1);
    CHECK(d.pi_max / d.pi_min == doctest::Approx(2.0).epsilon(1e-12));

    SimConfig bad{.n = 10, .t = 10};
    CHECK_THROWS_AS(generate_target(bad, rng), ValidationError);
}

TEST_CASE("generated targets satisfy the distribution invariants") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        SimConfig config;
        config.n = 2 + rng.uniform_index(50);
        config.t = 1 + rng.uniform_index(config.n - 1);
        if (config.n < config.t + 1) continue;
        config.ratio = 1.0 + 20 * rng.uniform_real();
        auto d = generate_target(config, rng);
        double total = 0;
        for (double p : d.probs) {
            CHECK(p > 0);
            total += p;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.pi_max >= 1.0 / d.n()); // pi_max >= 1/n always
        CHECK(d.t == config.t);
        CHECK(d.pi_max / d.pi_min == doctest::Approx(config.ratio).epsilon(1e-9));
    }
}

TEST_CASE("exact chain distributions respect the convergence bound") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const uint32_t n = 4 + rng.uniform_index(13);
        SimConfig config{.n = n, .t = 1 + rng.uniform_index(n - 2),
                         .ratio = 1.5 + 10 * rng.uniform_real()};
        auto d = generate_target(config, rng);
        auto kernel = oracles::mh_kernel(d.probs);
        const double a = mh_coefficient_a(d, n);

        for (auto init : {InitKind::random_init, InitKind::high_weight_init}) {
            std::vector<double> dist(n, 0.0);
            if (init == InitKind::random_init) {
                dist.assign(n, 1.0 / n);
            } else {
                for (uint32_t j = 0; j < n; ++j) {
                    if (d.probs[j] >= d.pi_max - 1e-12) dist[j] = 1.0 / d.t;
                }
            }
            const double kappa = kappa_for(init, d);
            for (uint64_t i = 1; i <= 100; ++i) {
                dist = oracles::apply_kernel(dist, kernel);
                CHECK(kl_divergence(dist, d.probs) <= kl_upper_bound(kappa, a, i) + 1e-12);
            }
        }
    }
}

TEST_CASE("simulation with uniform targets gives a KL ratio near one") {
    SimConfig config{.n = 50, .t = 49, .ratio = 1.0, .distributions = 50, .repeats = 5};
    auto res = run_init_simulation(config, 42);
    CHECK(res.ratio == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("simulation is deterministic for a fixed seed") {
    SimConfig config{.n = 40, .t = 8, .ratio = 10.0, .distributions = 10, .repeats = 3};
    auto a = run_init_simulation(config, 7);
    auto b = run_init_simulation(config, 7);
    CHECK(a.kl_random == b.kl_random);
    CHECK(a.kl_high == b.kl_high);

    config.threads = 4; // aggregation is order-independent
    auto c = run_init_simulation(config, 7);
    CHECK(c.kl_random == doctest::Approx(a.kl_random).epsilon(1e-12));
}
