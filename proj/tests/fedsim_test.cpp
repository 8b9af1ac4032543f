#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fedcomp/fedsim.hpp"
#include "oracles.hpp"

namespace fedcomp {
namespace {

SyntheticConfig uniform_config(std::size_t n, std::size_t samples, double rho, std::uint64_t seed) {
    SyntheticConfig c;
    c.n = n;
    c.rho = rho;
    c.samples.assign(n, samples);
    c.flipped.assign(n, false);
    c.seed = seed;
    return c;
}

Instance with_benefit(const SyntheticConfig& data, const std::vector<CompetingEdge>& competing, const std::vector<double>& w) {
    return Instance(data.n, Instance::from_edges(data.n, competing, {}).competing(), w);
}

Partition one_group(std::size_t n) {
    NodeSet all(n);
    for (NodeId k = 0; k < n; ++k) all[k] = k;
    return Partition{{all}};
}

TEST(GenerateTest, WeakPreset) {
    const auto c = weak_noniid_config(3);
    EXPECT_EQ(c.n, 8u);
    EXPECT_DOUBLE_EQ(c.rho, 0.01);
    EXPECT_DOUBLE_EQ(c.noise_std, 0.1);
    EXPECT_EQ(c.samples, (std::vector<std::size_t>{2000, 2000, 100, 100, 2000, 2000, 100, 100}));
    EXPECT_TRUE(std::none_of(c.flipped.begin(), c.flipped.end(), [](bool b) { return b; }));
}

TEST(GenerateTest, StrongPreset) {
    const auto c = strong_noniid_config(3);
    EXPECT_EQ(c.samples, std::vector<std::size_t>(8, 2000));
    EXPECT_EQ(c.flipped, (std::vector<bool>{false, false, false, false, true, true, true, true}));
    EXPECT_DOUBLE_EQ(c.rho, 0.01);
}

TEST(GenerateTest, ZeroRhoSharesWeights) {
    const auto task = generate(uniform_config(5, 50, 0.0, 9));
    for (const auto& p : task.participants) EXPECT_EQ(p.true_weights, task.shared_weights);
    for (double v : task.shared_weights) {
        EXPECT_GE(v, 0.0);
        EXPECT_LT(v, 1.0);
    }
}

TEST(GenerateTest, LabelsFollowTheGenerator) {
    auto c = strong_noniid_config(4);
    c.noise_std = 0.0;
    const auto task = generate(c);
    for (const auto& p : task.participants) {
        const double sign = p.flipped ? -1.0 : 1.0;
        for (std::size_t s = 0; s < p.x.size(); ++s) {
            EXPECT_LE(std::abs(p.x[s]), 1.0);
            const double x = p.x[s];
            const double clean = p.true_weights[0] * x + p.true_weights[1] * x * x + p.true_weights[2] * x * x * x;
            ASSERT_NEAR(p.y[s], sign * clean, 1e-12);
        }
    }
}

TEST(GenerateTest, SplitIsEightyTwentyAndDisjoint) {
    const auto task = generate(weak_noniid_config(1));
    for (const auto& p : task.participants) {
        const std::size_t m = p.x.size();
        EXPECT_EQ(p.train.size(), m * 4 / 5);
        EXPECT_EQ(p.train.size() + p.validation.size(), m);
        std::vector<std::size_t> all = p.train;
        all.insert(all.end(), p.validation.begin(), p.validation.end());
        std::sort(all.begin(), all.end());
        for (std::size_t k = 0; k < m; ++k) ASSERT_EQ(all[k], k);
    }
}

TEST(GenerateTest, TinySampleCounts) {
    auto c = uniform_config(2, 1, 0.01, 2);
    c.samples = {1, 2};
    const auto task = generate(c);
    EXPECT_EQ(task.participants[0].train, task.participants[0].validation);
    EXPECT_EQ(task.participants[1].train.size(), 1u);
    EXPECT_EQ(task.participants[1].validation.size(), 1u);
}

TEST(GenerateTest, Deterministic) {
    const auto a = generate(weak_noniid_config(21));
    const auto b = generate(weak_noniid_config(21));
    const auto other = generate(weak_noniid_config(22));
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_EQ(a.participants[i].x, b.participants[i].x);
        EXPECT_EQ(a.participants[i].y, b.participants[i].y);
        EXPECT_EQ(a.participants[i].train, b.participants[i].train);
    }
    EXPECT_NE(a.participants[0].x, other.participants[0].x);
}

TEST(GenerateTest, RejectsInvalidConfig) {
    auto c = uniform_config(2, 10, 0.01, 1);
    c.rho = -1.0;
    EXPECT_THROW(generate(c), std::invalid_argument);
    c = uniform_config(2, 10, 0.01, 1);
    c.samples[1] = 0;
    EXPECT_THROW(generate(c), std::invalid_argument);
    c = uniform_config(2, 10, 0.01, 1);
    c.flipped.pop_back();
    EXPECT_THROW(generate(c), std::invalid_argument);
}

TEST(GradientTest, MatchesCentralDifferences) {
    const auto task = generate(uniform_config(1, 200, 0.01, 5));
    const auto& data = task.participants[0];
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        ModelParams m{{4.0 * testing::unit(rng) - 2.0, 4.0 * testing::unit(rng) - 2.0, 4.0 * testing::unit(rng) - 2.0}};
        const auto grad = mse_gradient(m, data, data.train);
        for (std::size_t k = 0; k < 3; ++k) {
            const double h = 1e-5;
            ModelParams up = m, down = m;
            up.coef[k] += h;
            down.coef[k] -= h;
            const double numeric =
                (mean_squared_error(up, data, data.train) - mean_squared_error(down, data, data.train)) / (2.0 * h);
            EXPECT_LE(std::abs(numeric - grad[k]), 1e-4 * std::max(1.0, std::abs(grad[k]))) << "coef " << k;
        }
    }
}

TEST(AggregationTest, WeightsAreNormalisedWithSelfAtMaxBenefit) {
    const auto inst = Instance::from_edges(4, {{0, 3}}, {{1, 0, 0.2}, {2, 0, 0.6}, {3, 1, 1.0}});
    UsageGraph g(4);
    g.add_edge_with_closure(1, 0);
    g.add_edge_with_closure(2, 0);
    const auto w = aggregation_weights(inst, g, 0);
    ASSERT_EQ(w.size(), 3u);
    EXPECT_EQ(w[0].first, 0u);
    EXPECT_NEAR(w[0].second, 0.6 / 1.4, 1e-15);
    EXPECT_NEAR(w[1].second, 0.2 / 1.4, 1e-15);
    EXPECT_NEAR(w[2].second, 0.6 / 1.4, 1e-15);

    const auto alone = aggregation_weights(inst, g, 3);
    ASSERT_EQ(alone.size(), 1u);
    EXPECT_EQ(alone[0].second, 1.0);
}

TEST(AggregationProperty, SumsToOneOnRandomUsage) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        std::mt19937_64 rng(seed);
        const std::size_t n = 1 + testing::uniform_index(rng, 10);
        const auto inst = testing::random_instance(rng, n, 0.2, 0.5);
        const auto g = select_all(inst).usage;
        for (NodeId i = 0; i < n; ++i) {
            double total = 0.0;
            for (const auto& [node, w] : aggregation_weights(inst, g, i)) {
                EXPECT_GE(w, 0.0);
                total += w;
            }
            EXPECT_NEAR(total, 1.0, 1e-12);
        }
    }
}

TEST(TrainTest, SingleParticipantAllMethodsAgree) {
    const auto task = generate(uniform_config(1, 300, 0.01, 8));
    const TrainConfig cfg;
    const auto inst = Instance::from_edges(1, {}, {});
    const auto local = train(task, Partition{}, Method::local, cfg, 8);
    const auto fedavg = train(task, one_group(1), Method::fedavg, cfg, 8);
    const auto ce = train(task, one_group(1), Method::ce, cfg, 8);
    const auto fc = train(task, UsageGrouping{inst, UsageGraph(1)}, Method::fedcompetitors, cfg, 8);
    EXPECT_NEAR(fedavg[0], local[0], 1e-9);
    EXPECT_NEAR(ce[0], local[0], 1e-9);
    EXPECT_NEAR(fc[0], local[0], 1e-9);
}

// Pooling helps in expectation; single runs are dominated by validation noise.
TEST(TrainTest, FedAvgOnIidDataIsNoWorseThanLocalOnAverage) {
    const TrainConfig cfg;
    double fedavg_total = 0.0, local_total = 0.0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto task = generate(uniform_config(4, 300, 0.0, seed));
        const auto local = train(task, Partition{}, Method::local, cfg, seed);
        const auto fedavg = train(task, one_group(4), Method::fedavg, cfg, seed);
        for (std::size_t i = 0; i < 4; ++i) {
            local_total += local[i];
            fedavg_total += fedavg[i];
        }
    }
    EXPECT_LE(fedavg_total, local_total);
}

TEST(TrainTest, MixingFlippedTasksIsFarWorseThanLocal) {
    const auto data = strong_noniid_config(1);
    const auto task = generate(data);
    const TrainConfig cfg;
    const auto local = train(task, Partition{}, Method::local, cfg, 1);
    const auto fedavg = train(task, Partition{{{0, 1, 4, 5}, {2, 3, 6, 7}}}, Method::fedavg, cfg, 1);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_GE(fedavg[i], 10.0 * local[i]) << "participant " << i;
}

TEST(TrainTest, CollaborationHelpsSmallParticipants) {
    const auto data = weak_noniid_config(1);
    const auto task = generate(data);
    const TrainConfig cfg;
    const auto inst = with_benefit(data, weak_noniid_competing(), estimate_benefit(task, cfg, 1));
    const auto usage = select_all(inst).usage;
    const auto local = train(task, Partition{}, Method::local, cfg, 1);
    const auto fc = train(task, UsageGrouping{inst, usage}, Method::fedcompetitors, cfg, 1);
    for (std::size_t i : {2u, 3u, 6u, 7u}) EXPECT_LE(fc[i], local[i]) << "participant " << i;
}

TEST(TrainTest, UsageGatingAblation) {
    const auto data = weak_noniid_config(2);
    const auto task = generate(data);
    const TrainConfig cfg;
    const auto inst = with_benefit(data, weak_noniid_competing(), estimate_benefit(task, cfg, 2));
    const auto usage = select_all(inst).usage;
    const UsageGrouping grouping{inst, usage};
    const auto reference = train_models(task, grouping, Method::fedcompetitors, cfg, 2);

    int checked = 0;
    for (NodeId k = 0; k < data.n; ++k) {
        SyntheticTask ablated = task;
        std::fill(ablated.participants[k].x.begin(), ablated.participants[k].x.end(), 0.0);
        std::fill(ablated.participants[k].y.begin(), ablated.participants[k].y.end(), 0.0);
        const auto models = train_models(ablated, grouping, Method::fedcompetitors, cfg, 2);
        for (NodeId i = 0; i < data.n; ++i) {
            if (usage.reaches(k, i)) continue;
            EXPECT_EQ(models[i], reference[i]) << "zeroing " << k << " changed " << i;
            ++checked;
        }
        EXPECT_NE(models[k], reference[k]);
    }
    EXPECT_GT(checked, 0);
}

TEST(TrainTest, DivergenceIsReported) {
    const auto task = generate(uniform_config(2, 200, 0.01, 3));
    TrainConfig cfg;
    cfg.learning_rate = 1e3;
    EXPECT_THROW(train(task, Partition{}, Method::local, cfg, 3), TrainingDivergence);
}

TEST(TrainTest, GroupingMismatch) {
    const auto task = generate(uniform_config(3, 50, 0.01, 3));
    const TrainConfig cfg;
    const auto inst = Instance::from_edges(3, {}, {});
    EXPECT_THROW(train(task, UsageGrouping{inst, UsageGraph(3)}, Method::fedavg, cfg, 3), std::invalid_argument);
    EXPECT_THROW(train(task, one_group(3), Method::fedcompetitors, cfg, 3), std::invalid_argument);
    EXPECT_THROW(train(task, Partition{{{0, 1}}}, Method::fedavg, cfg, 3), std::invalid_argument);
    EXPECT_THROW(train(task, Partition{{{0, 1}, {1, 2}}}, Method::ce, cfg, 3), std::invalid_argument);
    const auto wrong = Instance::from_edges(2, {}, {});
    EXPECT_THROW(train(task, UsageGrouping{wrong, UsageGraph(2)}, Method::fedcompetitors, cfg, 3), std::invalid_argument);
}

TEST(BenefitTest, IdenticalDistributionsAreSymmetric) {
    const auto task = generate(uniform_config(2, 2000, 0.0, 6));
    const auto w = estimate_benefit(task, TrainConfig{}, 6);
    EXPECT_EQ(w[0], 0.0);
    EXPECT_EQ(w[3], 0.0);
    EXPECT_GE(w[1], 0.0);
    EXPECT_GE(w[2], 0.0);
    EXPECT_NEAR(w[1], w[2], 1e-2);
}

TEST(BenefitTest, FlippedTasksGiveNoBenefit) {
    const auto task = generate(strong_noniid_config(1));
    const auto w = estimate_benefit(task, TrainConfig{}, 1);
    for (NodeId j = 0; j < 8; ++j)
        for (NodeId i = 0; i < 8; ++i)
            if ((j < 4) != (i < 4)) EXPECT_EQ(w[j * 8 + i], 0.0) << j << "->" << i;
}

TEST(BenefitTest, QuantitySkew) {
    const auto task = generate(weak_noniid_config(1));
    const auto w = estimate_benefit(task, TrainConfig{}, 1);
    for (NodeId small : {2u, 3u, 6u, 7u})
        for (NodeId large : {0u, 1u, 4u, 5u}) {
            EXPECT_LT(w[small * 8 + large], 1e-3) << small << "->" << large;
            EXPECT_GT(w[large * 8 + small], 0.0) << large << "->" << small;
        }
}

TEST(ExperimentTest, DeterministicReports) {
    ExperimentSpec spec;
    spec.data = weak_noniid_config(1);
    spec.competing = weak_noniid_competing();
    spec.repetitions = 2;
    spec.seed = 40;
    const auto a = run_experiment(spec);
    const auto b = run_experiment(spec);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.stddev, b.stddev);
    ASSERT_EQ(a.repetitions.size(), 2u);
    EXPECT_EQ(a.repetitions[0].seed, 40u);
    EXPECT_EQ(a.repetitions[1].seed, 41u);
    for (std::size_t r = 0; r < 2; ++r) {
        EXPECT_EQ(a.repetitions[r].mse, b.repetitions[r].mse);
        EXPECT_EQ(a.repetitions[r].usage, b.repetitions[r].usage);
    }
    ASSERT_EQ(a.mean.size(), 4u);
    for (const auto& row : a.stddev)
        for (double s : row) EXPECT_GE(s, 0.0);
}

TEST(ExperimentTest, SuppliedBenefitBypassesEstimation) {
    ExperimentSpec spec;
    spec.data = uniform_config(3, 100, 0.01, 1);
    spec.competing = {{0, 2}};
    spec.benefit = std::vector<BenefitEdge>{{1, 0, 0.5}, {2, 1, 0.5}};
    spec.repetitions = 1;
    const auto report = run_experiment(spec);
    const auto& rec = report.repetitions[0];
    EXPECT_EQ(rec.instance.benefit(1, 0), 0.5);
    EXPECT_TRUE(assumption_holds(rec.instance, rec.usage));
    EXPECT_EQ(rec.usage.edges().size(), 1u);
}

TEST(MethodTest, NamesRoundTrip) {
    for (Method m : {Method::local, Method::fedavg, Method::ce, Method::fedcompetitors})
        EXPECT_EQ(parse_method(to_string(m)), m);
    EXPECT_FALSE(parse_method("fedprox").has_value());
}

}  // namespace
}  // namespace fedcomp
