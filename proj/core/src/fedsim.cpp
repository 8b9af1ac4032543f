#include "fedcomp/fedsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fedcomp {

namespace {

enum Stream : std::uint64_t { kSharedWeights = 1, kParticipantData = 2, kTraining = 3 };

double power(double x, std::size_t e) {
    double r = 1.0;
    for (std::size_t k = 0; k < e; ++k) r *= x;
    return r;
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

void SyntheticConfig::validate() const {
    require(n > 0, "synthetic config: n must be positive");
    require(std::isfinite(rho) && rho >= 0.0, "synthetic config: rho must be finite and non-negative");
    require(std::isfinite(noise_std) && noise_std >= 0.0, "synthetic config: noise_std must be finite and non-negative");
    require(degree > 0, "synthetic config: degree must be positive");
    require(samples.size() == n, "synthetic config: samples must have n entries");
    require(flipped.size() == n, "synthetic config: flipped must have n entries");
    require(std::all_of(samples.begin(), samples.end(), [](std::size_t m) { return m >= 1; }),
            "synthetic config: every participant needs at least one sample");
    require(train_fraction > 0.0 && train_fraction <= 1.0, "synthetic config: train_fraction must be in (0, 1]");
}

void TrainConfig::validate() const {
    require(rounds > 0, "train config: rounds must be positive");
    require(local_epochs > 0, "train config: local_epochs must be positive");
    require(batch_size > 0, "train config: batch_size must be positive");
    require(feature_degree > 0, "train config: feature_degree must be positive");
    require(std::isfinite(learning_rate) && learning_rate > 0.0, "train config: learning_rate must be positive");
}

SyntheticTask generate(const SyntheticConfig& config) {
    config.validate();
    SyntheticTask task;
    task.config = config;

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> feature(-1.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto shared = make_stream(config.seed, kSharedWeights, 0);
    for (std::size_t l = 0; l < config.degree; ++l) task.shared_weights.push_back(unit(shared));

    task.participants.resize(config.n);
    for (std::size_t i = 0; i < config.n; ++i) {
        auto rng = make_stream(config.seed, kParticipantData, i);
        ParticipantData& p = task.participants[i];
        p.flipped = config.flipped[i];
        for (std::size_t l = 0; l < config.degree; ++l) p.true_weights.push_back(task.shared_weights[l] + config.rho * gauss(rng));

        const double sign = p.flipped ? -1.0 : 1.0;
        const std::size_t m = config.samples[i];
        p.x.resize(m);
        p.y.resize(m);
        for (std::size_t s = 0; s < m; ++s) {
            const double x = feature(rng);
            double clean = 0.0;
            for (std::size_t l = 0; l < config.degree; ++l) clean += p.true_weights[l] * power(x, l + 1);
            p.x[s] = x;
            p.y[s] = sign * clean + config.noise_std * gauss(rng);
        }

        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        if (m == 1) {
            // A lone sample serves as both splits.
            p.train = order;
            p.validation = order;
        } else {
            auto n_train = static_cast<std::size_t>(std::llround(config.train_fraction * static_cast<double>(m)));
            n_train = std::clamp<std::size_t>(n_train, 1, m - 1);
            p.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
            p.validation.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
        }
    }
    return task;
}

SyntheticConfig weak_noniid_config(std::uint64_t seed) {
    SyntheticConfig c;
    c.n = 8;
    c.rho = 0.01;
    c.samples = {2000, 2000, 100, 100, 2000, 2000, 100, 100};
    c.flipped.assign(8, false);
    c.seed = seed;
    return c;
}

SyntheticConfig strong_noniid_config(std::uint64_t seed) {
    SyntheticConfig c;
    c.n = 8;
    c.rho = 0.01;
    c.samples.assign(8, 2000);
    c.flipped = {false, false, false, false, true, true, true, true};
    c.seed = seed;
    return c;
}

std::vector<CompetingEdge> weak_noniid_competing() {
    // Large {v1, v2} against large {v5, v6}; each small participant against one large one.
    return {{0, 4}, {0, 5}, {1, 4}, {1, 5}, {0, 6}, {1, 7}, {2, 4}, {3, 5}};
}

std::vector<CompetingEdge> strong_noniid_competing() {
    // Within {v1..v4} and within {v5..v8}: the first pair competes with the second pair.
    return {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {4, 6}, {4, 7}, {5, 6}, {5, 7}};
}

double predict(const ModelParams& model, double x) {
    double out = 0.0;
    double feature = x;
    for (double c : model.coef) {
        out += c * feature;
        feature *= x;
    }
    return out;
}

double mean_squared_error(const ModelParams& model, const ParticipantData& data, const std::vector<std::size_t>& indices) {
    if (indices.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t s : indices) {
        const double r = predict(model, data.x[s]) - data.y[s];
        total += r * r;
    }
    return total / static_cast<double>(indices.size());
}

std::vector<double> mse_gradient(const ModelParams& model, const ParticipantData& data, const std::vector<std::size_t>& indices) {
    std::vector<double> grad(model.coef.size(), 0.0);
    if (indices.empty()) return grad;
    for (std::size_t s : indices) {
        const double r = predict(model, data.x[s]) - data.y[s];
        double feature = data.x[s];
        for (double& g : grad) {
            g += 2.0 * r * feature;
            feature *= data.x[s];
        }
    }
    for (double& g : grad) g /= static_cast<double>(indices.size());
    return grad;
}

const char* to_string(Method m) noexcept {
    switch (m) {
    case Method::local: return "local";
    case Method::fedavg: return "fedavg";
    case Method::ce: return "ce";
    case Method::fedcompetitors: return "fedcompetitors";
    }
    return "?";
}

std::optional<Method> parse_method(const std::string& name) {
    for (Method m : {Method::local, Method::fedavg, Method::ce, Method::fedcompetitors})
        if (name == to_string(m)) return m;
    return std::nullopt;
}

std::vector<std::pair<NodeId, double>> aggregation_weights(const Instance& instance, const UsageGraph& usage, NodeId i) {
    std::vector<std::pair<NodeId, double>> out{{i, 0.0}};
    double self = 0.0;
    for (NodeId j = 0; j < instance.size(); ++j) {
        if (j == i || !usage.uses(j, i)) continue;
        const double w = instance.benefit(j, i);
        out.emplace_back(j, w);
        self = std::max(self, w);
    }
    if (out.size() == 1) self = 1.0;
    out[0].second = self;

    double total = 0.0;
    for (const auto& [node, w] : out) total += w;
    for (auto& [node, w] : out) w /= total;
    return out;
}

namespace {

using MixTable = std::vector<std::vector<std::pair<NodeId, double>>>;

MixTable group_mixing(const SyntheticTask& task, const Partition& partition) {
    const std::size_t n = task.participants.size();
    MixTable mix(n);
    std::vector<bool> seen(n, false);
    for (const auto& group : partition.groups) {
        double total = 0.0;
        for (NodeId v : group) {
            if (v >= n || seen[v]) throw std::invalid_argument("grouping is not a partition of the task's participants");
            seen[v] = true;
            total += static_cast<double>(task.participants[v].train.size());
        }
        for (NodeId v : group)
            for (NodeId u : group) mix[v].emplace_back(u, static_cast<double>(task.participants[u].train.size()) / total);
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
        throw std::invalid_argument("grouping does not cover every participant");
    return mix;
}

MixTable usage_mixing(const SyntheticTask& task, const UsageGrouping& grouping) {
    const std::size_t n = task.participants.size();
    if (grouping.instance.size() != n || grouping.usage.size() != n)
        throw std::invalid_argument("usage grouping size does not match the task");
    MixTable mix(n);
    for (NodeId i = 0; i < n; ++i) mix[i] = aggregation_weights(grouping.instance, grouping.usage, i);
    return mix;
}

void check_normalised(const MixTable& mix) {
    for (const auto& row : mix) {
        double total = 0.0;
        for (const auto& [node, w] : row) total += w;
        if (std::abs(total - 1.0) > 1e-12) throw std::logic_error("aggregation weights do not sum to one");
    }
}

void sgd_epoch(ModelParams& model, const ParticipantData& data, const TrainConfig& config, std::mt19937_64& rng,
               std::vector<std::size_t>& order) {
    order = data.train;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> batch;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
        const std::size_t stop = std::min(order.size(), start + config.batch_size);
        batch.assign(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(stop));
        const auto grad = mse_gradient(model, data, batch);
        for (std::size_t k = 0; k < grad.size(); ++k) model.coef[k] -= config.learning_rate * grad[k];
    }
}

}  // namespace

std::vector<ModelParams> train_models(const SyntheticTask& task, const Grouping& grouping, Method method,
                                      const TrainConfig& config, std::uint64_t seed) {
    config.validate();
    const std::size_t n = task.participants.size();

    std::optional<MixTable> mix;
    switch (method) {
    case Method::local: break;
    case Method::fedavg:
    case Method::ce:
        if (!std::holds_alternative<Partition>(grouping))
            throw std::invalid_argument(std::string(to_string(method)) + " needs a partition grouping");
        mix = group_mixing(task, std::get<Partition>(grouping));
        break;
    case Method::fedcompetitors:
        if (!std::holds_alternative<UsageGrouping>(grouping))
            throw std::invalid_argument("fedcompetitors needs a usage-graph grouping");
        mix = usage_mixing(task, std::get<UsageGrouping>(grouping));
        break;
    }

    std::vector<ModelParams> models(n, ModelParams{std::vector<double>(config.feature_degree, 0.0)});
    std::vector<std::mt19937_64> rngs;
    rngs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) rngs.push_back(make_stream(seed, kTraining, i));

    std::vector<std::size_t> scratch;
    for (std::size_t round = 0; round < config.rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t e = 0; e < config.local_epochs; ++e) sgd_epoch(models[i], task.participants[i], config, rngs[i], scratch);

        if (mix) {
            check_normalised(*mix);
            std::vector<ModelParams> next(n, ModelParams{std::vector<double>(config.feature_degree, 0.0)});
            for (std::size_t i = 0; i < n; ++i)
                for (const auto& [j, w] : (*mix)[i])
                    for (std::size_t k = 0; k < config.feature_degree; ++k) next[i].coef[k] += w * models[j].coef[k];
            models = std::move(next);
        }

        for (std::size_t i = 0; i < n; ++i)
            if (!std::all_of(models[i].coef.begin(), models[i].coef.end(), [](double c) { return std::isfinite(c); }))
                throw TrainingDivergence(std::string(to_string(method)) + ": participant " + std::to_string(i) +
                                         " diverged in round " + std::to_string(round) + " (learning rate " +
                                         std::to_string(config.learning_rate) + ")");
    }
    return models;
}

std::vector<double> train(const SyntheticTask& task, const Grouping& grouping, Method method, const TrainConfig& config,
                          std::uint64_t seed) {
    const auto models = train_models(task, grouping, method, config, seed);
    std::vector<double> out;
    out.reserve(models.size());
    for (std::size_t i = 0; i < models.size(); ++i) {
        const double e = mean_squared_error(models[i], task.participants[i], task.participants[i].validation);
        if (!std::isfinite(e)) throw TrainingDivergence("validation loss of participant " + std::to_string(i) + " is not finite");
        out.push_back(e);
    }
    return out;
}

std::vector<double> estimate_benefit(const SyntheticTask& task, const TrainConfig& config, std::uint64_t seed) {
    const std::size_t n = task.participants.size();
    const auto local = train_models(task, Partition{}, Method::local, config, seed);
    std::vector<double> w(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& target = task.participants[i];
        const double baseline = mean_squared_error(local[i], target, target.validation);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double cross = mean_squared_error(local[j], target, target.validation);
            if (!std::isfinite(baseline) || !std::isfinite(cross))
                throw TrainingDivergence("benefit estimation produced a non-finite loss for pair (" + std::to_string(j) + ", " +
                                         std::to_string(i) + ")");
            w[j * n + i] = std::max(0.0, baseline - cross);
        }
    }
    return w;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    spec.data.validate();
    spec.train.validate();
    if (spec.repetitions == 0) throw std::invalid_argument("experiment needs at least one repetition");
    const std::size_t n = spec.data.n;

    ExperimentReport report;
    report.spec = spec;
    const std::size_t methods = spec.methods.size();

    for (std::size_t r = 0; r < spec.repetitions; ++r) {
        const std::uint64_t seed = spec.seed + r;
        SyntheticConfig data = spec.data;
        data.seed = seed;
        const SyntheticTask task = generate(data);

        BitMatrix competing(n);
        for (const auto& e : spec.competing) {
            if (e.a >= n || e.b >= n || e.a == e.b) throw InvalidInstance("competing edge out of range");
            competing.set(e.a, e.b);
            competing.set(e.b, e.a);
        }
        std::vector<double> benefit;
        if (spec.benefit) {
            benefit = Instance::from_edges(n, {}, *spec.benefit).benefit_matrix();
        } else {
            benefit = estimate_benefit(task, spec.train, seed);
        }
        Instance instance(n, std::move(competing), std::move(benefit));

        SelectionResult selection = select_all(instance);
        Partition cover = min_clique_cover(instance);
        Partition coalitions = scc_coalitions(instance, cover);

        RepetitionRecord rec{seed, instance, selection.usage, cover, coalitions, {}};
        for (Method m : spec.methods) {
            Grouping g = cover;
            if (m == Method::ce) g = coalitions;
            if (m == Method::fedcompetitors) g = UsageGrouping{instance, selection.usage};
            rec.mse.push_back(train(task, g, m, spec.train, seed));
        }
        report.repetitions.push_back(std::move(rec));
    }

    const auto reps = static_cast<double>(spec.repetitions);
    report.mean.assign(methods, std::vector<double>(n, 0.0));
    report.stddev.assign(methods, std::vector<double>(n, 0.0));
    for (std::size_t m = 0; m < methods; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (const auto& rec : report.repetitions) sum += rec.mse[m][i];
            const double mean = sum / reps;
            double sq = 0.0;
            for (const auto& rec : report.repetitions) sq += (rec.mse[m][i] - mean) * (rec.mse[m][i] - mean);
            report.mean[m][i] = mean;
            report.stddev[m][i] = spec.repetitions > 1 ? std::sqrt(sq / (reps - 1.0)) : 0.0;
        }
    }
    return report;
}

}  // namespace fedcomp
