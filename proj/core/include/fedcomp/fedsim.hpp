#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fedcomp/graph.hpp"
#include "fedcomp/partition.hpp"
#include "fedcomp/selector.hpp"

namespace fedcomp {

/// Raised when a training run produces non-finite parameters or loss.
class TrainingDivergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Synthetic polynomial regression tasks, one per participant.
///
/// Participant i labels features x ~ U[-1, 1] with
///   y = s_i * sum_l u_{i,l} x^l + eps,   eps ~ N(0, noise_std^2)
/// where u_{i,l} = v_l + r_{i,l}, v_l ~ U[0, 1] is drawn once and shared, and
/// r_{i,l} ~ N(0, rho^2). s_i = -1 for participants with `flipped` set.
struct SyntheticConfig {
    std::size_t n = 0;
    double rho = 0.01;
    std::size_t degree = 3;
    double noise_std = 0.1;
    std::vector<std::size_t> samples;
    std::vector<bool> flipped;
    std::uint64_t seed = 0;
    double train_fraction = 0.8;

    /// Throws std::invalid_argument on inconsistent fields.
    void validate() const;
};

struct ParticipantData {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<std::size_t> train;       // indices into x/y
    std::vector<std::size_t> validation;  // indices into x/y
    std::vector<double> true_weights;     // u_{i,1..degree}
    bool flipped = false;
};

struct SyntheticTask {
    SyntheticConfig config;
    std::vector<double> shared_weights;  // v_{1..degree}
    std::vector<ParticipantData> participants;
};

SyntheticTask generate(const SyntheticConfig& config);

/// Eight participants, rho = 0.01, quantity skew (2000 vs 100 samples).
SyntheticConfig weak_noniid_config(std::uint64_t seed);
/// Eight participants with 2000 samples each; labels of v5..v8 flipped.
SyntheticConfig strong_noniid_config(std::uint64_t seed);
std::vector<CompetingEdge> weak_noniid_competing();
std::vector<CompetingEdge> strong_noniid_competing();

/// Regression head over the feature map (x, x^2, ..., x^d).
struct ModelParams {
    std::vector<double> coef;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

double predict(const ModelParams& model, double x);

/// Mean squared error of `model` on the samples selected by `indices`.
double mean_squared_error(const ModelParams& model, const ParticipantData& data, const std::vector<std::size_t>& indices);

/// Analytic gradient of mean_squared_error with respect to model.coef.
std::vector<double> mse_gradient(const ModelParams& model, const ParticipantData& data, const std::vector<std::size_t>& indices);

/// Mini-batch SGD schedule. One local epoch is one shuffled pass over a
/// participant's training split, so participants with more data take more
/// steps per epoch.
struct TrainConfig {
    std::size_t rounds = 20;
    std::size_t local_epochs = 1;
    std::size_t batch_size = 64;
    double learning_rate = 0.03;
    std::size_t feature_degree = 3;

    void validate() const;
};

enum class Method { local, fedavg, ce, fedcompetitors };

const char* to_string(Method m) noexcept;
std::optional<Method> parse_method(const std::string& name);

/// Usage graph plus the benefit weights that drive personalised aggregation.
struct UsageGrouping {
    Instance instance;
    UsageGraph usage;
};

using Grouping = std::variant<Partition, UsageGrouping>;

/// Personalised aggregation weights of participant i, self first, then
/// collaborators in ascending order. The self weight equals the largest
/// collaborator benefit (1 with no collaborators); weights sum to one.
std::vector<std::pair<NodeId, double>> aggregation_weights(const Instance& instance, const UsageGraph& usage, NodeId i);

/// Trains every participant for `config.rounds` rounds and returns the final
/// (post-aggregation) models. Local ignores the grouping; FedAvg and CE
/// average within partition groups weighted by training-sample count;
/// FedCompetitors mixes each model with its usage-graph collaborators.
/// Throws std::invalid_argument on a grouping/method mismatch and
/// TrainingDivergence on non-finite parameters.
std::vector<ModelParams> train_models(const SyntheticTask& task, const Grouping& grouping, Method method,
                                      const TrainConfig& config, std::uint64_t seed);

/// Validation MSE per participant of train_models' output.
std::vector<double> train(const SyntheticTask& task, const Grouping& grouping, Method method, const TrainConfig& config,
                          std::uint64_t seed);

/// Cross-training gain: w(j, i) = max(0, MSE_i(local_i) - MSE_i(local_j)) on
/// i's validation split, using the same local training as Method::local.
/// Row-major n*n with a zero diagonal.
std::vector<double> estimate_benefit(const SyntheticTask& task, const TrainConfig& config, std::uint64_t seed);

struct ExperimentSpec {
    SyntheticConfig data;
    std::vector<CompetingEdge> competing;
    std::optional<std::vector<BenefitEdge>> benefit;  // bypasses estimation when set
    TrainConfig train;
    std::vector<Method> methods{Method::local, Method::fedavg, Method::ce, Method::fedcompetitors};
    std::size_t repetitions = 10;
    std::uint64_t seed = 1;  // repetition r uses seed + r
};

struct RepetitionRecord {
    std::uint64_t seed;
    Instance instance;
    UsageGraph usage;
    Partition cover;
    Partition coalitions;
    std::vector<std::vector<double>> mse;  // [method][participant]
};

struct ExperimentReport {
    ExperimentSpec spec;
    std::vector<std::vector<double>> mean;    // [method][participant]
    std::vector<std::vector<double>> stddev;  // sample std over repetitions
    std::vector<RepetitionRecord> repetitions;
};

/// Generates, estimates (or loads) the benefit graph, selects collaborators,
/// builds the baseline partitions and trains every requested method, once per
/// repetition.
ExperimentReport run_experiment(const ExperimentSpec& spec);

/// Independent generator for one (seed, stream, index) triple.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace fedcomp
