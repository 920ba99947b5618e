#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "icosim/gradients.hpp"

namespace icosim {

enum class InitScheme { uniform_pi }; // theta_i ~ U[-pi, pi)

struct TrainConfig {
    Pipeline pipeline = Pipeline::ico;
    int n_layers = 15;
    int n_qubits = 3;
    int epochs = 200;
    double learning_rate = 0.01;
    int batch_size = 32;
    int n_trials = 5;
    LossKind loss_kind = LossKind::mse;
    std::uint64_t seed = 7;
    InitScheme init_scheme = InitScheme::uniform_pi;
    OrderInit order_init = OrderInit::plus; // diagnostics hook, see OrderInit

    ModelSpec model() const { return {AnsatzSpec{n_qubits, n_layers}}; }
    void validate(int k_train) const;
};

struct TrialResult {
    std::uint64_t seed = 0;
    std::vector<double> train_curve; // epoch-end mean train loss, length = epochs
    std::vector<double> test_curve;
    std::vector<double> final_params;
    bool aborted = false;
    int abort_epoch = -1; // 0-based epoch where a non-finite loss appeared
    std::string abort_reason;
};

struct TrainReport {
    TrainConfig config;
    std::uint64_t dataset_seed = 0;
    std::vector<TrialResult> trials;
    std::vector<double> mean_train_curve; // over non-aborted trials
    std::vector<double> mean_test_curve;
    double wall_clock_seconds = 0.0;

    bool any_aborted() const;
};

/// theta_i uniform in [-pi, pi), one draw per parameter in index order.
std::vector<double> init_params(const AnsatzSpec& spec, Rng& rng);

/// Mean loss over samples; per-sample predictions run concurrently, the mean
/// is reduced in fixed index order.
double evaluate(Pipeline pipeline, const ModelSpec& model, std::span<const double> params,
                std::span<const Sample> samples, LossKind kind,
                OrderInit order_init = OrderInit::plus);

/// Seeded shuffle of 0..n-1 partitioned into batches of batch_size; the
/// final partial batch is kept. Every index appears exactly once.
std::vector<std::vector<int>> make_batches(int n, int batch_size, Rng& rng);

using ProgressFn =
    std::function<void(int trial, int epoch, double train_loss, double test_loss)>;

/// Mini-batch gradient descent, theta <- theta - lr * grad, for n_trials
/// independent trials seeded config.seed + trial_index. Deterministic given
/// (config, data). A trial hitting a non-finite loss is aborted and recorded;
/// the remaining trials still run.
TrainReport train(const TrainConfig& config, const Dataset& data,
                  const ProgressFn& progress = {});

} // namespace icosim
