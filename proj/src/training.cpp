#include "icosim/training.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace icosim {

void TrainConfig::validate(int k_train) const {
    if (n_layers < 1 || n_qubits < 2) {
        throw ConfigError("model needs n_layers >= 1 and n_qubits >= 2");
    }
    if (epochs < 1) {
        throw ConfigError("epochs must be >= 1");
    }
    // learning_rate == 0 is allowed as a degenerate no-update run
    if (!(learning_rate >= 0.0)) {
        throw ConfigError("learning rate must be >= 0");
    }
    if (batch_size < 1 || batch_size > k_train) {
        throw ConfigError("batch size must be in [1, k_train]");
    }
    if (n_trials < 1) {
        throw ConfigError("n_trials must be >= 1");
    }
}

bool TrainReport::any_aborted() const {
    for (const TrialResult& t : trials) {
        if (t.aborted) {
            return true;
        }
    }
    return false;
}

std::vector<double> init_params(const AnsatzSpec& spec, Rng& rng) {
    std::vector<double> params(static_cast<std::size_t>(spec.n_params()));
    for (double& p : params) {
        p = uniform_in(rng, -std::numbers::pi, std::numbers::pi);
    }
    return params;
}

double evaluate(Pipeline pipeline, const ModelSpec& model, std::span<const double> params,
                std::span<const Sample> samples, LossKind kind, OrderInit order_init) {
    return batch_loss(pipeline, model, params, samples, kind, order_init);
}

std::vector<std::vector<int>> make_batches(int n, int batch_size, Rng& rng) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    shuffle_in_place(order, rng);
    std::vector<std::vector<int>> batches;
    for (int start = 0; start < n; start += batch_size) {
        const int end = std::min(n, start + batch_size);
        batches.emplace_back(order.begin() + start, order.begin() + end);
    }
    return batches;
}

TrainReport train(const TrainConfig& config, const Dataset& data, const ProgressFn& progress) {
    config.validate(static_cast<int>(data.train.size()));
    if (data.train.empty() || data.test.empty()) {
        throw ConfigError("dataset must contain train and test samples");
    }
    const ModelSpec model = config.model();
    const auto t0 = std::chrono::steady_clock::now();

    TrainReport report;
    report.config = config;
    report.dataset_seed = data.config.seed;
    report.trials.reserve(static_cast<std::size_t>(config.n_trials));

    for (int trial = 0; trial < config.n_trials; ++trial) {
        TrialResult result;
        result.seed = config.seed + static_cast<std::uint64_t>(trial);
        Rng rng(result.seed);
        std::vector<double> params = init_params(model.ansatz, rng);

        std::vector<Sample> batch_buf;
        for (int epoch = 0; epoch < config.epochs; ++epoch) {
            const std::vector<std::vector<int>> batches =
                make_batches(static_cast<int>(data.train.size()), config.batch_size, rng);
            bool bad = false;
            for (const std::vector<int>& batch_idx : batches) {
                batch_buf.clear();
                for (int i : batch_idx) {
                    batch_buf.push_back(data.train[static_cast<std::size_t>(i)]);
                }
                const GradientResult g =
                    loss_and_grad_analytic(config.pipeline, model, params, batch_buf,
                                           config.loss_kind, config.order_init);
                if (!std::isfinite(g.loss)) {
                    bad = true;
                    break;
                }
                for (std::size_t j = 0; j < params.size(); ++j) {
                    params[j] -= config.learning_rate * g.grad[j];
                    if (!std::isfinite(params[j])) {
                        bad = true;
                    }
                }
                if (bad) {
                    break;
                }
            }

            const double train_loss =
                bad ? std::numeric_limits<double>::quiet_NaN()
                    : evaluate(config.pipeline, model, params, data.train, config.loss_kind,
                               config.order_init);
            const double test_loss =
                bad ? std::numeric_limits<double>::quiet_NaN()
                    : evaluate(config.pipeline, model, params, data.test, config.loss_kind,
                               config.order_init);
            if (bad || !std::isfinite(train_loss) || !std::isfinite(test_loss)) {
                result.aborted = true;
                result.abort_epoch = epoch;
                result.abort_reason = "non-finite loss";
                break;
            }
            result.train_curve.push_back(train_loss);
            result.test_curve.push_back(test_loss);
            if (progress) {
                progress(trial, epoch, train_loss, test_loss);
            }
        }
        result.final_params = std::move(params);
        report.trials.push_back(std::move(result));
    }

    // Mean curves over trials that completed every epoch.
    report.mean_train_curve.assign(static_cast<std::size_t>(config.epochs), 0.0);
    report.mean_test_curve.assign(static_cast<std::size_t>(config.epochs), 0.0);
    int completed = 0;
    for (const TrialResult& t : report.trials) {
        if (t.aborted) {
            continue;
        }
        ++completed;
        for (std::size_t e = 0; e < t.train_curve.size(); ++e) {
            report.mean_train_curve[e] += t.train_curve[e];
            report.mean_test_curve[e] += t.test_curve[e];
        }
    }
    if (completed > 0) {
        for (std::size_t e = 0; e < report.mean_train_curve.size(); ++e) {
            report.mean_train_curve[e] /= completed;
            report.mean_test_curve[e] /= completed;
        }
    } else {
        report.mean_train_curve.clear();
        report.mean_test_curve.clear();
    }

    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace icosim
