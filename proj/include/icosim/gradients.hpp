#pragma once

#include <span>
#include <string>
#include <vector>

#include "icosim/dataset.hpp"
#include "icosim/pipeline.hpp"

namespace icosim {

enum class LossKind { mse, absolute };

const char* loss_kind_name(LossKind k);
LossKind loss_kind_from_name(const std::string& name);

/// (y - y_hat)^2 or |y - y_hat|.
double loss(double prediction, double target, LossKind kind);

/// d loss / d prediction. The absolute-loss subgradient at the kink is 0.
double loss_derivative(double prediction, double target, LossKind kind);

struct GradientResult {
    enum class Method { analytic, finite_difference };

    std::vector<double> grad;
    double loss = 0.0;
    Method method = Method::analytic;
};

/// Expectation <O> of the circuit at `params` and, when grad_out is non-null,
/// its exact gradient via an adjoint reverse sweep through the statevector.
/// A parameter appearing in several gates (as it does in both switch stages)
/// accumulates one contribution per occurrence.
double adjoint_expectation(const PipelineCircuit& circuit, std::span<const double> params,
                           std::vector<double>* grad_out);

/// Batch-mean loss and its exact gradient. Per-sample terms are evaluated
/// concurrently (OpenMP) and reduced in fixed index order, so the result is
/// bit-identical for any thread count.
GradientResult loss_and_grad_analytic(Pipeline pipeline, const ModelSpec& model,
                                      std::span<const double> params,
                                      std::span<const Sample> batch, LossKind kind,
                                      OrderInit order_init = OrderInit::plus);

/// Plain serial loop over the batch; reference twin of the parallel path.
GradientResult loss_and_grad_analytic_serial(Pipeline pipeline, const ModelSpec& model,
                                             std::span<const double> params,
                                             std::span<const Sample> batch, LossKind kind,
                                             OrderInit order_init = OrderInit::plus);

inline constexpr double kDefaultFdStep = 1e-5;

/// Central-difference oracle on the batch-mean loss,
/// (L(theta + e_i h) - L(theta - e_i h)) / (2h).
GradientResult loss_and_grad_fd(Pipeline pipeline, const ModelSpec& model,
                                std::span<const double> params,
                                std::span<const Sample> batch, LossKind kind,
                                double step = kDefaultFdStep,
                                OrderInit order_init = OrderInit::plus);

/// Mean batch loss at `params`, no gradient.
double batch_loss(Pipeline pipeline, const ModelSpec& model, std::span<const double> params,
                  std::span<const Sample> batch, LossKind kind,
                  OrderInit order_init = OrderInit::plus);

struct GradCheckReport {
    double max_abs_dev = 0.0;
    int worst_param = -1;
    int worst_instance = -1;
    Pipeline worst_pipeline = Pipeline::definite;
    int instances_per_pipeline = 0;
    double step = kDefaultFdStep;
    double tolerance = kDefaultFdStep;

    bool pass() const { return max_abs_dev <= tolerance; }
};

/// Analytic-vs-finite-difference agreement suite over random instances of
/// both pipelines at the given model size.
GradCheckReport run_gradcheck(const ModelSpec& model, int instances, double step,
                              double tolerance, std::uint64_t seed, LossKind kind);

} // namespace icosim
