#include "icosim/gradients.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace icosim {

const char* loss_kind_name(LossKind k) { return k == LossKind::mse ? "mse" : "absolute"; }

LossKind loss_kind_from_name(const std::string& name) {
    if (name == "mse") return LossKind::mse;
    if (name == "absolute") return LossKind::absolute;
    throw ConfigError("unknown loss '" + name + "' (expected mse|absolute)");
}

double loss(double prediction, double target, LossKind kind) {
    if (!std::isfinite(prediction) || !std::isfinite(target)) {
        throw ConfigError("loss inputs must be finite");
    }
    const double d = target - prediction;
    return kind == LossKind::mse ? d * d : std::abs(d);
}

double loss_derivative(double prediction, double target, LossKind kind) {
    if (kind == LossKind::mse) {
        return 2.0 * (prediction - target);
    }
    if (prediction > target) return 1.0;
    if (prediction < target) return -1.0;
    return 0.0; // subgradient at the kink
}

namespace {

// dR/dtheta = (-i/2) P R(theta) as an explicit 2x2.
Mat2 param_derivative_matrix(GateKind kind, double angle) {
    const Mat2 r = rotation_matrix(kind, angle);
    const cplx scale(0.0, -0.5);
    switch (kind) {
    case GateKind::RX: // X swaps rows
        return {scale * r.m10, scale * r.m11, scale * r.m00, scale * r.m01};
    case GateKind::RY: // Y: row0 <- -i*row1, row1 <- i*row0
        return {scale * cplx(0.0, -1.0) * r.m10, scale * cplx(0.0, -1.0) * r.m11,
                scale * cplx(0.0, 1.0) * r.m00, scale * cplx(0.0, 1.0) * r.m01};
    case GateKind::RZ: // Z negates row1
        return {scale * r.m00, scale * r.m01, -scale * r.m10, -scale * r.m11};
    default:
        throw StructuralError("derivative of a non-rotation gate");
    }
}

// |mu> = dU/dtheta |phi> for a (possibly order-controlled) rotation: the
// control projector zeroes non-matching amplitudes, matching pairs get
// (-i/2) P R applied.
void apply_param_derivative(StateVector& s, const ControlledOp& g,
                            std::span<const double> params) {
    const Mat2 m = param_derivative_matrix(g.op.kind, resolve_angle(g.op, params));
    const int n = s.n_qubits();
    const std::uint64_t tmask = std::uint64_t{1} << qubit_bit(n, g.op.target);
    std::uint64_t cmask = 0;
    std::uint64_t cmatch = 0;
    if (g.ctrl_qubit >= 0) {
        cmask = std::uint64_t{1} << qubit_bit(n, g.ctrl_qubit);
        cmatch = g.ctrl_value ? cmask : 0;
    }
    const std::uint64_t lo = tmask - 1;
    const std::uint64_t hi = ~lo;
    const std::size_t half = s.dim() >> 1;
    cplx* amps = s.amplitudes().data();
    for (std::size_t i = 0; i < half; ++i) {
        const std::uint64_t i0 = ((i & hi) << 1) | (i & lo);
        const std::uint64_t i1 = i0 | tmask;
        if ((i0 & cmask) != cmatch) {
            amps[i0] = cplx(0.0, 0.0);
            amps[i1] = cplx(0.0, 0.0);
            continue;
        }
        const cplx a0 = amps[i0];
        const cplx a1 = amps[i1];
        amps[i0] = m.m00 * a0 + m.m01 * a1;
        amps[i1] = m.m10 * a0 + m.m11 * a1;
    }
}

} // namespace

double adjoint_expectation(const PipelineCircuit& circuit, std::span<const double> params,
                           std::vector<double>* grad_out) {
    StateVector phi(circuit.n_qubits);
    apply_sequence(phi, std::span<const ControlledOp>(circuit.ops), params);
    const double value = expectation_on_computation(phi, circuit.obs, circuit.n_comp);
    if (grad_out == nullptr) {
        return value;
    }
    grad_out->assign(params.size(), 0.0);

    StateVector lambda = phi;
    apply_observable(lambda, circuit.obs);

    // Reverse sweep: phi is rewound to the state before each gate, lambda
    // carries the observable through the inverse circuit. Each occurrence of
    // a parameter contributes 2 Re <lambda| dU |phi_pre>.
    for (auto it = circuit.ops.rbegin(); it != circuit.ops.rend(); ++it) {
        const ControlledOp& g = *it;
        apply_inverse_gate(phi, g, params);
        if (g.op.param_index >= 0) {
            StateVector mu = phi;
            apply_param_derivative(mu, g, params);
            (*grad_out)[static_cast<std::size_t>(g.op.param_index)] +=
                2.0 * inner_product(lambda, mu).real();
        }
        apply_inverse_gate(lambda, g, params);
    }
    return value;
}

namespace {

std::span<const double> encode_slice(const Sample& s, const ModelSpec& model) {
    // Toy models below three qubits encode the leading field components.
    const std::size_t n = static_cast<std::size_t>(model.ansatz.n_qubits);
    return {s.x_norm.data(), std::min(n, s.x_norm.size())};
}

void check_batch(std::span<const Sample> batch, std::span<const double> params,
                 const ModelSpec& model) {
    if (batch.empty()) {
        throw ConfigError("batch must be non-empty");
    }
    if (params.size() != static_cast<std::size_t>(model.n_params())) {
        throw ConfigError("parameter vector length " + std::to_string(params.size()) +
                          " does not match model (" + std::to_string(model.n_params()) + ")");
    }
}

template <bool Parallel>
GradientResult batch_analytic(Pipeline pipeline, const ModelSpec& model,
                              std::span<const double> params, std::span<const Sample> batch,
                              LossKind kind, OrderInit order_init) {
    check_batch(batch, params, model);
    const int n = static_cast<int>(batch.size());
    std::vector<double> losses(static_cast<std::size_t>(n));
    std::vector<std::vector<double>> grads(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(static) if (Parallel)
    for (int i = 0; i < n; ++i) {
        const Sample& s = batch[static_cast<std::size_t>(i)];
        const PipelineCircuit circuit =
            build_pipeline_circuit(pipeline, model, encode_slice(s, model), order_init);
        std::vector<double> g;
        const double pred = adjoint_expectation(circuit, params, &g);
        const double dl = loss_derivative(pred, s.y_norm, kind);
        for (double& v : g) {
            v *= dl;
        }
        losses[static_cast<std::size_t>(i)] = loss(pred, s.y_norm, kind);
        grads[static_cast<std::size_t>(i)] = std::move(g);
    }

    // Reduction in fixed index order keeps results identical for any thread
    // count.
    GradientResult r;
    r.method = GradientResult::Method::analytic;
    r.grad.assign(params.size(), 0.0);
    double loss_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        loss_sum += losses[static_cast<std::size_t>(i)];
        const std::vector<double>& g = grads[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < r.grad.size(); ++j) {
            r.grad[j] += g[j];
        }
    }
    const double inv = 1.0 / static_cast<double>(n);
    r.loss = loss_sum * inv;
    for (double& v : r.grad) {
        v *= inv;
    }
    return r;
}

} // namespace

GradientResult loss_and_grad_analytic(Pipeline pipeline, const ModelSpec& model,
                                      std::span<const double> params,
                                      std::span<const Sample> batch, LossKind kind,
                                      OrderInit order_init) {
    return batch_analytic<true>(pipeline, model, params, batch, kind, order_init);
}

GradientResult loss_and_grad_analytic_serial(Pipeline pipeline, const ModelSpec& model,
                                             std::span<const double> params,
                                             std::span<const Sample> batch, LossKind kind,
                                             OrderInit order_init) {
    return batch_analytic<false>(pipeline, model, params, batch, kind, order_init);
}

double batch_loss(Pipeline pipeline, const ModelSpec& model, std::span<const double> params,
                  std::span<const Sample> batch, LossKind kind, OrderInit order_init) {
    check_batch(batch, params, model);
    const int n = static_cast<int>(batch.size());
    std::vector<double> losses(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const Sample& s = batch[static_cast<std::size_t>(i)];
        const double pred =
            predict(pipeline, model, params, encode_slice(s, model), order_init);
        losses[static_cast<std::size_t>(i)] = loss(pred, s.y_norm, kind);
    }

    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += losses[static_cast<std::size_t>(i)];
    }
    return sum / static_cast<double>(n);
}

GradientResult loss_and_grad_fd(Pipeline pipeline, const ModelSpec& model,
                                std::span<const double> params, std::span<const Sample> batch,
                                LossKind kind, double step, OrderInit order_init) {
    if (!(step > 0.0)) {
        throw ConfigError("finite-difference step must be positive");
    }
    check_batch(batch, params, model);
    GradientResult r;
    r.method = GradientResult::Method::finite_difference;
    r.loss = batch_loss(pipeline, model, params, batch, kind, order_init);
    r.grad.assign(params.size(), 0.0);
    std::vector<double> shifted(params.begin(), params.end());
    for (std::size_t j = 0; j < shifted.size(); ++j) {
        const double orig = shifted[j];
        shifted[j] = orig + step;
        const double up = batch_loss(pipeline, model, shifted, batch, kind, order_init);
        shifted[j] = orig - step;
        const double down = batch_loss(pipeline, model, shifted, batch, kind, order_init);
        shifted[j] = orig;
        r.grad[j] = (up - down) / (2.0 * step);
    }
    return r;
}

GradCheckReport run_gradcheck(const ModelSpec& model, int instances, double step,
                              double tolerance, std::uint64_t seed, LossKind kind) {
    if (instances < 1) {
        throw ConfigError("gradcheck needs at least one instance");
    }
    GradCheckReport report;
    report.instances_per_pipeline = instances;
    report.step = step;
    report.tolerance = tolerance;

    Rng rng(seed);
    const DatasetConfig data_defaults;
    for (Pipeline pipeline : {Pipeline::definite, Pipeline::ico}) {
        for (int k = 0; k < instances; ++k) {
            std::vector<double> params(static_cast<std::size_t>(model.n_params()));
            for (double& p : params) {
                p = uniform_in(rng, -std::numbers::pi, std::numbers::pi);
            }
            const Sample sample =
                make_sample(sample_field(rng, data_defaults.bounds), data_defaults.bounds,
                            data_defaults.convention);
            const std::span<const Sample> batch(&sample, 1);
            const GradientResult analytic =
                loss_and_grad_analytic(pipeline, model, params, batch, kind);
            const GradientResult fd =
                loss_and_grad_fd(pipeline, model, params, batch, kind, step);
            for (std::size_t j = 0; j < analytic.grad.size(); ++j) {
                const double dev = std::abs(analytic.grad[j] - fd.grad[j]);
                if (dev > report.max_abs_dev) {
                    report.max_abs_dev = dev;
                    report.worst_param = static_cast<int>(j);
                    report.worst_instance = k;
                    report.worst_pipeline = pipeline;
                }
            }
        }
    }
    return report;
}

} // namespace icosim
