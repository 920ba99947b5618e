#include <doctest.h>

#include <cmath>

#include "icosim/gradients.hpp"
#include "testutil.hpp"

using namespace icosim;

namespace {

Sample sample_from_field(Rng& rng) {
    const DatasetConfig defaults;
    return make_sample(sample_field(rng, defaults.bounds), defaults.bounds,
                       defaults.convention);
}

double max_abs_dev(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

} // namespace

TEST_CASE("loss values") {
    CHECK(loss(0.5, 0.5, LossKind::mse) == 0.0);
    CHECK(loss(0.0, 1.0, LossKind::mse) == 1.0);
    CHECK(loss(0.0, 1.0, LossKind::absolute) == 1.0);
    CHECK(loss(-0.3, 0.2, LossKind::mse) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(loss(0.7, 0.1, LossKind::absolute) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("loss derivative conventions") {
    CHECK(loss_derivative(0.4, 0.1, LossKind::mse) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(loss_derivative(0.4, 0.4, LossKind::mse) == 0.0);
    CHECK(loss_derivative(0.4, 0.1, LossKind::absolute) == 1.0);
    CHECK(loss_derivative(0.1, 0.4, LossKind::absolute) == -1.0);
    // subgradient at the kink is 0 by convention
    CHECK(loss_derivative(0.4, 0.4, LossKind::absolute) == 0.0);
}

TEST_CASE("gradient vanishes at a perfect fit") {
    Rng rng(61);
    const ModelSpec model{AnsatzSpec{2, 1}};
    const std::vector<double> params =
        testutil::random_params(rng, static_cast<std::size_t>(model.n_params()));
    Sample s = sample_from_field(rng);
    s.y_norm = predict(Pipeline::definite, model, params,
                       std::span<const double>(s.x_norm.data(), 2));
    const std::span<const Sample> batch(&s, 1);
    const GradientResult g =
        loss_and_grad_analytic(Pipeline::definite, model, params, batch, LossKind::mse);
    CHECK(g.loss == 0.0);
    for (double v : g.grad) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("toy model: analytic matches finite differences") {
    Rng rng(67);
    const ModelSpec model{AnsatzSpec{2, 1}};
    for (Pipeline pipeline : {Pipeline::definite, Pipeline::ico}) {
        const std::vector<double> params =
            testutil::random_params(rng, static_cast<std::size_t>(model.n_params()));
        const Sample s = sample_from_field(rng);
        const std::span<const Sample> batch(&s, 1);
        const GradientResult a =
            loss_and_grad_analytic(pipeline, model, params, batch, LossKind::mse);
        const GradientResult fd =
            loss_and_grad_fd(pipeline, model, params, batch, LossKind::mse, 1e-5);
        CHECK(max_abs_dev(a.grad, fd.grad) < 1e-6);
        CHECK(a.loss == doctest::Approx(fd.loss).epsilon(1e-12));
    }
}

TEST_CASE("full-size ICO batch agrees with the FD oracle") {
    Rng rng(71);
    const ModelSpec model{AnsatzSpec{3, 15}};
    const std::vector<double> params =
        testutil::random_params(rng, static_cast<std::size_t>(model.n_params()));
    std::vector<Sample> batch;
    for (int i = 0; i < 8; ++i) {
        batch.push_back(sample_from_field(rng));
    }
    const GradientResult a =
        loss_and_grad_analytic(Pipeline::ico, model, params, batch, LossKind::mse);
    const GradientResult fd =
        loss_and_grad_fd(Pipeline::ico, model, params, batch, LossKind::mse, 1e-5);
    CHECK(max_abs_dev(a.grad, fd.grad) < 1e-5);
}

TEST_CASE("Z rotations leave a Z readout flat") {
    // Circuit-level negative control: <Z> is invariant under RZ, so both the
    // analytic gradient and central differences must vanish.
    PipelineCircuit circuit;
    circuit.n_qubits = 1;
    circuit.n_comp = 1;
    circuit.obs = Observable{0};
    circuit.ops = {unconditional(GateOp::rz_param(0, 0)),
                   unconditional(GateOp::rz_param(0, 1))};
    const std::vector<double> params = {0.37, -1.21};
    std::vector<double> grad;
    const double value = adjoint_expectation(circuit, params, &grad);
    CHECK(value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(grad[0]) < 1e-14);
    CHECK(std::abs(grad[1]) < 1e-14);

    const double step = 1e-5;
    for (std::size_t j = 0; j < params.size(); ++j) {
        std::vector<double> shifted = params;
        shifted[j] += step;
        const double up = adjoint_expectation(circuit, shifted, nullptr);
        shifted[j] -= 2.0 * step;
        const double down = adjoint_expectation(circuit, shifted, nullptr);
        CHECK(std::abs((up - down) / (2.0 * step)) < 1e-8);
    }
}

TEST_CASE("finite differences converge as the step shrinks") {
    Rng rng(73);
    const ModelSpec model{AnsatzSpec{2, 1}};
    const std::vector<double> params =
        testutil::random_params(rng, static_cast<std::size_t>(model.n_params()));
    const Sample s = sample_from_field(rng);
    const std::span<const Sample> batch(&s, 1);
    const GradientResult coarse =
        loss_and_grad_fd(Pipeline::ico, model, params, batch, LossKind::mse, 1e-4);
    const GradientResult fine =
        loss_and_grad_fd(Pipeline::ico, model, params, batch, LossKind::mse, 1e-5);
    CHECK(max_abs_dev(coarse.grad, fine.grad) < 1e-6);
}

TEST_CASE("absolute loss gradients agree with FD away from the kink") {
    Rng rng(79);
    const ModelSpec model{AnsatzSpec{2, 1}};
    const std::vector<double> params =
        testutil::random_params(rng, static_cast<std::size_t>(model.n_params()));
    const Sample s = sample_from_field(rng);
    const std::span<const Sample> batch(&s, 1);
    const GradientResult a =
        loss_and_grad_analytic(Pipeline::definite, model, params, batch, LossKind::absolute);
    const GradientResult fd =
        loss_and_grad_fd(Pipeline::definite, model, params, batch, LossKind::absolute, 1e-5);
    CHECK(max_abs_dev(a.grad, fd.grad) < 1e-6);
}

TEST_CASE("gradients are deterministic and thread-count independent") {
    Rng rng(83);
    const ModelSpec model{AnsatzSpec{3, 3}};
    const std::vector<double> params =
        testutil::random_params(rng, static_cast<std::size_t>(model.n_params()));
    std::vector<Sample> batch;
    for (int i = 0; i < 6; ++i) {
        batch.push_back(sample_from_field(rng));
    }
    const GradientResult first =
        loss_and_grad_analytic(Pipeline::ico, model, params, batch, LossKind::mse);
    const GradientResult second =
        loss_and_grad_analytic(Pipeline::ico, model, params, batch, LossKind::mse);
    const GradientResult serial =
        loss_and_grad_analytic_serial(Pipeline::ico, model, params, batch, LossKind::mse);
    CHECK(first.loss == second.loss);
    CHECK(first.grad == second.grad);
    CHECK(first.loss == serial.loss);
    CHECK(first.grad == serial.grad);
}

TEST_CASE("gradcheck harness") {
    const ModelSpec model{AnsatzSpec{2, 2}};
    const GradCheckReport report = run_gradcheck(model, 2, 1e-5, 1e-5, 97, LossKind::mse);
    CHECK(report.pass());
    CHECK(report.max_abs_dev < 1e-5);

    // injected sign flip must be caught
    GradCheckReport bad = report;
    bad.max_abs_dev = 0.5;
    bad.worst_param = 3;
    CHECK_FALSE(bad.pass());
}

TEST_CASE("batch validation") {
    const ModelSpec model{AnsatzSpec{3, 1}};
    const std::vector<double> short_params(3, 0.0);
    const std::vector<Sample> empty;
    Rng rng(89);
    const Sample s = sample_from_field(rng);
    const std::span<const Sample> batch(&s, 1);
    CHECK_THROWS_AS(
        loss_and_grad_analytic(Pipeline::ico, model, short_params, batch, LossKind::mse),
        ConfigError);
    const std::vector<double> params(static_cast<std::size_t>(model.n_params()), 0.0);
    CHECK_THROWS_AS(loss_and_grad_analytic(Pipeline::ico, model, params, empty, LossKind::mse),
                    ConfigError);
}
