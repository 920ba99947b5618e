#pragma once

#include <span>
#include <vector>

#include "icosim/circuits.hpp"
#include "icosim/state.hpp"
#include "icosim/switch_op.hpp"

namespace icosim {

/// `definite`: sense-then-compute, U_theta . U(x) on the computation
/// register alone. `ico`: same two sequences composed under the quantum
/// switch with an order qubit prepared in |+>.
enum class Pipeline { definite, ico };

const char* pipeline_name(Pipeline p);
Pipeline pipeline_from_name(const std::string& name);

/// Initial state of the order qubit. `zero` is a diagnostics hook: it skips
/// the Hadamard so the switch collapses to the definite order.
enum class OrderInit { plus, zero };

/// Model shared by both pipelines: encoding + ansatz on the same register,
/// read out as Pauli-Z on computation qubit 0.
struct ModelSpec {
    AnsatzSpec ansatz;

    EncodingSpec encoding() const { return {ansatz.n_qubits}; }
    Observable readout() const { return {0}; }
    int n_params() const { return ansatz.n_params(); }
};

/// Fully assembled circuit for one input: flat gate list on n_qubits,
/// readout observable, computation register size.
struct PipelineCircuit {
    int n_qubits = 0;
    int n_comp = 0;
    std::vector<ControlledOp> ops;
    Observable obs;
};

/// Assembles the gate list for a pipeline at a given encoded input. x_norm
/// must provide spec.n_qubits components (radians).
PipelineCircuit build_pipeline_circuit(Pipeline pipeline, const ModelSpec& model,
                                       std::span<const double> x_norm,
                                       OrderInit order_init = OrderInit::plus);

/// Runs the circuit on |0...0> and returns the full register state.
StateVector run_pipeline(const PipelineCircuit& circuit, std::span<const double> params);

/// Prediction y_hat in [-1, 1]: the readout expectation over the
/// computation qubits.
double predict(Pipeline pipeline, const ModelSpec& model, std::span<const double> params,
               std::span<const double> x_norm, OrderInit order_init = OrderInit::plus);

} // namespace icosim
