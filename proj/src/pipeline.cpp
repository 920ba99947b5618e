#include "icosim/pipeline.hpp"

#include "icosim/errors.hpp"

namespace icosim {

const char* pipeline_name(Pipeline p) {
    return p == Pipeline::definite ? "definite" : "ico";
}

Pipeline pipeline_from_name(const std::string& name) {
    if (name == "definite") return Pipeline::definite;
    if (name == "ico") return Pipeline::ico;
    throw ConfigError("unknown pipeline '" + name + "' (expected definite|ico)");
}

PipelineCircuit build_pipeline_circuit(Pipeline pipeline, const ModelSpec& model,
                                       std::span<const double> x_norm, OrderInit order_init) {
    const std::vector<GateOp> encoding = build_encoding(model.encoding(), x_norm);
    const std::vector<GateOp> ansatz = build_ansatz(model.ansatz);

    PipelineCircuit circuit;
    circuit.n_comp = model.ansatz.n_qubits;
    circuit.obs = model.readout();

    if (pipeline == Pipeline::definite) {
        circuit.n_qubits = circuit.n_comp;
        circuit.ops = as_controlled(encoding);
        for (const GateOp& g : ansatz) {
            circuit.ops.push_back(unconditional(g));
        }
        return circuit;
    }

    SwitchProgram prog{encoding, ansatz, circuit.n_comp};
    circuit.n_qubits = prog.n_total();
    if (order_init == OrderInit::plus) {
        circuit.ops.push_back(unconditional(GateOp::h(prog.order_qubit())));
    }
    std::vector<ControlledOp> staged = switch_flat_ops(prog);
    circuit.ops.insert(circuit.ops.end(), staged.begin(), staged.end());
    return circuit;
}

StateVector run_pipeline(const PipelineCircuit& circuit, std::span<const double> params) {
    StateVector s(circuit.n_qubits);
    apply_sequence(s, std::span<const ControlledOp>(circuit.ops), params);
    return s;
}

double predict(Pipeline pipeline, const ModelSpec& model, std::span<const double> params,
               std::span<const double> x_norm, OrderInit order_init) {
    const PipelineCircuit circuit = build_pipeline_circuit(pipeline, model, x_norm, order_init);
    const StateVector s = run_pipeline(circuit, params);
    return expectation_on_computation(s, circuit.obs, circuit.n_comp);
}

} // namespace icosim
