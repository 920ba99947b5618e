#include "icosim/circuits.hpp"

#include <string>

#include "icosim/errors.hpp"

namespace icosim {

std::vector<GateOp> build_encoding(const EncodingSpec& spec, std::span<const double> x) {
    if (spec.n_qubits < 1) {
        throw ConfigError("encoding needs at least one qubit");
    }
    if (x.size() != static_cast<std::size_t>(spec.n_qubits)) {
        throw ConfigError("encoding expects " + std::to_string(spec.n_qubits) +
                          " components, got " + std::to_string(x.size()));
    }
    static constexpr GateKind axis[3] = {GateKind::RX, GateKind::RY, GateKind::RZ};
    std::vector<GateOp> gates;
    gates.reserve(x.size());
    for (int q = 0; q < spec.n_qubits; ++q) {
        gates.push_back({axis[q % 3], q, -1, x[static_cast<std::size_t>(q)], -1});
    }
    return gates;
}

std::vector<GateOp> build_ansatz(const AnsatzSpec& spec) {
    if (spec.n_layers < 1) {
        throw ConfigError("ansatz needs at least one layer");
    }
    if (spec.n_qubits < 2) {
        throw ConfigError("CNOT ring undefined below two qubits");
    }
    std::vector<GateOp> gates;
    gates.reserve(static_cast<std::size_t>(spec.n_layers) *
                  static_cast<std::size_t>(spec.n_qubits) * 3);
    int param = 0;
    for (int layer = 0; layer < spec.n_layers; ++layer) {
        for (int q = 0; q < spec.n_qubits; ++q) {
            gates.push_back(GateOp::ry_param(q, param++));
            gates.push_back(GateOp::rz_param(q, param++));
        }
        // cyclical connectivity, control i -> target (i+1 mod n)
        for (int q = 0; q < spec.n_qubits; ++q) {
            gates.push_back(GateOp::cnot(q, (q + 1) % spec.n_qubits));
        }
    }
    return gates;
}

std::vector<GateOp> invert_sequence(std::span<const GateOp> gates,
                                    std::span<const double> params) {
    std::vector<GateOp> out;
    out.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        GateOp g = *it;
        if (is_rotation(g.kind)) {
            g.angle = -resolve_angle(*it, params);
            g.param_index = -1;
        }
        out.push_back(g);
    }
    return out;
}

} // namespace icosim
