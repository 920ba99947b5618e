#pragma once

#include <span>
#include <vector>

#include "icosim/gates.hpp"

namespace icosim {

/// Angle-encoding layer: one rotation per qubit, axis cycling X, Y, Z in
/// qubit order (qubit0 -> RX, qubit1 -> RY, qubit2 -> RZ).
struct EncodingSpec {
    int n_qubits = 3;
};

/// Layered hardware-efficient ansatz: per layer, RY then RZ on every qubit,
/// followed by a CNOT ring with cyclical connectivity (i -> i+1 mod n).
/// Trainable parameter count is n_layers * n_qubits * 2.
struct AnsatzSpec {
    int n_qubits = 3;
    int n_layers = 15;

    int n_params() const { return n_layers * n_qubits * 2; }
};

/// [RX(x0) q0, RY(x1) q1, RZ(x2) q2, ...]; x.size() must equal spec.n_qubits.
/// The rotations act on disjoint qubits, so list order matches the product
/// form regardless of which factor is written first.
std::vector<GateOp> build_encoding(const EncodingSpec& spec, std::span<const double> x);

/// Parameter indices are assigned in generation order, 0..n_params-1 each
/// used exactly once.
std::vector<GateOp> build_ansatz(const AnsatzSpec& spec);

/// Inverse circuit: reversed order, rotation angles negated and bound
/// (parameter references are resolved against `params` at inversion time).
std::vector<GateOp> invert_sequence(std::span<const GateOp> gates,
                                    std::span<const double> params = {});

} // namespace icosim
