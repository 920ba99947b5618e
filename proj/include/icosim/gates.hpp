#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "icosim/errors.hpp"

namespace icosim {

using cplx = std::complex<double>;

enum class GateKind : std::uint8_t { RX, RY, RZ, CNOT, H };

inline bool is_rotation(GateKind k) {
    return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ;
}

const char* gate_name(GateKind k);

/// A primitive gate instance. Rotation gates carry either a bound angle or
/// an index into an external trainable parameter vector, never both.
struct GateOp {
    GateKind kind = GateKind::H;
    int target = 0;
    int control = -1;     // CNOT only
    double angle = 0.0;   // rotations with a bound angle
    int param_index = -1; // rotations bound to a trainable parameter

    static GateOp rx(int q, double a) { return {GateKind::RX, q, -1, a, -1}; }
    static GateOp ry(int q, double a) { return {GateKind::RY, q, -1, a, -1}; }
    static GateOp rz(int q, double a) { return {GateKind::RZ, q, -1, a, -1}; }
    static GateOp rx_param(int q, int idx) { return {GateKind::RX, q, -1, 0.0, idx}; }
    static GateOp ry_param(int q, int idx) { return {GateKind::RY, q, -1, 0.0, idx}; }
    static GateOp rz_param(int q, int idx) { return {GateKind::RZ, q, -1, 0.0, idx}; }
    static GateOp h(int q) { return {GateKind::H, q, -1, 0.0, -1}; }
    static GateOp cnot(int control, int target) {
        return {GateKind::CNOT, target, control, 0.0, -1};
    }
};

/// Rotation angle of `g`, read from `params` when the gate is parameter-bound.
inline double resolve_angle(const GateOp& g, std::span<const double> params) {
    if (g.param_index < 0) {
        return g.angle;
    }
    if (static_cast<std::size_t>(g.param_index) >= params.size()) {
        throw StructuralError("gate parameter index out of range");
    }
    return params[static_cast<std::size_t>(g.param_index)];
}

/// 2x2 complex matrix, row-major.
struct Mat2 {
    cplx m00, m01, m10, m11;
};

/// Rotation convention: R_P(theta) = exp(-i * theta * P / 2).
Mat2 rotation_matrix(GateKind kind, double angle);

Mat2 hadamard_matrix();

/// A gate with an optional extra control condition. Used to realise the
/// order-controlled stages of the switch; ctrl_qubit < 0 means unconditional.
struct ControlledOp {
    GateOp op;
    int ctrl_qubit = -1;
    int ctrl_value = 0;
};

inline ControlledOp unconditional(const GateOp& g) { return {g, -1, 0}; }

std::vector<ControlledOp> as_controlled(std::span<const GateOp> gates,
                                        int ctrl_qubit = -1, int ctrl_value = 0);

} // namespace icosim
