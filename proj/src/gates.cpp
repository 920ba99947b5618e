#include "icosim/gates.hpp"

#include <cmath>

namespace icosim {

const char* gate_name(GateKind k) {
    switch (k) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::H: return "H";
    }
    return "?";
}

Mat2 rotation_matrix(GateKind kind, double angle) {
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    switch (kind) {
    case GateKind::RX:
        return {cplx(c, 0.0), cplx(0.0, -s), cplx(0.0, -s), cplx(c, 0.0)};
    case GateKind::RY:
        return {cplx(c, 0.0), cplx(-s, 0.0), cplx(s, 0.0), cplx(c, 0.0)};
    case GateKind::RZ:
        return {cplx(c, -s), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(c, s)};
    default:
        throw StructuralError("rotation_matrix: not a rotation gate");
    }
}

Mat2 hadamard_matrix() {
    const double r = 1.0 / std::sqrt(2.0);
    return {cplx(r, 0.0), cplx(r, 0.0), cplx(r, 0.0), cplx(-r, 0.0)};
}

std::vector<ControlledOp> as_controlled(std::span<const GateOp> gates, int ctrl_qubit,
                                        int ctrl_value) {
    std::vector<ControlledOp> out;
    out.reserve(gates.size());
    for (const GateOp& g : gates) {
        out.push_back({g, ctrl_qubit, ctrl_value});
    }
    return out;
}

} // namespace icosim
