#include "icosim/state.hpp"

#include <cmath>
#include <string>

namespace icosim {

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("n_qubits must be in [1, " + std::to_string(kMaxQubits) +
                          "], got " + std::to_string(n_qubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, cplx(0.0, 0.0));
    amps_[0] = cplx(1.0, 0.0);
}

double StateVector::norm() const {
    double s = 0.0;
    for (const cplx& a : amps_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

StateVector new_zero_state(int n_qubits) { return StateVector(n_qubits); }

namespace {

void check_qubit(const StateVector& s, int q, const char* what) {
    if (q < 0 || q >= s.n_qubits()) {
        throw StructuralError(std::string(what) + " qubit index out of range: " +
                              std::to_string(q));
    }
}

} // namespace

void apply_1q(StateVector& s, const Mat2& m, int target, std::uint64_t ctrl_mask,
              std::uint64_t ctrl_match) {
    const std::uint64_t tmask = std::uint64_t{1} << qubit_bit(s.n_qubits(), target);
    const std::uint64_t lo = tmask - 1;
    const std::uint64_t hi = ~lo;
    const std::size_t half = s.dim() >> 1;
    cplx* amps = s.amplitudes().data();

    for (std::size_t i = 0; i < half; ++i) {
        const std::uint64_t i0 = ((i & hi) << 1) | (i & lo);
        if ((i0 & ctrl_mask) != ctrl_match) {
            continue;
        }
        const std::uint64_t i1 = i0 | tmask;
        const cplx a0 = amps[i0];
        const cplx a1 = amps[i1];
        amps[i0] = m.m00 * a0 + m.m01 * a1;
        amps[i1] = m.m10 * a0 + m.m11 * a1;
    }
}

void apply_x(StateVector& s, int target, std::uint64_t ctrl_mask, std::uint64_t ctrl_match) {
    const std::uint64_t tmask = std::uint64_t{1} << qubit_bit(s.n_qubits(), target);
    const std::uint64_t lo = tmask - 1;
    const std::uint64_t hi = ~lo;
    const std::size_t half = s.dim() >> 1;
    cplx* amps = s.amplitudes().data();

    for (std::size_t i = 0; i < half; ++i) {
        const std::uint64_t i0 = ((i & hi) << 1) | (i & lo);
        if ((i0 & ctrl_mask) != ctrl_match) {
            continue;
        }
        std::swap(amps[i0], amps[i0 | tmask]);
    }
}

namespace {

// Control condition of a ControlledOp (CNOT control plus optional extra
// control) as an index mask/match pair. The target bit never overlaps.
struct CtrlCond {
    std::uint64_t mask = 0;
    std::uint64_t match = 0;
};

CtrlCond control_condition(const StateVector& s, const ControlledOp& g) {
    CtrlCond c;
    if (g.op.kind == GateKind::CNOT) {
        check_qubit(s, g.op.control, "CNOT control");
        const std::uint64_t bit = std::uint64_t{1} << qubit_bit(s.n_qubits(), g.op.control);
        c.mask |= bit;
        c.match |= bit;
    }
    if (g.ctrl_qubit >= 0) {
        check_qubit(s, g.ctrl_qubit, "control");
        if (g.ctrl_qubit == g.op.target || g.ctrl_qubit == g.op.control) {
            throw StructuralError("control qubit collides with gate operands");
        }
        if (g.ctrl_value != 0 && g.ctrl_value != 1) {
            throw StructuralError("control value must be 0 or 1");
        }
        const std::uint64_t bit = std::uint64_t{1} << qubit_bit(s.n_qubits(), g.ctrl_qubit);
        c.mask |= bit;
        if (g.ctrl_value == 1) {
            c.match |= bit;
        }
    }
    return c;
}

void validate_gate(const StateVector& s, const GateOp& g) {
    check_qubit(s, g.target, "target");
    if (g.kind == GateKind::CNOT) {
        check_qubit(s, g.control, "CNOT control");
        if (g.control == g.target) {
            throw StructuralError("CNOT control and target must differ");
        }
    } else if (g.control >= 0) {
        throw StructuralError("only CNOT carries a control operand");
    }
    if (is_rotation(g.kind)) {
        if (g.param_index >= 0 && g.angle != 0.0) {
            throw StructuralError("rotation carries both angle and param_index");
        }
    } else if (g.param_index >= 0) {
        throw StructuralError("only rotations may be parameter-bound");
    }
}

} // namespace

void apply_gate(StateVector& s, const ControlledOp& g, std::span<const double> params) {
    validate_gate(s, g.op);
    const CtrlCond c = control_condition(s, g);
    switch (g.op.kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
        apply_1q(s, rotation_matrix(g.op.kind, resolve_angle(g.op, params)), g.op.target,
                 c.mask, c.match);
        break;
    case GateKind::H:
        apply_1q(s, hadamard_matrix(), g.op.target, c.mask, c.match);
        break;
    case GateKind::CNOT:
        apply_x(s, g.op.target, c.mask, c.match);
        break;
    }
}

void apply_gate(StateVector& s, const GateOp& g, std::span<const double> params) {
    apply_gate(s, unconditional(g), params);
}

void apply_inverse_gate(StateVector& s, const ControlledOp& g, std::span<const double> params) {
    if (is_rotation(g.op.kind)) {
        ControlledOp inv = g;
        inv.op.angle = -resolve_angle(g.op, params);
        inv.op.param_index = -1;
        apply_gate(s, inv, params);
    } else {
        // H and CNOT are self-inverse.
        apply_gate(s, g, params);
    }
}

void apply_sequence(StateVector& s, std::span<const GateOp> gates,
                    std::span<const double> params) {
    for (const GateOp& g : gates) {
        apply_gate(s, g, params);
    }
}

void apply_sequence(StateVector& s, std::span<const ControlledOp> gates,
                    std::span<const double> params) {
    for (const ControlledOp& g : gates) {
        apply_gate(s, g, params);
    }
}

double expectation(const StateVector& s, const Observable& obs) {
    check_qubit(s, obs.qubit, "observable");
    const std::uint64_t zmask = std::uint64_t{1} << qubit_bit(s.n_qubits(), obs.qubit);
    // Raw inner product <s|Z_q|s>; Z is diagonal so the imaginary part
    // cancels term by term. Checked anyway per the readout contract.
    cplx acc(0.0, 0.0);
    const std::span<const cplx> amps = s.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const cplx term = std::conj(amps[i]) * amps[i];
        acc += (i & zmask) ? -term : term;
    }
    if (std::abs(acc.imag()) >= 1e-10) {
        throw StructuralError("expectation has a non-negligible imaginary part");
    }
    return acc.real();
}

double expectation_on_computation(const StateVector& s, const Observable& obs, int n_comp) {
    if (n_comp < 1 || n_comp > s.n_qubits()) {
        throw StructuralError("computation register size out of range");
    }
    if (obs.qubit < 0 || obs.qubit >= n_comp) {
        throw StructuralError("observable must act on computation qubits only");
    }
    // I_order (x) O_comp on the full register; equal to Tr[rho_comp O] with
    // the order qubit traced out.
    return expectation(s, obs);
}

void apply_observable(StateVector& s, const Observable& obs) {
    check_qubit(s, obs.qubit, "observable");
    const std::uint64_t zmask = std::uint64_t{1} << qubit_bit(s.n_qubits(), obs.qubit);
    std::span<cplx> amps = s.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & zmask) {
            amps[i] = -amps[i];
        }
    }
}

cplx inner_product(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) {
        throw StructuralError("inner product dimension mismatch");
    }
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        acc += std::conj(a.amp(i)) * b.amp(i);
    }
    return acc;
}

} // namespace icosim
