#include "icosim/switch_op.hpp"

#include <string>

namespace icosim {

namespace {

void validate_branch(std::span<const GateOp> branch, int n_comp, const char* name) {
    for (const GateOp& g : branch) {
        const bool target_ok = g.target >= 0 && g.target < n_comp;
        const bool control_ok = g.kind != GateKind::CNOT || (g.control >= 0 && g.control < n_comp);
        if (!target_ok || !control_ok) {
            throw StructuralError(std::string(name) +
                                  " must act on computation qubits only");
        }
    }
}

} // namespace

void validate(const SwitchProgram& prog) {
    if (prog.n_comp < 1 || prog.n_total() > kMaxQubits) {
        throw ConfigError("switch register size out of range");
    }
    validate_branch(prog.branch_a, prog.n_comp, "branch_a");
    validate_branch(prog.branch_b, prog.n_comp, "branch_b");
}

void prepare_order_qubit(StateVector& s, int order_qubit) {
    apply_gate(s, GateOp::h(order_qubit));
}

std::vector<ControlledOp> switch_flat_ops(const SwitchProgram& prog) {
    validate(prog);
    const int t = prog.order_qubit();
    std::vector<ControlledOp> ops;
    ops.reserve(2 * (prog.branch_a.size() + prog.branch_b.size()));
    // Stage 1: |0><0|_T (x) A  +  |1><1|_T (x) B. The two control values
    // address disjoint blocks, so the stage factors into one controlled
    // copy of each branch.
    for (const GateOp& g : prog.branch_a) ops.push_back({g, t, 0});
    for (const GateOp& g : prog.branch_b) ops.push_back({g, t, 1});
    // Stage 2: |0><0|_T (x) B  +  |1><1|_T (x) A.
    for (const GateOp& g : prog.branch_b) ops.push_back({g, t, 0});
    for (const GateOp& g : prog.branch_a) ops.push_back({g, t, 1});
    return ops;
}

void apply_switch(StateVector& s, const SwitchProgram& prog, std::span<const double> params) {
    if (s.n_qubits() != prog.n_total()) {
        throw StructuralError("state size does not match switch register");
    }
    const std::vector<ControlledOp> ops = switch_flat_ops(prog);
    apply_sequence(s, ops, params);
}

CMatrix CMatrix::identity(std::size_t d) {
    CMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) {
        m.at(i, i) = cplx(1.0, 0.0);
    }
    return m;
}

CMatrix matmul(const CMatrix& lhs, const CMatrix& rhs) {
    if (lhs.dim != rhs.dim) {
        throw StructuralError("matmul dimension mismatch");
    }
    CMatrix out(lhs.dim);
    for (std::size_t r = 0; r < lhs.dim; ++r) {
        for (std::size_t k = 0; k < lhs.dim; ++k) {
            const cplx l = lhs.at(r, k);
            if (l == cplx(0.0, 0.0)) {
                continue;
            }
            for (std::size_t c = 0; c < lhs.dim; ++c) {
                out.at(r, c) += l * rhs.at(k, c);
            }
        }
    }
    return out;
}

CMatrix sequence_unitary(std::span<const GateOp> gates, int n_qubits,
                         std::span<const double> params) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    CMatrix u(dim);
    for (std::size_t col = 0; col < dim; ++col) {
        StateVector basis(n_qubits);
        basis.amp(0) = cplx(0.0, 0.0);
        basis.amp(col) = cplx(1.0, 0.0);
        apply_sequence(basis, gates, params);
        for (std::size_t row = 0; row < dim; ++row) {
            u.at(row, col) = basis.amp(row);
        }
    }
    return u;
}

CMatrix switch_dense_matrix(const SwitchProgram& prog, std::span<const double> params) {
    validate(prog);
    if (prog.n_total() > 5) {
        throw ConfigError("dense switch matrix capped at 5 total qubits");
    }
    const CMatrix ua = sequence_unitary(prog.branch_a, prog.n_comp, params);
    const CMatrix ub = sequence_unitary(prog.branch_b, prog.n_comp, params);
    const CMatrix when0 = matmul(ub, ua); // branch_a first
    const CMatrix when1 = matmul(ua, ub);
    // Order qubit is the last tensor factor (LSB of the amplitude index):
    // M = when0 (x) |0><0|  +  when1 (x) |1><1|.
    const std::size_t cdim = std::size_t{1} << prog.n_comp;
    CMatrix m(cdim * 2);
    for (std::size_t r = 0; r < cdim; ++r) {
        for (std::size_t c = 0; c < cdim; ++c) {
            m.at(2 * r, 2 * c) = when0.at(r, c);
            m.at(2 * r + 1, 2 * c + 1) = when1.at(r, c);
        }
    }
    return m;
}

StateVector matrix_apply(const CMatrix& m, const StateVector& s) {
    if (m.dim != s.dim()) {
        throw StructuralError("matrix_apply dimension mismatch");
    }
    StateVector out(s.n_qubits());
    for (std::size_t r = 0; r < m.dim; ++r) {
        cplx acc(0.0, 0.0);
        for (std::size_t c = 0; c < m.dim; ++c) {
            acc += m.at(r, c) * s.amp(c);
        }
        out.amp(r) = acc;
    }
    return out;
}

} // namespace icosim
