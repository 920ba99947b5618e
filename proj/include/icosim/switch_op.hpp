#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "icosim/gates.hpp"
#include "icosim/state.hpp"

namespace icosim {

/// Two gate sequences composed under the quantum switch. The order qubit is
/// appended after the computation register (index n_comp, i.e. the least
/// significant amplitude bit under the qubit0-is-MSB convention). Branches
/// act on computation qubits only, never on the order qubit.
///
/// Order semantics: with the order qubit in |0>, branch_a acts first and
/// branch_b second; with |1>, the order is reversed.
struct SwitchProgram {
    std::vector<GateOp> branch_a; // first when order qubit = |0>
    std::vector<GateOp> branch_b; // second when order qubit = |0>
    int n_comp = 3;

    int order_qubit() const { return n_comp; }
    int n_total() const { return n_comp + 1; }
};

/// StructuralError if a branch touches the order qubit or an index is out of
/// range.
void validate(const SwitchProgram& prog);

/// Hadamard on the order qubit: |0>_T -> (|0>+|1>)/sqrt(2), computation
/// register untouched.
void prepare_order_qubit(StateVector& s, int order_qubit);

/// The two-stage controlled decomposition as a flat gate list:
///   stage 1 = (|0><0|_T (x) A) + (|1><1|_T (x) B)
///   stage 2 = (|0><0|_T (x) B) + (|1><1|_T (x) A)
/// whose product is |0><0|_T (x) BA + |1><1|_T (x) AB, i.e. branch_a-then-
/// branch_b on the |0> block and the reverse on the |1> block.
std::vector<ControlledOp> switch_flat_ops(const SwitchProgram& prog);

/// Applies the switch to a state whose order qubit may be in any state
/// (|+> for an indefinite order, |0> collapses to the definite order).
void apply_switch(StateVector& s, const SwitchProgram& prog,
                  std::span<const double> params = {});

/// Small dense complex matrix, row-major. Verification-sized only.
struct CMatrix {
    std::size_t dim = 0;
    std::vector<cplx> a;

    explicit CMatrix(std::size_t d) : dim(d), a(d * d) {}
    cplx& at(std::size_t r, std::size_t c) { return a[r * dim + c]; }
    const cplx& at(std::size_t r, std::size_t c) const { return a[r * dim + c]; }

    static CMatrix identity(std::size_t d);
};

CMatrix matmul(const CMatrix& lhs, const CMatrix& rhs);

/// Unitary of a gate sequence, built column by column through the kernels.
CMatrix sequence_unitary(std::span<const GateOp> gates, int n_qubits,
                         std::span<const double> params = {});

/// The explicit block form of the switch on the full register: the operator
/// whose |0>_T block is (branch_b . branch_a) and whose |1>_T block is
/// (branch_a . branch_b). Retained as a test oracle; ConfigError above 5
/// total qubits.
CMatrix switch_dense_matrix(const SwitchProgram& prog,
                            std::span<const double> params = {});

/// M applied to the amplitudes of s.
StateVector matrix_apply(const CMatrix& m, const StateVector& s);

} // namespace icosim
