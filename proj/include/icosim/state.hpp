#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "icosim/errors.hpp"
#include "icosim/gates.hpp"

namespace icosim {

// Desk-scale cap; the dense 2^n amplitude vector is meant to stay small.
inline constexpr int kMaxQubits = 12;

/// Dense statevector over n qubits.
///
/// Qubit ordering convention (fixed project-wide): qubit 0 is the most
/// significant bit of the amplitude index, so basis index
/// i = sum_q bit(q) << (n-1-q). A register written |q0 q1 ... q_{n-1}>
/// therefore reads left to right like the binary expansion of i.
class StateVector {
public:
    explicit StateVector(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }

    cplx& amp(std::size_t i) { return amps_[i]; }
    const cplx& amp(std::size_t i) const { return amps_[i]; }

    std::span<cplx> amplitudes() { return amps_; }
    std::span<const cplx> amplitudes() const { return amps_; }

    double norm() const;

private:
    int n_qubits_;
    std::vector<cplx> amps_;
};

/// |0...0> on n qubits. 1 <= n_qubits <= kMaxQubits.
StateVector new_zero_state(int n_qubits);

/// Bit position of qubit q in the amplitude index (qubit 0 = MSB).
inline int qubit_bit(int n_qubits, int q) { return n_qubits - 1 - q; }

// Low-level kernels. ctrl_mask/ctrl_match restrict application to amplitude
// indices i with (i & ctrl_mask) == ctrl_match; pass 0/0 for unconditional.
void apply_1q(StateVector& s, const Mat2& m, int target,
              std::uint64_t ctrl_mask = 0, std::uint64_t ctrl_match = 0);
void apply_x(StateVector& s, int target,
             std::uint64_t ctrl_mask = 0, std::uint64_t ctrl_match = 0);

void apply_gate(StateVector& s, const GateOp& g, std::span<const double> params = {});
void apply_gate(StateVector& s, const ControlledOp& g, std::span<const double> params = {});
void apply_inverse_gate(StateVector& s, const ControlledOp& g, std::span<const double> params = {});

/// Applies gates left to right in list order.
void apply_sequence(StateVector& s, std::span<const GateOp> gates,
                    std::span<const double> params = {});
void apply_sequence(StateVector& s, std::span<const ControlledOp> gates,
                    std::span<const double> params = {});

/// Pauli-Z on one qubit, identity elsewhere. Hermitian, eigenvalues {+1,-1}.
struct Observable {
    int qubit = 0;
};

/// <state|Z_q|state>, in [-1, 1].
double expectation(const StateVector& s, const Observable& obs);

/// Same value as `expectation`, but rejects observables that touch anything
/// outside the computation register 0..n_comp-1 (the order qubit must stay
/// unmeasured). Equals Tr[rho_comp * O] with the order qubit traced out.
double expectation_on_computation(const StateVector& s, const Observable& obs, int n_comp);

/// |s> -> O|s>.
void apply_observable(StateVector& s, const Observable& obs);

/// <a|b>.
cplx inner_product(const StateVector& a, const StateVector& b);

} // namespace icosim
