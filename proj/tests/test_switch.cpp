#include <doctest.h>

#include <cmath>

#include "icosim/circuits.hpp"
#include "icosim/switch_op.hpp"
#include "reference.hpp"
#include "testutil.hpp"

using namespace icosim;

namespace {

refsim::Mat to_ref(const CMatrix& m) {
    refsim::Mat out(m.dim);
    out.a = m.a;
    return out;
}

// Matrix of the two-stage controlled decomposition, columns via apply_switch.
refsim::Mat stage_matrix(const SwitchProgram& prog, std::span<const double> params) {
    const std::size_t dim = std::size_t{1} << prog.n_total();
    refsim::Mat m(dim);
    for (std::size_t col = 0; col < dim; ++col) {
        StateVector s(prog.n_total());
        s.amp(0) = cplx(0.0, 0.0);
        s.amp(col) = cplx(1.0, 0.0);
        apply_switch(s, prog, params);
        for (std::size_t row = 0; row < dim; ++row) {
            m.at(row, col) = s.amp(row);
        }
    }
    return m;
}

// Eq-style block operator rebuilt entirely on the reference side.
refsim::Mat reference_block(const SwitchProgram& prog, std::span<const double> params) {
    const refsim::Mat ua = refsim::circuit_unitary(prog.branch_a, prog.n_comp, params);
    const refsim::Mat ub = refsim::circuit_unitary(prog.branch_b, prog.n_comp, params);
    refsim::Mat p0(2);
    p0.at(0, 0) = cplx(1.0, 0.0);
    refsim::Mat p1(2);
    p1.at(1, 1) = cplx(1.0, 0.0);
    refsim::Mat m(std::size_t{1} << prog.n_total());
    const refsim::Mat first = refsim::kron(refsim::matmul(ub, ua), p0);
    const refsim::Mat second = refsim::kron(refsim::matmul(ua, ub), p1);
    for (std::size_t i = 0; i < m.a.size(); ++i) {
        m.a[i] = first.a[i] + second.a[i];
    }
    return m;
}

SwitchProgram random_program(Rng& rng, int n_comp, int len_a, int len_b) {
    SwitchProgram prog;
    prog.n_comp = n_comp;
    prog.branch_a = testutil::random_circuit(rng, n_comp, len_a);
    prog.branch_b = testutil::random_circuit(rng, n_comp, len_b);
    return prog;
}

} // namespace

TEST_CASE("prepare_order_qubit") {
    StateVector s = new_zero_state(4);
    prepare_order_qubit(s, 3);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s.amp(0) - cplx(r, 0.0)) < 1e-15);
    CHECK(std::abs(s.amp(1) - cplx(r, 0.0)) < 1e-15);
    for (std::size_t i = 2; i < s.dim(); ++i) {
        CHECK(std::abs(s.amp(i)) < 1e-15);
    }
    CHECK(std::abs(s.norm() - 1.0) < 1e-12);

    // dense H (x) I_8 oracle (order qubit is the LSB)
    StateVector t = new_zero_state(4);
    const refsim::Mat h =
        refsim::kron(refsim::Mat::identity(8), refsim::gate2(GateKind::H));
    const std::vector<cplx> expected = refsim::matvec(h, t.amplitudes());
    CHECK(refsim::max_abs_diff(s.amplitudes(), expected) < 1e-15);
}

TEST_CASE("switch collapses under a definite order qubit") {
    Rng rng(41);
    const SwitchProgram prog = random_program(rng, 3, 5, 7);

    SUBCASE("order qubit |0>: branch_a then branch_b") {
        StateVector comp = testutil::random_state(rng, 3);
        StateVector full(4);
        for (std::size_t i = 0; i < comp.dim(); ++i) {
            full.amp(2 * i) = comp.amp(i); // order bit = 0
            full.amp(2 * i + 1) = cplx(0.0, 0.0);
        }
        apply_switch(full, prog, {});
        apply_sequence(comp, prog.branch_a);
        apply_sequence(comp, prog.branch_b);
        for (std::size_t i = 0; i < comp.dim(); ++i) {
            CHECK(std::abs(full.amp(2 * i) - comp.amp(i)) < 1e-12);
            CHECK(std::abs(full.amp(2 * i + 1)) < 1e-15);
        }
    }

    SUBCASE("order qubit |1>: branch_b then branch_a") {
        StateVector comp = testutil::random_state(rng, 3);
        StateVector full(4);
        full.amp(0) = cplx(0.0, 0.0);
        for (std::size_t i = 0; i < comp.dim(); ++i) {
            full.amp(2 * i + 1) = comp.amp(i); // order bit = 1
        }
        apply_switch(full, prog, {});
        apply_sequence(comp, prog.branch_b);
        apply_sequence(comp, prog.branch_a);
        for (std::size_t i = 0; i < comp.dim(); ++i) {
            CHECK(std::abs(full.amp(2 * i + 1) - comp.amp(i)) < 1e-12);
            CHECK(std::abs(full.amp(2 * i)) < 1e-15);
        }
    }
}

TEST_CASE("commuting branches leave the order qubit in |+>") {
    // Both branches rotate the same qubit about Z, so the two orders agree.
    SwitchProgram prog;
    prog.n_comp = 3;
    prog.branch_a = {GateOp::rz(1, 0.4)};
    prog.branch_b = {GateOp::rz(1, 1.1)};

    Rng rng(43);
    StateVector comp = testutil::random_state(rng, 3);
    StateVector full(4);
    full.amp(0) = cplx(0.0, 0.0);
    for (std::size_t i = 0; i < comp.dim(); ++i) {
        full.amp(2 * i) = comp.amp(i);
    }
    prepare_order_qubit(full, prog.order_qubit());
    apply_switch(full, prog, {});

    const refsim::Mat rho = refsim::reduced_last_qubit(full.amplitudes());
    CHECK(refsim::fidelity_with_plus(rho) == doctest::Approx(1.0).epsilon(1e-10));

    // output equals the definite order on the computation register
    apply_sequence(comp, prog.branch_a);
    apply_sequence(comp, prog.branch_b);
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < comp.dim(); ++i) {
        CHECK(std::abs(full.amp(2 * i) - r * comp.amp(i)) < 1e-12);
        CHECK(std::abs(full.amp(2 * i + 1) - r * comp.amp(i)) < 1e-12);
    }

    // amplitudes against the dense oracle
    StateVector again(4);
    again.amp(0) = cplx(0.0, 0.0);
    StateVector comp2 = testutil::random_state(rng, 3);
    for (std::size_t i = 0; i < comp2.dim(); ++i) {
        again.amp(2 * i) = comp2.amp(i);
    }
    prepare_order_qubit(again, prog.order_qubit());
    const StateVector via_matrix = matrix_apply(switch_dense_matrix(prog, {}), again);
    apply_switch(again, prog, {});
    CHECK(refsim::max_abs_diff(again.amplitudes(), via_matrix.amplitudes()) < 1e-10);
}

TEST_CASE("switch_dense_matrix") {
    SUBCASE("identity branches give the identity") {
        SwitchProgram prog;
        prog.n_comp = 2;
        const CMatrix m = switch_dense_matrix(prog, {});
        CHECK(refsim::max_abs_diff(to_ref(m), refsim::Mat::identity(8)) == 0.0);
    }

    SUBCASE("unitary for random parameter draws") {
        Rng rng(47);
        SwitchProgram prog;
        prog.n_comp = 3;
        const AnsatzSpec spec{3, 2};
        prog.branch_b = build_ansatz(spec);
        for (int trial = 0; trial < 5; ++trial) {
            prog.branch_a = testutil::random_circuit(rng, 3, 6);
            const std::vector<double> params =
                testutil::random_params(rng, static_cast<std::size_t>(spec.n_params()));
            const CMatrix m = switch_dense_matrix(prog, params);
            CHECK(refsim::unitarity_error(to_ref(m)) < 1e-12);
        }
    }

    SUBCASE("matrix application equals apply_switch") {
        Rng rng(53);
        for (int trial = 0; trial < 5; ++trial) {
            const SwitchProgram prog = random_program(rng, 3, 8, 8);
            StateVector s = testutil::random_state(rng, 4);
            const StateVector via_matrix = matrix_apply(switch_dense_matrix(prog, {}), s);
            apply_switch(s, prog, {});
            CHECK(refsim::max_abs_diff(s.amplitudes(), via_matrix.amplitudes()) < 1e-10);
        }
    }

    SUBCASE("size cap") {
        SwitchProgram prog;
        prog.n_comp = 5; // 6 qubits total
        CHECK_THROWS_AS(switch_dense_matrix(prog, {}), ConfigError);
    }
}

TEST_CASE("two-stage decomposition equals the block operator") {
    Rng rng(59);
    SwitchProgram prog;
    prog.n_comp = 3;
    const AnsatzSpec spec{3, 2};
    prog.branch_b = build_ansatz(spec);
    for (int trial = 0; trial < 3; ++trial) {
        prog.branch_a = testutil::random_circuit(rng, 3, 5);
        const std::vector<double> params =
            testutil::random_params(rng, static_cast<std::size_t>(spec.n_params()));
        const refsim::Mat staged = stage_matrix(prog, params);
        CHECK(refsim::max_abs_diff(staged, reference_block(prog, params)) < 1e-12);
        CHECK(refsim::max_abs_diff(staged, to_ref(switch_dense_matrix(prog, params))) < 1e-12);
        CHECK(refsim::unitarity_error(staged) < 1e-12);
    }
}

TEST_CASE("branches must stay off the order qubit") {
    SwitchProgram prog;
    prog.n_comp = 3;
    prog.branch_a = {GateOp::rx(3, 0.2)};
    StateVector s(4);
    CHECK_THROWS_AS(apply_switch(s, prog, {}), StructuralError);

    prog.branch_a = {GateOp::cnot(3, 0)};
    CHECK_THROWS_AS(apply_switch(s, prog, {}), StructuralError);
}
