#include <doctest.h>

#include <cmath>
#include <numbers>

#include "icosim/state.hpp"
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

std::vector<cplx> amps_of(const StateVector& s) {
    return {s.amplitudes().begin(), s.amplitudes().end()};
}

} // namespace

TEST_CASE("new_zero_state basis states and cap") {
    const StateVector one = new_zero_state(1);
    REQUIRE(one.dim() == 2);
    CHECK(one.amp(0) == cplx(1.0, 0.0));
    CHECK(one.amp(1) == cplx(0.0, 0.0));

    const StateVector four = new_zero_state(4);
    REQUIRE(four.dim() == 16);
    CHECK(four.amp(0) == cplx(1.0, 0.0));
    for (std::size_t i = 1; i < four.dim(); ++i) {
        CHECK(four.amp(i) == cplx(0.0, 0.0));
    }

    CHECK_THROWS_AS(new_zero_state(13), ConfigError);
    CHECK_THROWS_AS(new_zero_state(0), ConfigError);
}

TEST_CASE("RX(0) is the identity") {
    Rng rng(11);
    StateVector s = testutil::random_state(rng, 3);
    const std::vector<cplx> before = amps_of(s);
    apply_gate(s, GateOp::rx(1, 0.0));
    for (std::size_t i = 0; i < s.dim(); ++i) {
        CHECK(s.amp(i) == before[i]);
    }
}

TEST_CASE("Hadamard on |0>") {
    StateVector s = new_zero_state(1);
    apply_gate(s, GateOp::h(0));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s.amp(0) - cplx(r, 0.0)) < 1e-15);
    CHECK(std::abs(s.amp(1) - cplx(r, 0.0)) < 1e-15);
}

TEST_CASE("RZ(pi/2) against the dense oracle") {
    StateVector s = new_zero_state(1);
    apply_gate(s, GateOp::h(0));
    const std::vector<cplx> in = amps_of(s);
    apply_gate(s, GateOp::rz(0, std::numbers::pi / 2.0));

    const std::vector<GateOp> gates = {GateOp::rz(0, std::numbers::pi / 2.0)};
    const std::vector<cplx> expected = refsim::apply_circuit(gates, 1, {}, in);
    CHECK(refsim::max_abs_diff(amps_of(s), expected) < 1e-12);
}

TEST_CASE("apply_sequence basics") {
    Rng rng(5);

    SUBCASE("empty list is the identity") {
        StateVector s = testutil::random_state(rng, 2);
        const std::vector<cplx> before = amps_of(s);
        apply_sequence(s, std::span<const GateOp>{});
        CHECK(amps_of(s) == before);
    }

    SUBCASE("inverse rotation pair restores the state") {
        StateVector s = testutil::random_state(rng, 2);
        const std::vector<cplx> before = amps_of(s);
        const std::vector<GateOp> pair = {GateOp::rx(1, 0.8), GateOp::rx(1, -0.8)};
        apply_sequence(s, pair);
        CHECK(refsim::max_abs_diff(amps_of(s), before) < 1e-14);
    }

    SUBCASE("random 10-gate circuit matches the Kronecker oracle") {
        const std::vector<GateOp> gates = testutil::random_circuit(rng, 3, 10);
        StateVector s = new_zero_state(3);
        apply_sequence(s, gates);
        const std::vector<cplx> e0 = amps_of(new_zero_state(3));
        const std::vector<cplx> expected = refsim::apply_circuit(gates, 3, {}, e0);
        CHECK(refsim::max_abs_diff(amps_of(s), expected) < 1e-10);
    }
}

TEST_CASE("sparse-vs-dense equivalence on random circuits") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(uniform_below(rng, 3)); // 2..4
        const int len = 1 + static_cast<int>(uniform_below(rng, 50));
        const std::vector<GateOp> gates = testutil::random_circuit(rng, n, len);
        StateVector s = testutil::random_state(rng, n);
        const std::vector<cplx> in = amps_of(s);
        apply_sequence(s, gates);
        const std::vector<cplx> expected = refsim::apply_circuit(gates, n, {}, in);
        CHECK(refsim::max_abs_diff(amps_of(s), expected) < 1e-10);
        CHECK(std::abs(s.norm() - 1.0) < 1e-10);
    }
}

TEST_CASE("embedded gate matrices are unitary") {
    // Matrix of each kernel, built by applying it to basis states.
    auto kernel_matrix = [](const GateOp& g, int n) {
        const std::vector<GateOp> single = {g};
        return to_ref(sequence_unitary(single, n));
    };
    const std::vector<GateOp> kinds = {GateOp::rx(1, 0.37), GateOp::ry(2, -1.2),
                                       GateOp::rz(0, 2.6), GateOp::h(1), GateOp::cnot(0, 2)};
    for (const GateOp& g : kinds) {
        CHECK(refsim::unitarity_error(kernel_matrix(g, 3)) < 1e-12);
    }
}

TEST_CASE("gate validation") {
    StateVector s = new_zero_state(2);
    CHECK_THROWS_AS(apply_gate(s, GateOp::rx(2, 0.1)), StructuralError);
    CHECK_THROWS_AS(apply_gate(s, GateOp::cnot(1, 1)), StructuralError);
    CHECK_THROWS_AS(apply_gate(s, GateOp::cnot(-1, 0)), StructuralError);
    CHECK_THROWS_AS(apply_gate(s, GateOp::rx_param(0, 0), std::span<const double>{}),
                    StructuralError);
}

TEST_CASE("expectation of Z") {
    SUBCASE("Z eigenstate") {
        const StateVector s = new_zero_state(2);
        CHECK(expectation(s, Observable{0}) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("equal superposition") {
        StateVector s = new_zero_state(1);
        apply_gate(s, GateOp::h(0));
        CHECK(std::abs(expectation(s, Observable{0})) < 1e-12);
    }
    SUBCASE("closed form for RX") {
        StateVector s = new_zero_state(1);
        apply_gate(s, GateOp::rx(0, 0.7));
        CHECK(expectation(s, Observable{0}) == doctest::Approx(std::cos(0.7)).epsilon(1e-12));
    }
    SUBCASE("index out of range") {
        const StateVector s = new_zero_state(2);
        CHECK_THROWS_AS(expectation(s, Observable{2}), StructuralError);
    }
    SUBCASE("always within [-1, 1]") {
        Rng rng(77);
        for (int i = 0; i < 10; ++i) {
            const StateVector s = testutil::random_state(rng, 3);
            const double v = expectation(s, Observable{1});
            CHECK(v >= -1.0 - 1e-12);
            CHECK(v <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("expectation over the computation register") {
    // Register layout: 3 computation qubits, order qubit appended last.
    SUBCASE("disentangled order qubit in |+>") {
        StateVector s = new_zero_state(4);
        apply_gate(s, GateOp::h(3));
        CHECK(expectation_on_computation(s, Observable{0}, 3) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("order qubit in |0> reduces to the plain expectation") {
        Rng rng(3);
        StateVector s = new_zero_state(4);
        // random evolution on computation qubits only
        const std::vector<GateOp> gates = testutil::random_circuit(rng, 3, 12);
        for (const GateOp& g : gates) {
            apply_gate(s, g);
        }
        CHECK(expectation_on_computation(s, Observable{1}, 3) ==
              doctest::Approx(expectation(s, Observable{1})).epsilon(1e-14));
    }
    SUBCASE("entangled register matches the partial-trace oracle") {
        Rng rng(9);
        for (int trial = 0; trial < 10; ++trial) {
            const StateVector s = testutil::random_state(rng, 4);
            const refsim::Mat rho = refsim::trace_out_last_qubit(s.amplitudes());
            const double expected = refsim::z_expectation_from_density(rho, 0, 3);
            CHECK(expectation_on_computation(s, Observable{0}, 3) ==
                  doctest::Approx(expected).epsilon(1e-10));
        }
    }
    SUBCASE("observable on the order qubit is rejected") {
        const StateVector s = new_zero_state(4);
        CHECK_THROWS_AS(expectation_on_computation(s, Observable{3}, 3), StructuralError);
    }
}
