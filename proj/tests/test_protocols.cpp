#include "doctest.h"

#include <cmath>
#include <vector>

#include "qtp/protocols.hpp"
#include "test_helpers.hpp"

using namespace qtp;

namespace {

// Bob's expected pre-correction state: the inverse displacement of the
// announced label applied per qudit.
StateVector displaced_input(const StateVector& input, const Outcome& announced) {
    StateVector s = input;
    for (int i = 0; i < input.m; ++i) {
        const LocalOperator v = weyl_v(input.d, announced.labels[static_cast<std::size_t>(i)]);
        s = apply_local(s, LocalOperator{input.d, 1, adjoint(v.matrix)}, {i});
    }
    return s;
}

}  // namespace

TEST_CASE("register position helpers") {
    const std::vector<QuditPair> pairs = measurement_pairs(2);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].a == 2);
    CHECK(pairs[0].x == 0);
    CHECK(pairs[1].a == 4);
    CHECK(pairs[1].x == 1);
    CHECK(alice_a_positions(3) == std::vector<int>{3, 5, 7});
    CHECK(bob_positions(3) == std::vector<int>{4, 6, 8});
}

TEST_CASE("effective outcome subtracts the channel offsets") {
    const Outcome raw{{{1, 0}}};
    const Outcome eff = effective_outcome(raw, {{1, 1}}, 2);
    CHECK(eff.labels[0].k == 0);
    CHECK(eff.labels[0].l == 1);

    const Outcome raw3{{{0, 2}, {1, 1}}};
    const Outcome eff3 = effective_outcome(raw3, {{2, 0}, {1, 2}}, 3);
    CHECK(eff3 == Outcome{{{1, 2}, {0, 2}}});

    CHECK_THROWS_AS(effective_outcome(raw, {{0, 0}, {0, 0}}, 2), std::invalid_argument);
}

TEST_CASE("correction operators") {
    SUBCASE("zero label corrects with the identity") {
        const std::vector<LocalOperator> ops = corrections(Outcome{{{0, 0}}}, 3);
        CHECK(max_abs_diff(ops[0].matrix, Matrix::identity(3)) == 0.0);
    }
    SUBCASE("qubit flip label corrects with the flip") {
        const std::vector<LocalOperator> ops = corrections(Outcome{{{0, 1}}}, 2);
        Matrix flip(2, 2);
        flip(0, 1) = 1;
        flip(1, 0) = 1;
        CHECK(max_abs_diff(ops[0].matrix, flip) <= 1e-15);
    }
    SUBCASE("corrections are unitary at d=5") {
        const std::vector<LocalOperator> ops = corrections(Outcome{{{3, 2}}}, 5);
        CHECK(unitarity_error(ops[0].matrix) <= 1e-12);
    }
    SUBCASE("apply_corrections rejects a label count mismatch") {
        CHECK_THROWS_AS(apply_corrections(random_state(2, 2, 1), Outcome{{{0, 0}}}),
                        std::invalid_argument);
    }
}

TEST_CASE("fidelity basics") {
    const StateVector s = random_state(3, 2, 6);
    CHECK(std::abs(fidelity(s, s) - 1.0) <= 1e-12);
    CHECK(fidelity(basis_state(2, 1, 0), basis_state(2, 1, 1)) == 0.0);
}

TEST_CASE("qubit teleportation over a single pair") {
    const StateVector input = random_state(2, 1, 31);
    const ChannelSpec spec = tps_channel(2, 1);
    const JointState js = prepare_joint(Protocol::Dn, input, spec);

    SUBCASE("every forced outcome corrects back to the input") {
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
                const Outcome o{{{k, l}}};
                const ProjectionResult pr =
                    project_outcome(js.joint, measurement_pairs(1), o);
                REQUIRE(pr.valid);
                CHECK(std::abs(pr.weight - 0.25) <= 1e-12);
                CHECK(test::phase_aligned_diff(pr.residual, displaced_input(input, o)) <=
                      1e-12);
                const StateVector fixed = apply_corrections(pr.residual, o);
                CHECK(test::phase_aligned_diff(fixed, input) <= 1e-12);
                CHECK(std::abs(fidelity(fixed, input) - 1.0) <= 1e-12);
            }
    }
    SUBCASE("sampled runs reach unit fidelity") {
        for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
            RngStream rng(seed);
            const Transcript t = run_dn(input, spec, rng);
            CHECK(std::abs(t.fidelity - 1.0) <= 1e-12);
            CHECK(t.seed == seed);
            CHECK_FALSE(t.pre_rotated);
            CHECK(t.classical_message.dits.size() == 2);
        }
    }
}

TEST_CASE("qutrit pair-product teleportation") {
    SUBCASE("basis input through the zero outcome is untouched") {
        const StateVector input = basis_state(3, 2, 0);
        const JointState js = prepare_joint(Protocol::Dn, input, tps_channel(3, 2));
        const ProjectionResult pr =
            project_outcome(js.joint, measurement_pairs(2), Outcome{{{0, 0}, {0, 0}}});
        REQUIRE(pr.valid);
        CHECK(test::max_state_diff(pr.residual, input) <= 1e-12);
    }
    SUBCASE("random inputs teleport with pre-correction oracle") {
        const ChannelSpec spec = tps_channel(3, 2);
        for (std::uint64_t seed : {10, 20, 30}) {
            const StateVector input = random_state(3, 2, seed);
            RngStream rng(seed);
            const Transcript t = run_dn(input, spec, rng);
            CHECK(t.fidelity >= 1.0 - 1e-10);
            CHECK(test::phase_aligned_diff(t.bob_pre_correction,
                                           displaced_input(input, t.outcome)) <= 1e-10);
            CHECK(test::phase_aligned_diff(t.bob_post_correction, input) <= 1e-10);
        }
    }
}

TEST_CASE("channel offsets are compensated in the announcement") {
    const ChannelSpec spec = tps_channel(3, 2, {{1, 2}, {2, 0}});
    for (std::uint64_t seed : {7, 8, 9}) {
        const StateVector input = random_state(3, 2, seed + 100);
        RngStream rng(seed);
        const Transcript t = run_dn(input, spec, rng);
        CHECK(t.fidelity >= 1.0 - 1e-10);
        // the announced label, not the raw one, matches Bob's displacement
        CHECK(test::phase_aligned_diff(t.bob_pre_correction,
                                       displaced_input(input, t.outcome)) <= 1e-10);
        // message carries the announced labels dit by dit
        REQUIRE(t.classical_message.dits.size() == 4);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(t.classical_message.dits[2 * i] == t.outcome.labels[i].k);
            CHECK(t.classical_message.dits[2 * i + 1] == t.outcome.labels[i].l);
        }
    }
}

TEST_CASE("rotated-channel teleportation") {
    SUBCASE("identity rotation reproduces the pair-product run") {
        const StateVector input = random_state(2, 2, 41);
        RngStream rng_a(6), rng_b(6);
        const Transcript plain = run_dn(input, tps_channel(2, 2), rng_a);
        const Transcript rot =
            run_dpn(input, ges_channel(2, 2, identity_unitary(2, 2)), rng_b);
        CHECK(plain.outcome == rot.outcome);
        CHECK(plain.classical_message == rot.classical_message);
        CHECK(test::max_state_diff(plain.bob_pre_correction, rot.bob_pre_correction) == 0.0);
        CHECK(test::max_state_diff(plain.bob_post_correction, rot.bob_post_correction) == 0.0);
        CHECK(plain.fidelity == rot.fidelity);
    }
    SUBCASE("entangling rotation still teleports exactly") {
        const ChannelSpec spec = ges_channel(2, 2, yeo_chua_upsilon(0.7, 1.1));
        for (std::uint64_t seed : {1, 2, 3}) {
            const StateVector input = random_state(2, 2, seed + 50);
            RngStream rng(seed);
            const Transcript t = run_dpn(input, spec, rng);
            CHECK(t.fidelity >= 1.0 - 1e-10);
        }
    }
    SUBCASE("haar rotation with offsets teleports exactly") {
        const ChannelSpec spec =
            ges_channel(3, 1, random_global_unitary(3, 1, 77), {{2, 1}});
        for (std::uint64_t seed : {4, 5, 6}) {
            const StateVector input = random_state(3, 1, seed + 60);
            RngStream rng(seed);
            const Transcript t = run_dpn(input, spec, rng);
            CHECK(t.fidelity >= 1.0 - 1e-10);
        }
    }
}

TEST_CASE("doubly rotated channel teleportation") {
    SUBCASE("identity receiver rotation reproduces the singly rotated run") {
        const GlobalUnitary ups = random_global_unitary(2, 2, 3);
        const StateVector input = random_state(2, 2, 42);
        RngStream rng_a(9), rng_b(9);
        const Transcript a = run_dpn(input, ges_channel(2, 2, ups), rng_a);
        const Transcript b =
            run_dppn(input, ges2_channel(2, 2, ups, identity_unitary(2, 2)), rng_b);
        CHECK(a.outcome == b.outcome);
        CHECK(a.classical_message == b.classical_message);
        CHECK(test::max_state_diff(a.bob_pre_correction, b.bob_pre_correction) == 0.0);
        CHECK(test::max_state_diff(a.bob_post_correction, b.bob_post_correction) == 0.0);
        CHECK(a.fidelity == b.fidelity);
        CHECK_FALSE(a.pre_rotated);
        CHECK(b.pre_rotated);
    }
    SUBCASE("haar rotations on both halves teleport exactly") {
        const ChannelSpec spec = ges2_channel(2, 2, random_global_unitary(2, 2, 3),
                                              random_global_unitary(2, 2, 4));
        for (std::uint64_t seed : {11, 12, 13}) {
            const StateVector input = random_state(2, 2, seed);
            RngStream rng(seed);
            const Transcript t = run_dppn(input, spec, rng);
            CHECK(t.fidelity >= 1.0 - 1e-10);
            CHECK(t.pre_rotated);
        }
    }
}

TEST_CASE("outcome statistics and receiver independence") {
    SUBCASE("outcome distribution is uniform for each protocol") {
        const StateVector input = random_state(2, 1, 70);
        const std::vector<std::pair<Protocol, ChannelSpec>> cases{
            {Protocol::Dn, tps_channel(2, 1)},
            {Protocol::Dpn, ges_channel(2, 1, random_global_unitary(2, 1, 5))},
            {Protocol::Dppn, ges2_channel(2, 1, random_global_unitary(2, 1, 5),
                                          random_global_unitary(2, 1, 6))},
        };
        for (const auto& [p, spec] : cases) {
            const JointState js = prepare_joint(p, input, spec);
            StateVector frame = js.joint;
            if (spec.upsilon)
                frame = apply_local(frame,
                                    LocalOperator{2, 1, adjoint(spec.upsilon->matrix)},
                                    alice_a_positions(1));
            const OutcomeDistribution dist =
                outcome_distribution(frame, measurement_pairs(1));
            for (double pr : dist.probs) CHECK(std::abs(pr - 0.25) <= 1e-10);
        }
    }
    SUBCASE("averaging over outcomes leaves the receiver maximally mixed") {
        const StateVector input = random_state(3, 1, 71);
        const ChannelSpec spec = ges_channel(3, 1, random_global_unitary(3, 1, 7));
        const JointState js = prepare_joint(Protocol::Dpn, input, spec);
        const StateVector frame = apply_local(
            js.joint, LocalOperator{3, 1, adjoint(spec.upsilon->matrix)},
            alice_a_positions(1));
        Matrix avg(3, 3);
        for (std::size_t r = 0; r < 9; ++r) {
            const ProjectionResult pr =
                project_outcome(frame, measurement_pairs(1), outcome_from_rank(r, 3, 1));
            if (!pr.valid) continue;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    avg(i, j) += pr.weight * pr.residual.amps[static_cast<std::size_t>(i)] *
                                 std::conj(pr.residual.amps[static_cast<std::size_t>(j)]);
        }
        Matrix want = Matrix::identity(3);
        for (Cx& e : want.a) e /= 3.0;
        CHECK(max_abs_diff(avg, want) <= 1e-10);
    }
}

TEST_CASE("run argument validation") {
    const StateVector input = random_state(2, 1, 1);
    RngStream rng(1);
    CHECK_THROWS_AS(run_dn(input, ges_channel(2, 1, identity_unitary(2, 1)), rng),
                    std::invalid_argument);  // wrong channel kind
    CHECK_THROWS_AS(run_dpn(input, tps_channel(2, 1), rng), std::invalid_argument);
    CHECK_THROWS_AS(run_dn(random_state(3, 1, 1), tps_channel(2, 1), rng),
                    std::invalid_argument);  // dimension mismatch
    CHECK_THROWS_AS(run_dn(random_state(2, 2, 1), tps_channel(2, 1), rng),
                    std::invalid_argument);  // qudit count mismatch
    CHECK_THROWS_AS(protocol_from_name("bogus"), std::invalid_argument);
    CHECK(protocol_from_name("dppn") == Protocol::Dppn);
}
