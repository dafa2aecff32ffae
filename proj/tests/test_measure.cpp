#include "doctest.h"

#include <cmath>
#include <vector>

#include "qtp/measure.hpp"
#include "qtp/statevec.hpp"
#include "test_helpers.hpp"

using namespace qtp;

namespace {

// Joint register [X1..Xn, A1 B1 ... An Bn] with pair i measuring (A_i, X_i).
StateVector teleport_joint(const StateVector& input, const ChannelSpec& spec) {
    return tensor(input, build_channel(spec));
}

std::vector<QuditPair> teleport_pairs(int n) {
    std::vector<QuditPair> pairs;
    for (int i = 0; i < n; ++i) pairs.push_back({n + 2 * i, i});
    return pairs;
}

}  // namespace

TEST_CASE("outcome rank round trip") {
    CHECK(outcome_rank(Outcome{{{0, 0}}}, 2) == 0);
    CHECK(outcome_rank(Outcome{{{1, 0}}}, 2) == 2);
    CHECK(outcome_rank(Outcome{{{1, 2}, {0, 1}}}, 3) == 5 * 9 + 1);
    for (int d : {2, 3})
        for (int n : {1, 2})
            for (std::size_t r = 0; r < dim_pow(d, 2 * n); ++r)
                CHECK(outcome_rank(outcome_from_rank(r, d, n), d) == r);
    CHECK_THROWS_AS(outcome_from_rank(16, 2, 1), std::invalid_argument);
}

TEST_CASE("probabilities are uniform over the teleportation joint") {
    // Any input against a zero-offset pair-product channel hits every
    // outcome with probability exactly d^-2n.
    for (int d : {2, 3})
        for (int n : {1, 2}) {
            if (dim_pow(d, 3 * n) > 1000) continue;
            const StateVector input = random_state(d, n, 11);
            const StateVector joint = teleport_joint(input, tps_channel(d, n));
            const OutcomeDistribution dist = outcome_distribution(joint, teleport_pairs(n));
            const double want = 1.0 / static_cast<double>(dim_pow(d, 2 * n));
            for (double p : dist.probs) CHECK(std::abs(p - want) <= 1e-12);
        }
}

TEST_CASE("residuals carry the inverse displacement of the outcome") {
    SUBCASE("qubit |0> through the zero outcome stays |0>") {
        const StateVector joint = teleport_joint(basis_state(2, 1, 0), tps_channel(2, 1));
        const ProjectionResult pr = project_outcome(joint, teleport_pairs(1), Outcome{{{0, 0}}});
        REQUIRE(pr.valid);
        CHECK(std::abs(pr.weight - 0.25) <= 1e-12);
        CHECK(test::max_state_diff(pr.residual, basis_state(2, 1, 0)) <= 1e-12);
    }
    SUBCASE("every qutrit outcome leaves the matching displaced input") {
        const StateVector input = random_state(3, 1, 5);
        const StateVector joint = teleport_joint(input, tps_channel(3, 1));
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) {
                const ProjectionResult pr =
                    project_outcome(joint, teleport_pairs(1), Outcome{{{k, l}}});
                REQUIRE(pr.valid);
                const LocalOperator v = weyl_v(3, {k, l});
                const StateVector want =
                    apply_local(input, LocalOperator{3, 1, adjoint(v.matrix)}, {0});
                CHECK(test::phase_aligned_diff(pr.residual, want) <= 1e-10);
            }
    }
}

TEST_CASE("the two measurement routes agree") {
    for (int d : {2, 3}) {
        for (int trial = 0; trial < 5; ++trial) {
            const StateVector joint = random_state(d, 3, 100 + trial * 10 + d);
            const std::vector<QuditPair> pairs{{1, 0}};
            const OutcomeDistribution dist = outcome_distribution(joint, pairs);
            double total = 0.0;
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    const ProjectionResult pr = project_outcome(joint, pairs, Outcome{{{k, l}}});
                    CHECK(std::abs(pr.weight - dist.probability(Outcome{{{k, l}}})) <= 1e-12);
                    total += pr.weight;
                }
            CHECK(std::abs(total - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("a pinned pair forces its outcome") {
    // Register [A, X, R] holding |Phi_00> on (A, X) times a random bystander:
    // the (A, X) measurement must always read (0, 0) and leave the bystander.
    const StateVector bystander = random_state(2, 1, 21);
    const StateVector joint = tensor(phi00(2), bystander);
    const std::vector<QuditPair> pairs{{0, 1}};
    const OutcomeDistribution dist = outcome_distribution(joint, pairs);
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            const Outcome o{{{k, l}}};
            if (k == 0 && l == 0) {
                CHECK(std::abs(dist.probability(o) - 1.0) <= 1e-12);
                const ProjectionResult pr = project_outcome(joint, pairs, o);
                REQUIRE(pr.valid);
                CHECK(test::max_state_diff(pr.residual, bystander) <= 1e-12);
            } else {
                CHECK(dist.probability(o) <= 1e-12);
                CHECK_FALSE(project_outcome(joint, pairs, o).valid);
            }
        }
}

TEST_CASE("sampling is deterministic and self-consistent") {
    const StateVector joint = random_state(3, 3, 8);
    const std::vector<QuditPair> pairs{{2, 0}};
    RngStream rng_a(17), rng_b(17);
    const MeasurementResult a = sample_product_phi(joint, pairs, rng_a);
    const MeasurementResult b = sample_product_phi(joint, pairs, rng_b);
    CHECK(a.outcome == b.outcome);
    CHECK(a.probability == b.probability);
    CHECK(test::max_state_diff(a.post_state, b.post_state) == 0.0);

    // the reported probability and residual must match the direct routes
    const OutcomeDistribution dist = outcome_distribution(joint, pairs);
    CHECK(a.probability == dist.probability(a.outcome));
    const ProjectionResult pr = project_outcome(joint, pairs, a.outcome);
    REQUIRE(pr.valid);
    CHECK(test::max_state_diff(a.post_state, pr.residual) <= 1e-15);
}

TEST_CASE("rotated-basis measurement") {
    SUBCASE("identity rotation reduces to the plain product measurement") {
        const StateVector joint = teleport_joint(random_state(2, 2, 3), tps_channel(2, 2));
        RngStream rng_a(4), rng_b(4);
        const MeasurementResult plain = sample_product_phi(joint, teleport_pairs(2), rng_a);
        const MeasurementResult rot =
            measure_xi(joint, teleport_pairs(2), identity_unitary(2, 2), rng_b);
        CHECK(plain.outcome == rot.outcome);
        CHECK(std::abs(plain.probability - rot.probability) <= 1e-15);
        CHECK(test::max_state_diff(plain.post_state, rot.post_state) <= 1e-14);
    }
    SUBCASE("rotating by the channel rotation restores uniform outcomes") {
        const GlobalUnitary ups = random_global_unitary(2, 2, 9);
        const StateVector joint =
            teleport_joint(random_state(2, 2, 13), ges_channel(2, 2, ups));
        StateVector frame = joint;
        std::vector<int> a_positions;
        for (const QuditPair& p : teleport_pairs(2)) a_positions.push_back(p.a);
        frame = apply_local(frame, LocalOperator{2, 2, adjoint(ups.matrix)}, a_positions);
        const OutcomeDistribution dist = outcome_distribution(frame, teleport_pairs(2));
        for (double p : dist.probs) CHECK(std::abs(p - 1.0 / 16.0) <= 1e-12);
    }
    SUBCASE("distribution equals overlap with explicit rotated basis states") {
        const GlobalUnitary ups = random_global_unitary(2, 2, 9);
        const StateVector input = random_state(2, 2, 13);
        const StateVector joint = teleport_joint(input, ges_channel(2, 2, ups));
        StateVector frame = joint;
        frame = apply_local(frame, LocalOperator{2, 2, adjoint(ups.matrix)}, {2, 4});
        const OutcomeDistribution dist = outcome_distribution(frame, teleport_pairs(2));

        // build each basis state on the measured qudits [A1, X1, A2, X2],
        // extend by identity on [B1, B2], and compare squared overlaps
        for (std::size_t r = 0; r < 16; ++r) {
            const Outcome o = outcome_from_rank(r, 2, 2);
            StateVector basis = tensor(gbs_state(2, o.labels[0]), gbs_state(2, o.labels[1]));
            basis = apply_local(basis, LocalOperator{2, 2, ups.matrix}, {0, 2});
            // overlap over the measured subsystem: contract joint against
            // the bra on (A_i, X_i), accumulating squared magnitude over B
            double prob = 0.0;
            const ProjectionResult pr = project_outcome(
                apply_local(joint, LocalOperator{2, 2, adjoint(ups.matrix)}, {2, 4}),
                teleport_pairs(2), o);
            prob = pr.weight;
            CHECK(std::abs(prob - dist.probs[r]) <= 1e-12);

            // cross-check one rank directly against the unrotated joint:
            // <Xi_o| joint> with Xi built by rotating the pair product
            double direct = 0.0;
            for (int b1 = 0; b1 < 2; ++b1)
                for (int b2 = 0; b2 < 2; ++b2) {
                    Cx amp{};
                    for (std::size_t idx = 0; idx < joint.amps.size(); ++idx) {
                        // joint digits [x1 x2 a1 b1 a2 b2], big-endian
                        const int x1 = static_cast<int>(idx / 32) % 2;
                        const int x2 = static_cast<int>(idx / 16) % 2;
                        const int a1 = static_cast<int>(idx / 8) % 2;
                        const int bb1 = static_cast<int>(idx / 4) % 2;
                        const int a2 = static_cast<int>(idx / 2) % 2;
                        const int bb2 = static_cast<int>(idx) % 2;
                        if (bb1 != b1 || bb2 != b2) continue;
                        // basis digits [a1 x1 a2 x2]
                        const std::size_t bidx = static_cast<std::size_t>(
                            a1 * 8 + x1 * 4 + a2 * 2 + x2);
                        amp += std::conj(basis.amps[bidx]) * joint.amps[idx];
                    }
                    direct += std::norm(amp);
                }
            CHECK(std::abs(direct - dist.probs[r]) <= 1e-12);
        }
    }
}

TEST_CASE("measurement input validation") {
    const StateVector joint = random_state(2, 3, 2);
    CHECK_THROWS_AS(project_outcome(joint, {{0, 0}}, Outcome{{{0, 0}}}),
                    std::invalid_argument);  // overlapping pair
    CHECK_THROWS_AS(project_outcome(joint, {{0, 3}}, Outcome{{{0, 0}}}),
                    std::invalid_argument);  // position out of range
    CHECK_THROWS_AS(project_outcome(joint, {{0, 1}}, Outcome{{{0, 2}}}),
                    std::invalid_argument);  // label out of range
    CHECK_THROWS_AS(project_outcome(joint, {{0, 1}}, Outcome{{{0, 0}, {0, 0}}}),
                    std::invalid_argument);  // outcome count mismatch
    const StateVector pair = phi00(2);
    CHECK_THROWS_AS(outcome_distribution(pair, {{0, 1}}), std::invalid_argument);
    const StateVector three = random_state(2, 3, 3);
    RngStream rng(1);
    CHECK_THROWS_AS(measure_xi(three, {{0, 1}}, identity_unitary(2, 2), rng),
                    std::invalid_argument);  // rotation arity mismatch
}
