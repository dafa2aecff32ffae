#pragma once

#include <vector>

#include "qtp/channels.hpp"
#include "qtp/rng.hpp"
#include "qtp/weyl.hpp"

namespace qtp {

/*
 * Projective measurement of designated qudit pairs in the product
 * generalized-Bell basis. Pair i is measured against <Phi_(k_i,l_i)| with
 * the Bell state's first digit on pair.a and second digit on pair.x.
 *
 * Two independent routes compute the same physics:
 *   outcome_distribution  rotates every pair by the Bell basis change and
 *                         marginalizes amplitude magnitudes (fast);
 *   project_outcome       contracts the joint state directly against the
 *                         product bra for one outcome (simple).
 * The sampler uses the first for the draw and the second for the residual,
 * so the routes cross-check each other in every sampled run.
 */

// One measured pair: position of the channel-side qudit (a) and of the
// input-side qudit (x) inside the joint register.
struct QuditPair {
    int a = 0;
    int x = 0;
};

// Result labels for all n pairs, in pair order.
struct Outcome {
    std::vector<BellLabel> labels;

    friend bool operator==(const Outcome& lhs, const Outcome& rhs) {
        return lhs.labels == rhs.labels;
    }
};

// Outcomes ranked as the big-endian base-d dit string k1 l1 k2 l2 ... kn ln.
std::size_t outcome_rank(const Outcome& outcome, int d);
Outcome outcome_from_rank(std::size_t rank, int d, int n);

// Unnormalized projection of one outcome. weight is the outcome
// probability; valid is false when the weight is numerically zero, in
// which case residual is meaningless.
struct ProjectionResult {
    double weight = 0.0;
    bool valid = false;
    StateVector residual;  // over the unmeasured qudits, ascending order
};

struct MeasurementResult {
    Outcome outcome;
    double probability = 0.0;
    StateVector post_state;  // normalized residual over unmeasured qudits
};

// All d^2n outcome probabilities, indexed by outcome_rank.
struct OutcomeDistribution {
    int d = 0;
    int n = 0;
    std::vector<double> probs;

    double probability(const Outcome& outcome) const {
        return probs[outcome_rank(outcome, d)];
    }
};

ProjectionResult project_outcome(const StateVector& joint,
                                 const std::vector<QuditPair>& pairs,
                                 const Outcome& outcome);

OutcomeDistribution outcome_distribution(const StateVector& joint,
                                         const std::vector<QuditPair>& pairs);

// Exact categorical draw over the full distribution; deterministic given
// the stream state.
MeasurementResult sample_product_phi(const StateVector& joint,
                                     const std::vector<QuditPair>& pairs,
                                     RngStream& rng);

// Measurement in the rotated pair basis {upsilon_A |Phi-product>}: applies
// upsilon' to the pair.a positions, then samples the product-Phi basis.
MeasurementResult measure_xi(const StateVector& joint,
                             const std::vector<QuditPair>& pairs,
                             const GlobalUnitary& upsilon, RngStream& rng);

}  // namespace qtp
