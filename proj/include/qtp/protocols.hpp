#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtp/measure.hpp"
#include "qtp/message.hpp"

namespace qtp {

/*
 * End-to-end teleportation of an n-qudit state from Alice to Bob.
 *
 *   Dn    channel is a product of Bell pairs; Alice measures each
 *         (A_i, X_i) pair in the Bell basis.
 *   Dpn   channel carries a global unitary on Alice's half; she measures
 *         in the correspondingly rotated pair basis.
 *   Dppn  channel additionally carries a global unitary on Bob's half;
 *         Bob undoes it before the run proceeds as Dpn.
 *
 * Joint register layout: [X1..Xn, A1, B1, A2, B2, ..., An, Bn].
 * The announced outcome is offset-compensated: when the channel carries
 * pair offsets (k0_i, l0_i), a raw measured label (k, l) is announced as
 * ((k - k0) mod d, (l - l0) mod d), so that Bob's correction is always
 * V^(announced label) regardless of the channel offsets.
 */

enum class Protocol { Dn, Dpn, Dppn };

const char* protocol_name(Protocol p);
Protocol protocol_from_name(const std::string& name);

// Full record of one run. bob_pre_correction is Bob's register right
// after Alice's measurement; fidelity compares input against
// bob_post_correction, insensitive to global phase.
struct Transcript {
    Protocol protocol = Protocol::Dn;
    ChannelSpec spec;
    StateVector input_state;
    Outcome outcome;  // announced (offset-compensated) labels
    ClassicalMessage classical_message;
    StateVector bob_pre_correction;
    StateVector bob_post_correction;
    double fidelity = 0.0;
    std::uint64_t seed = 0;
    bool pre_rotated = false;  // Bob's channel-side rotation ran (Dppn)
};

// Positions inside the joint register
std::vector<QuditPair> measurement_pairs(int n);  // (A_i, X_i)
std::vector<int> alice_a_positions(int n);
std::vector<int> bob_positions(int n);

// Raw measured labels -> announced labels under the channel offsets
Outcome effective_outcome(const Outcome& raw, const std::vector<BellLabel>& offsets,
                          int d);

// Bob's correction operators for an announced outcome: V^(k_i l_i) on B_i
std::vector<LocalOperator> corrections(const Outcome& outcome, int d);

// corrections applied to an n-qudit register (qudit i holds B_(i+1))
StateVector apply_corrections(const StateVector& bob, const Outcome& outcome);

// |<a|b>|, phase-insensitive overlap of normalized states
double fidelity(const StateVector& a, const StateVector& b);

/*
 * Staged pieces of a run. The session layer drives the same stages through
 * its two-party machinery, so a session transcript is identical to a
 * direct run with the same stream.
 */
struct JointState {
    StateVector joint;
    bool pre_rotated = false;
};

// Tensors the input with the channel; for Dppn also applies Bob's inverse
// channel rotation to the B qudits.
JointState prepare_joint(Protocol p, const StateVector& input, const ChannelSpec& spec);

struct AliceMeasurement {
    MeasurementResult raw;
    Outcome announced;
    ClassicalMessage message;
};

// Alice's measurement in the protocol's pair basis plus the announcement.
AliceMeasurement alice_measure(Protocol p, const JointState& js, const ChannelSpec& spec,
                               RngStream& rng);

Transcript run_dn(const StateVector& input, const ChannelSpec& spec, RngStream& rng);
Transcript run_dpn(const StateVector& input, const ChannelSpec& spec, RngStream& rng);
Transcript run_dppn(const StateVector& input, const ChannelSpec& spec, RngStream& rng);
Transcript run_protocol(Protocol p, const StateVector& input, const ChannelSpec& spec,
                        RngStream& rng);

}  // namespace qtp
