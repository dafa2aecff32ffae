#include "qtp/protocols.hpp"

#include <cmath>

namespace qtp {

namespace {

void check_run_args(Protocol p, const StateVector& input, const ChannelSpec& spec) {
    if (input.d != spec.d) throw std::invalid_argument("run: input dimension mismatch");
    if (input.m != spec.n) throw std::invalid_argument("run: input must cover n qudits");
    const ChannelKind want = p == Protocol::Dn    ? ChannelKind::TPS
                             : p == Protocol::Dpn ? ChannelKind::GES
                                                  : ChannelKind::GES2;
    if (spec.kind != want)
        throw std::invalid_argument(std::string("run: protocol ") + protocol_name(p) +
                                    " needs a " + channel_kind_name(want) + " channel");
}

ClassicalMessage message_for(const Outcome& outcome, int d, int n) {
    ClassicalMessage msg{d, n, {}};
    msg.dits.reserve(static_cast<std::size_t>(2 * n));
    for (const BellLabel& l : outcome.labels) {
        msg.dits.push_back(l.k);
        msg.dits.push_back(l.l);
    }
    return msg;
}

}  // namespace

const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::Dn: return "dn";
        case Protocol::Dpn: return "dpn";
        case Protocol::Dppn: return "dppn";
    }
    throw std::invalid_argument("protocol_name: unknown protocol");
}

Protocol protocol_from_name(const std::string& name) {
    if (name == "dn") return Protocol::Dn;
    if (name == "dpn") return Protocol::Dpn;
    if (name == "dppn") return Protocol::Dppn;
    throw std::invalid_argument("unknown protocol name: " + name);
}

std::vector<QuditPair> measurement_pairs(int n) {
    std::vector<QuditPair> pairs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pairs[static_cast<std::size_t>(i)] = QuditPair{n + 2 * i, i};
    return pairs;
}

std::vector<int> alice_a_positions(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = n + 2 * i;
    return p;
}

std::vector<int> bob_positions(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = n + 2 * i + 1;
    return p;
}

Outcome effective_outcome(const Outcome& raw, const std::vector<BellLabel>& offsets,
                          int d) {
    if (raw.labels.size() != offsets.size())
        throw std::invalid_argument("effective_outcome: offsets length mismatch");
    Outcome out{raw.labels};
    for (std::size_t i = 0; i < out.labels.size(); ++i) {
        out.labels[i].k = mod_add(out.labels[i].k, (d - offsets[i].k) % d, d);
        out.labels[i].l = mod_add(out.labels[i].l, (d - offsets[i].l) % d, d);
    }
    return out;
}

std::vector<LocalOperator> corrections(const Outcome& outcome, int d) {
    std::vector<LocalOperator> ops;
    ops.reserve(outcome.labels.size());
    for (const BellLabel& l : outcome.labels) ops.push_back(weyl_v(d, l));
    return ops;
}

StateVector apply_corrections(const StateVector& bob, const Outcome& outcome) {
    if (bob.m != static_cast<int>(outcome.labels.size()))
        throw std::invalid_argument("apply_corrections: label count mismatch");
    StateVector out = bob;
    const std::vector<LocalOperator> ops = corrections(outcome, bob.d);
    for (int i = 0; i < bob.m; ++i)
        out = apply_local(out, ops[static_cast<std::size_t>(i)], {i});
    return out;
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::abs(inner(a, b));
}

JointState prepare_joint(Protocol p, const StateVector& input, const ChannelSpec& spec) {
    check_run_args(p, input, spec);
    StateVector joint = tensor(input, build_channel(spec));
    bool pre_rotated = false;
    if (p == Protocol::Dppn) {
        joint = apply_local(joint,
                            LocalOperator{spec.d, spec.n, adjoint(spec.omega->matrix)},
                            bob_positions(spec.n));
        pre_rotated = true;
    }
    return JointState{std::move(joint), pre_rotated};
}

AliceMeasurement alice_measure(Protocol p, const JointState& js, const ChannelSpec& spec,
                               RngStream& rng) {
    const std::vector<QuditPair> pairs = measurement_pairs(spec.n);
    MeasurementResult raw = p == Protocol::Dn
                                ? sample_product_phi(js.joint, pairs, rng)
                                : measure_xi(js.joint, pairs, *spec.upsilon, rng);
    Outcome announced = effective_outcome(raw.outcome, spec.offsets, spec.d);
    ClassicalMessage msg = message_for(announced, spec.d, spec.n);
    return AliceMeasurement{std::move(raw), std::move(announced), std::move(msg)};
}

Transcript run_protocol(Protocol p, const StateVector& input, const ChannelSpec& spec,
                        RngStream& rng) {
    const JointState js = prepare_joint(p, input, spec);
    AliceMeasurement am = alice_measure(p, js, spec, rng);
    StateVector bob_post = apply_corrections(am.raw.post_state, am.announced);
    const double f = fidelity(input, bob_post);
    return Transcript{p,
                      spec,
                      input,
                      std::move(am.announced),
                      std::move(am.message),
                      std::move(am.raw.post_state),
                      std::move(bob_post),
                      f,
                      rng.seed,
                      js.pre_rotated};
}

Transcript run_dn(const StateVector& input, const ChannelSpec& spec, RngStream& rng) {
    return run_protocol(Protocol::Dn, input, spec, rng);
}

Transcript run_dpn(const StateVector& input, const ChannelSpec& spec, RngStream& rng) {
    return run_protocol(Protocol::Dpn, input, spec, rng);
}

Transcript run_dppn(const StateVector& input, const ChannelSpec& spec, RngStream& rng) {
    return run_protocol(Protocol::Dppn, input, spec, rng);
}

}  // namespace qtp
