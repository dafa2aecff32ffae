#include "qtp/session.hpp"

#include <thread>

namespace qtp {

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Ready: return "ready";
        case Phase::Measured: return "measured";
        case Phase::Sent: return "sent";
        case Phase::Corrected: return "corrected";
        case Phase::Done: return "done";
    }
    throw std::invalid_argument("phase_name: unknown phase");
}

void PartyState::advance(Phase to) {
    const bool legal =
        role == Role::Alice
            ? (phase == Phase::Ready && to == Phase::Measured) ||
                  (phase == Phase::Measured && to == Phase::Sent) ||
                  (phase == Phase::Sent && to == Phase::Done)
            : (phase == Phase::Ready && to == Phase::Corrected) ||
                  (phase == Phase::Corrected && to == Phase::Done);
    if (!legal)
        throw std::logic_error(std::string("illegal phase transition for ") +
                               (role == Role::Alice ? "alice" : "bob") + ": " +
                               phase_name(phase) + " -> " + phase_name(to));
    phase = to;
}

void QueuePipe::send(const std::vector<std::uint8_t>& bytes) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (closed_) throw std::runtime_error("pipe: send after close");
        q_.insert(q_.end(), bytes.begin(), bytes.end());
    }
    cv_.notify_all();
}

bool QueuePipe::recv(std::size_t len, std::vector<std::uint8_t>& out) {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [&] { return q_.size() >= len || closed_; });
    if (q_.size() < len) return false;
    out.assign(q_.begin(), q_.begin() + static_cast<std::ptrdiff_t>(len));
    q_.erase(q_.begin(), q_.begin() + static_cast<std::ptrdiff_t>(len));
    return true;
}

void QueuePipe::close() {
    {
        std::lock_guard<std::mutex> lock(mu_);
        closed_ = true;
    }
    cv_.notify_all();
}

namespace {

struct SharedWorld {
    std::mutex mu;
    StateVector bob;           // Bob's register after Alice's measurement
    AliceMeasurement alice;    // Alice's record of the run
    StateVector bob_post;      // set once Bob corrects
    bool measured = false;
    bool corrected = false;
    std::string alice_error;
    std::string bob_error;
};

void alice_task(Protocol p, const JointState& js, const ChannelSpec& spec,
                RngStream& rng, const SessionOptions& options, SharedWorld& world,
                PartyState& alice, BytePipe& pipe) {
    try {
        AliceMeasurement am = alice_measure(p, js, spec, rng);
        std::vector<std::uint8_t> frame = encode_message(am.message);
        {
            std::lock_guard<std::mutex> lock(world.mu);
            world.bob = am.raw.post_state;
            world.alice = std::move(am);
            world.measured = true;
        }
        alice.advance(Phase::Measured);
        if (!options.drop_classical_message) pipe.send(frame);
        alice.advance(Phase::Sent);
        pipe.close();
        alice.advance(Phase::Done);
    } catch (const std::exception& e) {
        world.alice_error = e.what();
        pipe.close();
    }
}

void bob_task(const ChannelSpec& spec, SharedWorld& world, PartyState& bob,
              BytePipe& pipe) {
    std::vector<std::uint8_t> frame;
    if (!pipe.recv(4, frame)) {
        world.bob_error = "no classical message delivered";
        return;
    }
    std::vector<std::uint8_t> payload;
    std::size_t payload_len = 0;
    try {
        if (frame[0] != 0x01) throw MessageError("decode: unsupported version byte");
        payload_len = message_payload_size(frame[1],
                                           (static_cast<int>(frame[2]) << 8) | frame[3]);
    } catch (const MessageError& e) {
        world.bob_error = e.what();
        return;
    }
    if (!pipe.recv(payload_len, payload)) {
        world.bob_error = "classical message truncated in transit";
        return;
    }
    frame.insert(frame.end(), payload.begin(), payload.end());

    ClassicalMessage msg;
    try {
        msg = decode_message(frame);
    } catch (const MessageError& e) {
        world.bob_error = e.what();
        return;
    }
    if (msg.d != spec.d || msg.n != spec.n) {
        world.bob_error = "announcement shape does not match the shared channel";
        return;
    }
    Outcome outcome{std::vector<BellLabel>(static_cast<std::size_t>(msg.n))};
    for (int i = 0; i < msg.n; ++i)
        outcome.labels[static_cast<std::size_t>(i)] =
            BellLabel{msg.dits[static_cast<std::size_t>(2 * i)],
                      msg.dits[static_cast<std::size_t>(2 * i + 1)]};
    {
        std::lock_guard<std::mutex> lock(world.mu);
        world.bob_post = apply_corrections(world.bob, outcome);
        world.corrected = true;
    }
    bob.advance(Phase::Corrected);
    bob.advance(Phase::Done);
}

}  // namespace

SessionResult run_session(const StateVector& input, const ChannelSpec& spec, Protocol p,
                          RngStream& rng, const SessionOptions& options) {
    const JointState js = prepare_joint(p, input, spec);
    QueuePipe pipe;
    SharedWorld world;
    PartyState alice{Role::Alice, Phase::Ready};
    PartyState bob{Role::Bob, Phase::Ready};

    if (options.threaded) {
        std::thread bt([&] { bob_task(spec, world, bob, pipe); });
        alice_task(p, js, spec, rng, options, world, alice, pipe);
        bt.join();
    } else {
        alice_task(p, js, spec, rng, options, world, alice, pipe);
        bob_task(spec, world, bob, pipe);
    }

    SessionResult result;
    result.alice_phase = alice.phase;
    result.bob_phase = bob.phase;
    result.bob_uncorrected = world.bob;

    if (!world.alice_error.empty()) {
        result.error = "alice failed in phase " + std::string(phase_name(alice.phase)) +
                       ": " + world.alice_error;
        return result;
    }
    if (!world.bob_error.empty()) {
        result.error = "session failed with alice in phase " +
                       std::string(phase_name(alice.phase)) + ", bob awaiting in phase " +
                       std::string(phase_name(bob.phase)) + ": " + world.bob_error;
        return result;
    }

    result.ok = true;
    const double f = fidelity(input, world.bob_post);
    result.transcript = Transcript{p,
                                   spec,
                                   input,
                                   world.alice.announced,
                                   world.alice.message,
                                   world.alice.raw.post_state,
                                   world.bob_post,
                                   f,
                                   rng.seed,
                                   js.pre_rotated};
    return result;
}

}  // namespace qtp
