#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <string>
#include <vector>

#include "qtp/protocols.hpp"

namespace qtp {

/*
 * Two-party execution of a teleportation run: Alice (measure, encode,
 * send) and Bob (receive, decode, correct) as explicit state machines
 * exchanging the encoded announcement over a byte pipe. With the same
 * stream, the resulting transcript is identical to the direct run.
 */

enum class Phase { Ready, Measured, Sent, Corrected, Done };
enum class Role { Alice, Bob };

const char* phase_name(Phase p);

// Per-party phase tracker; advance() rejects transitions outside
// Alice Ready->Measured->Sent->Done and Bob Ready->Corrected->Done.
struct PartyState {
    Role role = Role::Alice;
    Phase phase = Phase::Ready;

    void advance(Phase to);
};

// Transport seam for the classical channel. recv blocks until len bytes
// are available; returns false when the pipe closes first (the bytes seen
// so far stay queued).
struct BytePipe {
    virtual ~BytePipe() = default;
    virtual void send(const std::vector<std::uint8_t>& bytes) = 0;
    virtual bool recv(std::size_t len, std::vector<std::uint8_t>& out) = 0;
    virtual void close() = 0;
};

// In-memory duplex queue; safe for one sender and one receiver thread,
// and usable single-threaded when sends precede receives.
class QueuePipe : public BytePipe {
  public:
    void send(const std::vector<std::uint8_t>& bytes) override;
    bool recv(std::size_t len, std::vector<std::uint8_t>& out) override;
    void close() override;

  private:
    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<std::uint8_t> q_;
    bool closed_ = false;
};

struct SessionOptions {
    bool threaded = false;                // run the parties on two threads
    bool drop_classical_message = false;  // transport fault: frame never sent
};

// transcript is fully populated only when ok; bob_uncorrected always holds
// Bob's register as left by Alice's measurement.
struct SessionResult {
    bool ok = false;
    Transcript transcript;
    StateVector bob_uncorrected;
    Phase alice_phase = Phase::Ready;
    Phase bob_phase = Phase::Ready;
    std::string error;
};

SessionResult run_session(const StateVector& input, const ChannelSpec& spec, Protocol p,
                          RngStream& rng, const SessionOptions& options = {});

}  // namespace qtp
