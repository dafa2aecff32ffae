#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>

#include "qtp/session.hpp"

namespace qtp {

/*
 * Batch harness over the protocol runs. Commands print a one-line summary
 * and optionally write a JSON report; reports are byte-identical for
 * identical configs and seeds except for the "timestamp" field.
 *
 * Exit codes: 0 all checks passed, 1 a check failed, 2 configuration or
 * input error.
 */

struct RunConfig {
    int d = 2;
    int n = 1;
    std::string protocol = "dn";
    std::string channel = "tps";
    int trials = 100;
    std::uint64_t seed = 1;
    std::string input_path;   // empty: fresh random input per trial
    std::string output_path;  // empty: no report file
};

struct VerifyConfig {
    int d_lo = 2;
    int d_hi = 3;
    int n_lo = 1;
    int n_hi = 2;
    std::uint64_t seed = 1;
    std::string output_path;
    bool inject_fault = false;  // corrupt one correction phase; the
                                // pairing identity suite must then fail
};

/*
 * Channel descriptor grammar:
 *   tps
 *   ges:GEN
 *   ges2:GEN:GEN
 * optionally followed by ":offsets=k1,l1,...,kn,ln", where
 *   GEN = identity | haar:SEED | yeo-chua:THETA,PHI
 */
ChannelSpec parse_channel(const std::string& desc, int d, int n);

// Shape and cap checks (d^(3n) <= 200000); throws std::invalid_argument.
void validate(const RunConfig& config);

// "2..5" or "3" -> {lo, hi}
std::pair<int, int> parse_range(const std::string& text);

int cmd_teleport(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qtp
