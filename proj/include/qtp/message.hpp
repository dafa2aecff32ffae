#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtp {

// Alice's measurement announcement: the 2n dits k1, l1, k2, l2, ..., kn, ln.
struct ClassicalMessage {
    int d = 0;
    int n = 0;
    std::vector<int> dits;

    friend bool operator==(const ClassicalMessage& a, const ClassicalMessage& b) {
        return a.d == b.d && a.n == b.n && a.dits == b.dits;
    }
};

// Malformed or corrupt wire frames decode to this.
struct MessageError : std::runtime_error {
    explicit MessageError(const std::string& what) : std::runtime_error(what) {}
};

/*
 * Wire format, bit-exact:
 *   byte 0      version, 0x01
 *   byte 1      d
 *   bytes 2..3  n, big-endian 16-bit
 *   then ceil(2n*w/8) payload bytes, w = ceil(log2 d): each dit packed
 *   into w bits, most-significant-bit first, zero bit padding at the end.
 */
std::vector<std::uint8_t> encode_message(const ClassicalMessage& msg);
ClassicalMessage decode_message(const std::vector<std::uint8_t>& bytes);

// payload byte count implied by a (d, n) header
std::size_t message_payload_size(int d, int n);

}  // namespace qtp
