#include "qtp/message.hpp"

#include <bit>

namespace qtp {

namespace {

constexpr std::uint8_t kVersion = 0x01;

int dit_bits(int d) {
    return std::bit_width(static_cast<unsigned>(d - 1));
}

void check_shape(int d, int n) {
    if (d < 2) throw MessageError("message: d must be >= 2");
    if (n < 1) throw MessageError("message: n must be >= 1");
    if (d > 255) throw MessageError("message: d exceeds one-byte header field");
    if (n > 65535) throw MessageError("message: n exceeds two-byte header field");
}

}  // namespace

std::size_t message_payload_size(int d, int n) {
    check_shape(d, n);
    const std::size_t bits = static_cast<std::size_t>(2 * n) * dit_bits(d);
    return (bits + 7) / 8;
}

std::vector<std::uint8_t> encode_message(const ClassicalMessage& msg) {
    check_shape(msg.d, msg.n);
    if (msg.dits.size() != static_cast<std::size_t>(2 * msg.n))
        throw MessageError("encode: expected 2n dits");
    for (int v : msg.dits)
        if (v < 0 || v >= msg.d) throw MessageError("encode: dit out of range");

    const int w = dit_bits(msg.d);
    std::vector<std::uint8_t> out(4 + message_payload_size(msg.d, msg.n), 0);
    out[0] = kVersion;
    out[1] = static_cast<std::uint8_t>(msg.d);
    out[2] = static_cast<std::uint8_t>(msg.n >> 8);
    out[3] = static_cast<std::uint8_t>(msg.n & 0xFF);

    std::size_t bitpos = 0;
    for (int v : msg.dits)
        for (int b = w - 1; b >= 0; --b, ++bitpos)
            out[4 + bitpos / 8] |= static_cast<std::uint8_t>(((v >> b) & 1) << (7 - bitpos % 8));
    return out;
}

ClassicalMessage decode_message(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 4) throw MessageError("decode: truncated header");
    if (bytes[0] != kVersion) throw MessageError("decode: unsupported version byte");
    const int d = bytes[1];
    const int n = (static_cast<int>(bytes[2]) << 8) | bytes[3];
    if (d < 2 || n < 1) throw MessageError("decode: bad dimensions in header");

    const std::size_t payload = message_payload_size(d, n);
    if (bytes.size() < 4 + payload) throw MessageError("decode: truncated payload");
    if (bytes.size() > 4 + payload) throw MessageError("decode: trailing bytes after frame");

    const int w = dit_bits(d);
    ClassicalMessage msg{d, n, std::vector<int>(static_cast<std::size_t>(2 * n), 0)};
    std::size_t bitpos = 0;
    for (int& v : msg.dits) {
        for (int b = w - 1; b >= 0; --b, ++bitpos)
            v |= ((bytes[4 + bitpos / 8] >> (7 - bitpos % 8)) & 1) << b;
        if (v >= d) throw MessageError("decode: dit value out of range (corrupt frame)");
    }
    for (; bitpos < payload * 8; ++bitpos)
        if ((bytes[4 + bitpos / 8] >> (7 - bitpos % 8)) & 1)
            throw MessageError("decode: nonzero padding bits (corrupt frame)");
    return msg;
}

}  // namespace qtp
