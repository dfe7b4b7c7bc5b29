#include "swarm/net/packet.hpp"

#include <cstring>

namespace swarm::net {

namespace {
constexpr uint8_t kMagic[4] = {'S', 'W', 'N', 'P'};

struct CrcTable {
    uint32_t t[256];
    CrcTable() {
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
    }
};
const CrcTable kCrc;

template <typename T>
void append_pod(std::vector<uint8_t>& buf, const T& v) {
    const auto* p = reinterpret_cast<const uint8_t*>(&v);
    buf.insert(buf.end(), p, p + sizeof(T));
}
}  // namespace

uint32_t crc32(const uint8_t* data, size_t len) {
    uint32_t c = 0xFFFFFFFFu;
    for (size_t i = 0; i < len; ++i) c = kCrc.t[(c ^ data[i]) & 0xFF] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

std::vector<uint8_t> encode_packet(const WirePacket& p) {
    std::vector<uint8_t> buf;
    buf.reserve(20 + 8 * p.payload.size());
    buf.insert(buf.end(), kMagic, kMagic + 4);
    append_pod(buf, p.version);
    buf.push_back(static_cast<uint8_t>(p.kind));
    buf.push_back(p.sender);
    append_pod(buf, p.step);
    append_pod(buf, static_cast<uint32_t>(p.payload.size()));
    for (double v : p.payload) append_pod(buf, v);
    uint32_t c = crc32(buf.data(), buf.size());
    append_pod(buf, c);
    return buf;
}

bool decode_packet(const uint8_t* data, size_t len, WirePacket& out) {
    if (len < 20) return false;
    if (std::memcmp(data, kMagic, 4) != 0) return false;
    uint32_t stored_crc;
    std::memcpy(&stored_crc, data + len - 4, 4);
    if (crc32(data, len - 4) != stored_crc) return false;

    std::memcpy(&out.version, data + 4, 2);
    if (out.version != kProtocolVersion) return false;
    uint8_t kind = data[6];
    if (kind > static_cast<uint8_t>(PacketKind::kShutdown)) return false;
    out.kind = static_cast<PacketKind>(kind);
    out.sender = data[7];
    std::memcpy(&out.step, data + 8, 4);
    uint32_t count;
    std::memcpy(&count, data + 12, 4);
    if (len != 20 + 8ull * count) return false;
    out.payload.resize(count);
    if (count) std::memcpy(out.payload.data(), data + 16, 8ull * count);
    return true;
}

}  // namespace swarm::net
