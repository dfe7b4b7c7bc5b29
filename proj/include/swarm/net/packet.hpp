#pragma once

#include <cstdint>
#include <vector>

namespace swarm::net {

// Wire layout (little-endian), documented in docs/wire.md:
//   0   u8[4]  magic "SWNP"
//   4   u16    protocol version (=1)
//   6   u8     kind
//   7   u8     sender id (255 = host)
//   8   u32    step index
//   12  u32    payload count (doubles)
//   16  f64[n] payload
//   ..  u32    crc32 over all preceding bytes
enum class PacketKind : uint8_t {
    kState = 0,      // host -> agent: obs | lidar | pos | vel | inbox count
    kConsensus = 1,  // routed message: [distance, m...] down, [m...] up
    kAction = 2,     // agent -> host: [ux, uy, anchor_x, anchor_y]
    kBarrier = 3,    // bundle delimiter / readiness
    kWorldTick = 4,  // async mode tick announcement
    kShutdown = 5,
};

inline constexpr uint16_t kProtocolVersion = 1;
inline constexpr uint8_t kHostSender = 255;

struct WirePacket {
    uint16_t version = kProtocolVersion;
    PacketKind kind = PacketKind::kBarrier;
    uint8_t sender = kHostSender;
    uint32_t step = 0;
    std::vector<double> payload;

    bool operator==(const WirePacket& o) const {
        return version == o.version && kind == o.kind && sender == o.sender && step == o.step &&
               payload == o.payload;
    }
};

uint32_t crc32(const uint8_t* data, size_t len);

std::vector<uint8_t> encode_packet(const WirePacket& p);
// Validates structure and checksum; false = reject (corrupt or foreign).
bool decode_packet(const uint8_t* data, size_t len, WirePacket& out);

}  // namespace swarm::net
