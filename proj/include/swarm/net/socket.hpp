#pragma once

#include <cstdint>
#include <vector>

namespace swarm::net {

// Minimal localhost UDP datagram socket.
class UdpSocket {
 public:
    UdpSocket();
    ~UdpSocket();
    UdpSocket(const UdpSocket&) = delete;
    UdpSocket& operator=(const UdpSocket&) = delete;

    void bind(uint16_t port);
    bool send_to(uint16_t port, const std::vector<uint8_t>& data) const;
    // Blocks up to timeout_ms (0 = poll); false on timeout.
    bool recv(std::vector<uint8_t>& out, int timeout_ms) const;

 private:
    int fd_ = -1;
};

}  // namespace swarm::net
