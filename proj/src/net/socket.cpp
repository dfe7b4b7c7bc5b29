#include "swarm/net/socket.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "swarm/common.hpp"

namespace swarm::net {

UdpSocket::UdpSocket() {
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0) throw ContractError("socket() failed");
}

UdpSocket::~UdpSocket() {
    if (fd_ >= 0) ::close(fd_);
}

void UdpSocket::bind(uint16_t port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
        throw ContractError("bind() failed on port " + std::to_string(port));
}

bool UdpSocket::send_to(uint16_t port, const std::vector<uint8_t>& data) const {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    ssize_t n = ::sendto(fd_, data.data(), data.size(), 0, reinterpret_cast<const sockaddr*>(&addr),
                         sizeof(addr));
    return n == static_cast<ssize_t>(data.size());
}

bool UdpSocket::recv(std::vector<uint8_t>& out, int timeout_ms) const {
    pollfd pfd{fd_, POLLIN, 0};
    int r = ::poll(&pfd, 1, timeout_ms);
    if (r <= 0) return false;
    out.resize(65536);
    ssize_t n = ::recv(fd_, out.data(), out.size(), 0);
    if (n <= 0) return false;
    out.resize(static_cast<size_t>(n));
    return true;
}

}  // namespace swarm::net
