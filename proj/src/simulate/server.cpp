#include "loranrec/simulate/server.hpp"

#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "loranrec/error.hpp"
#include "loranrec/log.hpp"

namespace loranrec {
namespace {

constexpr std::size_t kMaxBatchBytes = 256 * 1024;
constexpr int kPollMs = 20;

bool peer_closed(int fd) {
  char c;
  const ssize_t n = ::recv(fd, &c, 1, MSG_PEEK | MSG_DONTWAIT);
  if (n == 0) return true;
  if (n < 0) return errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR;
  return false;
}

}  // namespace

Pacing Pacing::parse(std::string_view text) {
  if (text == "realtime" || text == "real-time") return real_time();
  if (text == "unpaced") return unpaced();
  constexpr std::string_view prefix = "accelerated:";
  if (text.starts_with(prefix)) {
    const auto num = text.substr(prefix.size());
    double factor = 0;
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), factor);
    if (ec == std::errc{} && p == num.data() + num.size() && factor > 0) return accelerated(factor);
  }
  throw ConfigError("pacing must be realtime, unpaced or accelerated:<factor>, got '" + std::string(text) + "'");
}

std::string Pacing::to_string() const {
  switch (mode) {
    case Mode::kRealTime:
      return "realtime";
    case Mode::kUnpaced:
      return "unpaced";
    case Mode::kAccelerated: {
      char buf[32];
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, factor);
      return "accelerated:" + std::string(buf, p);
    }
  }
  return "unpaced";
}

StreamServer::StreamServer(const std::string& listen, std::vector<Emission> emissions, Pacing pacing)
    : emissions_(std::move(emissions)), pacing_(pacing) {
  const auto colon = listen.rfind(':');
  unsigned port = 0;
  const std::string host = colon == std::string::npos ? std::string() : listen.substr(0, colon);
  const std::string digits = colon == std::string::npos ? listen : listen.substr(colon + 1);
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc{} || p != digits.data() + digits.size() || port > 65535) {
    throw ConfigError("listen address '" + listen + "' must be [host:]port");
  }
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res); rc != 0) {
    throw SourceError("cannot resolve listen address '" + listen + "': " + ::gai_strerror(rc));
  }
  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai != nullptr && listen_fd_ < 0; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 1) == 0) {
      listen_fd_ = fd;
      break;
    }
    last_error = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (listen_fd_ < 0) throw SourceError("cannot listen on '" + listen + "': " + last_error);

  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = addr.ss_family == AF_INET6 ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
                                     : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

StreamServer::~StreamServer() {
  stop();
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void StreamServer::start() {
  if (worker_.joinable()) return;
  worker_ = std::jthread([this](std::stop_token st) { serve(st); });
}

void StreamServer::stop() {
  if (worker_.joinable()) {
    worker_.request_stop();
    worker_.join();
  }
}

void StreamServer::wait() {
  if (worker_.joinable()) worker_.join();
}

void StreamServer::serve(std::stop_token stop) {
  while (!stop.stop_requested() && next_ < emissions_.size()) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    if (::poll(&pfd, 1, kPollMs) <= 0) continue;
    const int client = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (client < 0) continue;
    ++clients_;
    log::info("sim_client_connected", {{"position", std::to_string(bytes_sent_.load())}});
    const bool done = stream_to(client, stop);
    ::close(client);
    if (!done) log::info("sim_client_dropped", {{"position", std::to_string(bytes_sent_.load())}});
  }
  finished_ = next_ >= emissions_.size();
}

bool StreamServer::stream_to(int client, std::stop_token stop) {
  // Pacing restarts at the resume point so a reconnect does not trigger a burst.
  const auto origin = std::chrono::steady_clock::now();
  const UtcInstant base = next_ < emissions_.size() ? emissions_[next_].time : UtcInstant{};
  const double factor = pacing_.mode == Pacing::Mode::kRealTime ? 1.0 : pacing_.factor;

  std::string batch;
  while (next_ < emissions_.size()) {
    if (stop.stop_requested()) return false;
    if (pacing_.mode != Pacing::Mode::kUnpaced) {
      const std::chrono::duration<double> scenario = emissions_[next_].time - base;
      const auto due = origin + std::chrono::duration_cast<std::chrono::steady_clock::duration>(scenario / factor);
      const auto now = std::chrono::steady_clock::now();
      if (now < due) {
        std::this_thread::sleep_for(std::min<std::chrono::steady_clock::duration>(due - now, Millis{kPollMs}));
        continue;
      }
    }
    if (peer_closed(client)) return false;

    // Everything due now, as one write.
    const auto now = std::chrono::steady_clock::now();
    batch.assign(emissions_[next_].bytes, partial_);
    std::size_t last = next_ + 1;
    while (last < emissions_.size() && batch.size() < kMaxBatchBytes) {
      if (pacing_.mode != Pacing::Mode::kUnpaced) {
        const std::chrono::duration<double> scenario = emissions_[last].time - base;
        if (origin + std::chrono::duration_cast<std::chrono::steady_clock::duration>(scenario / factor) > now) break;
      }
      batch += emissions_[last].bytes;
      ++last;
    }

    std::size_t off = 0;
    while (off < batch.size()) {
      pollfd pfd{client, POLLOUT, 0};
      const int rc = ::poll(&pfd, 1, kPollMs);
      if (stop.stop_requested()) return false;
      if (rc <= 0) continue;
      const ssize_t n = ::send(client, batch.data() + off, batch.size() - off, MSG_NOSIGNAL | MSG_DONTWAIT);
      if (n < 0) {
        if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) continue;
        return false;
      }
      off += static_cast<std::size_t>(n);
      bytes_sent_ += static_cast<std::uint64_t>(n);
      // advance the resume position over what the network accepted
      std::size_t consumed = static_cast<std::size_t>(n);
      while (consumed > 0) {
        const std::size_t left = emissions_[next_].bytes.size() - partial_;
        if (consumed >= left) {
          consumed -= left;
          partial_ = 0;
          ++next_;
        } else {
          partial_ += consumed;
          consumed = 0;
        }
      }
    }
  }
  ::shutdown(client, SHUT_WR);
  return true;
}

}  // namespace loranrec
