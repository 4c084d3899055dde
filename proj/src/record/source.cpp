#include "loranrec/record/source.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <termios.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <thread>

#include "loranrec/error.hpp"
#include "loranrec/log.hpp"

namespace loranrec {
namespace {

constexpr double kSerialBytesPerSecond = 480.0;

// Shared poll+read for descriptor-backed sources.
ByteSource::ReadResult poll_read(int fd, std::span<char> buffer, Millis timeout) {
  pollfd pfd{fd, POLLIN, 0};
  int rc = 0;
  do {
    rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  } while (rc < 0 && errno == EINTR);
  if (rc < 0) return {ByteSource::Status::kEof, 0};
  if (rc == 0) return {ByteSource::Status::kTimeout, 0};
  for (;;) {
    const ssize_t n = ::read(fd, buffer.data(), buffer.size());
    if (n > 0) return {ByteSource::Status::kData, static_cast<std::size_t>(n)};
    if (n < 0 && errno == EINTR) continue;
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) return {ByteSource::Status::kTimeout, 0};
    // 0 = orderly close; EIO/ECONNRESET = link dropped
    return {ByteSource::Status::kEof, 0};
  }
}

}  // namespace

std::unique_ptr<ByteSource> open_source(const SourceEndpoint& endpoint) {
  endpoint.validate();
  switch (endpoint.kind) {
    case SourceKind::kFileReplay:
      return std::make_unique<FileReplaySource>(endpoint.address, endpoint.replay_speed.value_or(0.0));
    case SourceKind::kTcp: {
      auto [host, port] = endpoint.host_port();
      return std::make_unique<TcpSource>(host, port);
    }
    case SourceKind::kSerial:
      return std::make_unique<SerialSource>(endpoint.address);
  }
  throw ConfigError("unsupported source kind");
}

std::unique_ptr<ByteSource> open_with_retry(const SourceOpener& opener, const RetryPolicy& policy,
                                            const std::function<bool()>& cancelled) {
  Millis backoff = policy.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return opener();
    } catch (const SourceError& e) {
      if (policy.max_attempts > 0 && attempt >= policy.max_attempts) {
        throw SourceError(std::string(e.what()) + " (gave up after " + std::to_string(attempt) + " attempts)");
      }
      log::warn("source_retry", {{"attempt", std::to_string(attempt)},
                                 {"backoff", format_duration(backoff)},
                                 {"reason", e.what()}});
    }
    if (cancelled && cancelled()) throw SourceError("source open cancelled");
    std::this_thread::sleep_for(backoff);
    backoff = std::min(backoff * 2, policy.max_backoff);
  }
}

FileReplaySource::FileReplaySource(const std::string& path, double speed)
    : path_(path), speed_(speed), start_(std::chrono::steady_clock::now()) {
  fd_ = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd_ < 0) throw SourceError("cannot open replay file '" + path + "': " + std::strerror(errno));
}

FileReplaySource::~FileReplaySource() {
  if (fd_ >= 0) ::close(fd_);
}

ByteSource::ReadResult FileReplaySource::read(std::span<char> buffer, Millis timeout) {
  std::size_t want = buffer.size();
  if (speed_ > 0) {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
    const auto allowed = static_cast<std::uint64_t>(elapsed.count() * kSerialBytesPerSecond * speed_);
    if (allowed <= delivered_) {
      std::this_thread::sleep_for(std::min<Millis>(timeout, Millis(10)));
      return {Status::kTimeout, 0};
    }
    want = std::min<std::uint64_t>(want, allowed - delivered_);
  }
  for (;;) {
    const ssize_t n = ::read(fd_, buffer.data(), want);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return {Status::kEof, 0};
    delivered_ += static_cast<std::uint64_t>(n);
    return {Status::kData, static_cast<std::size_t>(n)};
  }
}

TcpSource::TcpSource(const std::string& host, std::uint16_t port) {
  description_ = "tcp:" + host + ":" + std::to_string(port);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
    throw SourceError("cannot resolve '" + host + "': " + ::gai_strerror(rc));
  }
  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      fd_ = fd;
      break;
    }
    last_error = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) throw SourceError("cannot connect to " + description_ + ": " + last_error);
}

TcpSource::~TcpSource() {
  if (fd_ >= 0) ::close(fd_);
}

ByteSource::ReadResult TcpSource::read(std::span<char> buffer, Millis timeout) {
  return poll_read(fd_, buffer, timeout);
}

SerialSource::SerialSource(const std::string& path) : path_(path) {
  fd_ = ::open(path.c_str(), O_RDONLY | O_NOCTTY | O_NONBLOCK | O_CLOEXEC);
  if (fd_ < 0) throw SourceError("cannot open device '" + path + "': " + std::strerror(errno));
  if (::isatty(fd_)) {
    termios tio{};
    if (::tcgetattr(fd_, &tio) == 0) {
      ::cfmakeraw(&tio);
      ::tcsetattr(fd_, TCSANOW, &tio);
    }
  }
}

SerialSource::~SerialSource() {
  if (fd_ >= 0) ::close(fd_);
}

ByteSource::ReadResult SerialSource::read(std::span<char> buffer, Millis timeout) {
  return poll_read(fd_, buffer, timeout);
}

}  // namespace loranrec
