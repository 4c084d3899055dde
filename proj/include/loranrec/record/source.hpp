#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>

#include "loranrec/record/endpoint.hpp"
#include "loranrec/time.hpp"

namespace loranrec {

// A byte stream from the receiver link. Sources never interpret content.
class ByteSource {
 public:
  enum class Status { kData, kTimeout, kEof };
  struct ReadResult {
    Status status;
    std::size_t size = 0;
  };

  virtual ~ByteSource() = default;
  // Waits at most `timeout` for bytes. A dropped link reports kEof.
  virtual ReadResult read(std::span<char> buffer, Millis timeout) = 0;
  virtual std::string describe() const = 0;
};

struct RetryPolicy {
  int max_attempts = 5;  // 0 retries forever
  Millis initial_backoff{200};
  Millis max_backoff{30000};
};

using SourceOpener = std::function<std::unique_ptr<ByteSource>()>;

// Opens the endpoint once; throws SourceError when unreachable.
std::unique_ptr<ByteSource> open_source(const SourceEndpoint& endpoint);

// Calls `opener` until it succeeds, sleeping with exponential backoff between
// attempts. Throws SourceError after `policy.max_attempts` failures.
std::unique_ptr<ByteSource> open_with_retry(const SourceOpener& opener, const RetryPolicy& policy,
                                            const std::function<bool()>& cancelled = {});

// Replays a file. At speed s > 0 bytes are paced as a 4800 baud 8N1 link
// (480 bytes/s) multiplied by s; speed 0 delivers as fast as possible.
class FileReplaySource final : public ByteSource {
 public:
  FileReplaySource(const std::string& path, double speed);
  ~FileReplaySource() override;
  ReadResult read(std::span<char> buffer, Millis timeout) override;
  std::string describe() const override { return "file:" + path_; }

 private:
  std::string path_;
  double speed_;
  int fd_ = -1;
  std::uint64_t delivered_ = 0;
  std::chrono::steady_clock::time_point start_;
};

// TCP client connection.
class TcpSource final : public ByteSource {
 public:
  TcpSource(const std::string& host, std::uint16_t port);
  ~TcpSource() override;
  ReadResult read(std::span<char> buffer, Millis timeout) override;
  std::string describe() const override { return description_; }

 private:
  int fd_ = -1;
  std::string description_;
};

// Serial-style character device (tty, pty or FIFO). Terminals are put in raw mode.
class SerialSource final : public ByteSource {
 public:
  explicit SerialSource(const std::string& path);
  ~SerialSource() override;
  ReadResult read(std::span<char> buffer, Millis timeout) override;
  std::string describe() const override { return "serial:" + path_; }

 private:
  std::string path_;
  int fd_ = -1;
};

}  // namespace loranrec
