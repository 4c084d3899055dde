#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "loranrec/simulate/generator.hpp"

namespace loranrec {

// How emissions are spread over wall time. Accelerated pacing divides the gaps
// between scenario timestamps by `factor`; the sentences themselves keep
// scenario time.
struct Pacing {
  enum class Mode { kRealTime, kAccelerated, kUnpaced };
  Mode mode = Mode::kUnpaced;
  double factor = 1.0;

  static Pacing real_time() { return {Mode::kRealTime, 1.0}; }
  static Pacing accelerated(double factor) { return {Mode::kAccelerated, factor}; }
  static Pacing unpaced() { return {Mode::kUnpaced, 0.0}; }
  // "realtime", "unpaced", or "accelerated:<factor>". Throws ConfigError.
  static Pacing parse(std::string_view text);
  std::string to_string() const;
};

// Serves one stream to one client at a time over TCP. A client that drops
// loses nothing: the next client resumes at the first byte not yet handed to
// the network. After the last byte the connection is closed and the server
// stops accepting.
class StreamServer {
 public:
  // Binds immediately ("host:port"; port 0 picks a free port). Throws
  // SourceError when the address cannot be bound.
  StreamServer(const std::string& listen, std::vector<Emission> emissions, Pacing pacing);
  ~StreamServer();
  StreamServer(const StreamServer&) = delete;
  StreamServer& operator=(const StreamServer&) = delete;

  std::uint16_t port() const { return port_; }
  void start();
  void stop();
  // Blocks until the whole stream has been delivered or stop() was called.
  void wait();

  bool finished() const { return finished_.load(); }
  std::uint64_t bytes_sent() const { return bytes_sent_.load(); }
  std::uint64_t clients_served() const { return clients_.load(); }

 private:
  void serve(std::stop_token stop);
  // Returns false when the client went away.
  bool stream_to(int client, std::stop_token stop);

  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::vector<Emission> emissions_;
  Pacing pacing_;
  std::size_t next_ = 0;       // next emission to send
  std::size_t partial_ = 0;    // bytes of emissions_[next_] already sent
  std::atomic<bool> finished_{false};
  std::atomic<std::uint64_t> bytes_sent_{0};
  std::atomic<std::uint64_t> clients_{0};
  std::jthread worker_;
};

}  // namespace loranrec
