#include <gtest/gtest.h>

#include <fcntl.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <thread>

#include "loranrec/error.hpp"
#include "loranrec/record/capture.hpp"
#include "loranrec/record/source.hpp"
#include "test_util.hpp"

using namespace loranrec;
using loranrec::testing::TempDir;
using namespace std::chrono;

namespace {

std::string drain(ByteSource& src, std::size_t want) {
  std::string out;
  std::vector<char> buf(4096);
  for (int idle = 0; out.size() < want && idle < 200;) {
    const auto r = src.read(buf, Millis(10));
    if (r.status == ByteSource::Status::kEof) break;
    if (r.status == ByteSource::Status::kTimeout) {
      ++idle;
      continue;
    }
    out.append(buf.data(), r.size);
  }
  return out;
}

// A port with nothing listening: bind, read the port, close.
std::uint16_t closed_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

}  // namespace

TEST(Endpoint, ParseForms) {
  EXPECT_EQ(SourceEndpoint::parse("serial:/dev/ttyUSB0").kind, SourceKind::kSerial);
  const auto tcp = SourceEndpoint::parse("tcp:localhost:4001");
  EXPECT_EQ(tcp.host_port(), (std::pair<std::string, std::uint16_t>{"localhost", 4001}));
  EXPECT_EQ(SourceEndpoint::parse("file:./x.log", 2.0).replay_speed, 2.0);
  EXPECT_EQ(SourceEndpoint::parse(tcp.to_string()).address, "localhost:4001");
  EXPECT_THROW(SourceEndpoint::parse("udp:1.2.3.4:5"), ConfigError);
  EXPECT_THROW(SourceEndpoint::parse("tcp:nohost").validate(), ConfigError);
}

TEST(Sources, UnreachableTcpFailsAfterRetries) {
  const SourceEndpoint ep = SourceEndpoint::parse("tcp:127.0.0.1:" + std::to_string(closed_port()));
  int attempts = 0;
  SourceOpener opener = [&] {
    ++attempts;
    return open_source(ep);
  };
  const RetryPolicy policy{3, Millis(1), Millis(2)};
  EXPECT_THROW(open_with_retry(opener, policy), SourceError);
  EXPECT_EQ(attempts, 3);
}

TEST(Sources, FileReplayUnpacedDeliversEverything) {
  TempDir dir;
  std::string bytes;
  for (int i = 0; i < 3000; ++i) bytes += static_cast<char>(i * 7);
  write_file_atomic(dir / "in.log", bytes);
  auto src = open_source(SourceEndpoint::parse("file:" + (dir / "in.log").string(), 0.0));
  EXPECT_EQ(drain(*src, bytes.size() + 1), bytes);
}

TEST(Sources, FileReplayIsPaced) {
  TempDir dir;
  write_file_atomic(dir / "in.log", std::string(480, 'x'));
  FileReplaySource src((dir / "in.log").string(), 4.0);  // 1920 bytes/s
  const auto t0 = steady_clock::now();
  EXPECT_EQ(drain(src, 480).size(), 480u);
  EXPECT_GE(steady_clock::now() - t0, milliseconds(200));
}

TEST(Sources, PseudoTerminalAsSerialDevice) {
  const int master = ::posix_openpt(O_RDWR | O_NOCTTY);
  ASSERT_GE(master, 0);
  ASSERT_EQ(::grantpt(master), 0);
  ASSERT_EQ(::unlockpt(master), 0);
  const std::string slave = ::ptsname(master);
  SerialSource src(slave);
  const std::string msg = "$GPGGA,1*00\r\n\xff";
  ASSERT_EQ(::write(master, msg.data(), msg.size()), static_cast<ssize_t>(msg.size()));
  EXPECT_EQ(drain(src, msg.size()), msg);
  ::close(master);
}

TEST(Sources, TcpReconnectRecordsGap) {
  const int lfd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ASSERT_EQ(::bind(lfd, reinterpret_cast<sockaddr*>(&addr), sizeof addr), 0);
  ::listen(lfd, 2);
  socklen_t len = sizeof addr;
  ::getsockname(lfd, reinterpret_cast<sockaddr*>(&addr), &len);
  const auto ep = SourceEndpoint::parse("tcp:127.0.0.1:" + std::to_string(ntohs(addr.sin_port)));

  std::jthread server([lfd] {
    for (const char* part : {"first\n", "second\n"}) {
      const int c = ::accept(lfd, nullptr, nullptr);
      ::send(c, part, std::strlen(part), 0);
      std::this_thread::sleep_for(milliseconds(50));
      ::close(c);
    }
  });

  TempDir dir;
  SystemClock clock;
  auto recorder = Recorder::open_session(ep.to_string(), dir.path(), {}, clock);
  SourceOpener opener = [ep] { return open_source(ep); };
  std::stop_source stop;
  CaptureConfig cfg;
  cfg.retry = {0, Millis(10), Millis(50)};
  CaptureHooks hooks;
  std::string seen;
  hooks.on_chunk = [&](std::string_view c) {
    seen.append(c);
    if (seen == "first\nsecond\n") stop.request_stop();
  };
  run_capture(opener(), opener, recorder, clock, cfg, hooks, stop.get_token());
  const auto seg = recorder.close();
  EXPECT_EQ(read_file(seg.path), "first\nsecond\n");
  ASSERT_EQ(recorder.metadata().gaps.size(), 1u);
  EXPECT_EQ(recorder.metadata().gaps[0].reason, "source disconnected");
  ::close(lfd);
}
