#pragma once

// Live session endpoint. One operator at a time over a WebSocket; plain
// HTTP GETs are answered from an optional static asset directory.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include <boost/asio/ip/tcp.hpp>

#include "behent/baseline.hpp"
#include "behent/driver.hpp"
#include "behent/session.hpp"

namespace behent {

/// Flags a command rate that stays outside [nominal/2, 2 nominal] for a
/// whole window. Reports once per excursion.
class RateMonitor {
 public:
  using Clock = std::chrono::steady_clock;

  explicit RateMonitor(double nominal_hz = 20.0, Clock::duration window = std::chrono::seconds(5))
      : nominal_hz_(nominal_hz), window_(window) {}

  /// Records an arrival; returns the observed rate when a new excursion starts.
  std::optional<double> on_arrival(Clock::time_point now);

 private:
  double nominal_hz_;
  Clock::duration window_;
  std::optional<Clock::time_point> first_;
  std::deque<Clock::time_point> arrivals_;
  bool flagged_ = false;
};

struct ServiceConfig {
  SessionConfig session;
  Baseline baseline;
  /// Sessions after the first get ".1", ".2", ... before the extension.
  std::filesystem::path trace_path = "trace.csv";
  std::optional<std::filesystem::path> capture_path;
  std::optional<std::filesystem::path> ui_dir;
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  ///< 0 picks a free port
};

class SessionService {
 public:
  explicit SessionService(ServiceConfig config);
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  /// Binds and starts accepting on a background thread.
  void start();
  /// Blocks until stop() is called from another thread or a signal handler.
  void wait();
  void stop();

  unsigned short port() const noexcept { return bound_port_; }
  std::size_t completed_sessions() const noexcept { return completed_; }
  bool busy() const noexcept { return busy_; }

 private:
  struct Impl;

  void serve_connection(boost::asio::ip::tcp::socket socket);

  ServiceConfig config_;
  std::unique_ptr<Impl> impl_;
  unsigned short bound_port_ = 0;
  std::atomic<bool> busy_{false};
  std::atomic<std::size_t> completed_{0};
  std::atomic<std::size_t> started_{0};
  std::mutex threads_mutex_;
  std::vector<std::thread> threads_;
  std::thread acceptor_thread_;
};

}  // namespace behent
