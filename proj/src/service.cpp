#include "behent/service.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "behent/errors.hpp"
#include "behent/formats.hpp"
#include "behent/protocol.hpp"
#include "behent/trace.hpp"

namespace behent {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

std::optional<double> RateMonitor::on_arrival(Clock::time_point now) {
  if (!first_) first_ = now;
  arrivals_.push_back(now);
  while (!arrivals_.empty() && arrivals_.front() <= now - window_) arrivals_.pop_front();
  if (now - *first_ < window_) return std::nullopt;

  const double seconds = std::chrono::duration<double>(window_).count();
  const double rate = static_cast<double>(arrivals_.size()) / seconds;
  const bool off = rate > 2.0 * nominal_hz_ || rate < 0.5 * nominal_hz_;
  if (off && !flagged_) {
    flagged_ = true;
    return rate;
  }
  if (!off) flagged_ = false;
  return std::nullopt;
}

namespace {

std::filesystem::path numbered(const std::filesystem::path& base, std::size_t index) {
  if (index == 0) return base;
  auto name = base.stem().string() + "." + std::to_string(index) + base.extension().string();
  return base.parent_path() / name;
}

std::string_view mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".wav") return "audio/wav";
  return "application/octet-stream";
}

void serve_static(tcp::socket& socket, const http::request<http::string_body>& req,
                  const std::optional<std::filesystem::path>& root) {
  http::response<http::string_body> res;
  res.version(req.version());
  res.keep_alive(false);
  std::string target(req.target());
  if (target.empty() || target == "/") target = "/index.html";
  const bool traversal = target.find("..") != std::string::npos;
  std::filesystem::path file;
  if (root && !traversal) file = *root / target.substr(1);

  std::ifstream in;
  if (req.method() == http::verb::get && !file.empty()) in.open(file, std::ios::binary);
  if (in.is_open()) {
    std::ostringstream body;
    body << in.rdbuf();
    res.result(http::status::ok);
    res.set(http::field::content_type, std::string(mime_type(file)));
    res.body() = body.str();
  } else {
    res.result(http::status::not_found);
    res.set(http::field::content_type, "text/plain");
    res.body() = "not found\n";
  }
  res.prepare_payload();
  beast::error_code ec;
  http::write(socket, res, ec);
  socket.shutdown(tcp::socket::shutdown_both, ec);
}

}  // namespace

struct SessionService::Impl {
  asio::io_context io;
  tcp::acceptor acceptor{io};
  std::mutex active_mutex;
  tcp::socket* active = nullptr;
  std::atomic<bool> stopping{false};
};

namespace {

/// Clears the busy flag and the active-socket pointer on every exit path.
struct ActiveSession {
  std::atomic<bool>& busy;
  std::mutex& mutex;
  tcp::socket*& active;

  ActiveSession(std::atomic<bool>& b, std::mutex& m, tcp::socket*& a, tcp::socket* socket)
      : busy(b), mutex(m), active(a) {
    std::lock_guard lock(mutex);
    active = socket;
  }
  ~ActiveSession() {
    std::lock_guard lock(mutex);
    active = nullptr;
    busy = false;
  }
};

}  // namespace

SessionService::SessionService(ServiceConfig config)
    : config_(std::move(config)), impl_(std::make_unique<Impl>()) {
  config_.session.validate();
}

SessionService::~SessionService() { stop(); }

void SessionService::start() {
  const tcp::endpoint endpoint(asio::ip::make_address(config_.address), config_.port);
  impl_->acceptor.open(endpoint.protocol());
  impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
  impl_->acceptor.bind(endpoint);
  impl_->acceptor.listen();
  bound_port_ = impl_->acceptor.local_endpoint().port();

  acceptor_thread_ = std::thread([this] {
    for (;;) {
      tcp::socket socket(impl_->io);
      beast::error_code ec;
      impl_->acceptor.accept(socket, ec);
      if (impl_->stopping) break;
      if (ec) continue;
      std::lock_guard lock(threads_mutex_);
      threads_.emplace_back([this, s = std::move(socket)]() mutable {
        try {
          serve_connection(std::move(s));
        } catch (const std::exception& e) {
          std::cerr << "connection: " << e.what() << '\n';
        }
      });
    }
  });
}

void SessionService::serve_connection(boost::asio::ip::tcp::socket socket) {
  beast::flat_buffer buffer;
  http::request<http::string_body> req;
  http::read(socket, buffer, req);
  if (!websocket::is_upgrade(req)) {
    serve_static(socket, req, config_.ui_dir);
    return;
  }
  websocket::stream<tcp::socket> ws(std::move(socket));
  ws.accept(req);
  ws.text(true);
  if (busy_.exchange(true)) {
    ws.write(asio::buffer(close_message("session already active").dump()));
    ws.close(websocket::close_reason(websocket::close_code::try_again_later, "session already active"));
    return;
  }
  ActiveSession guard(busy_, impl_->active_mutex, impl_->active, &beast::get_lowest_layer(ws));
  const std::size_t index = started_++;

  std::ofstream trace_out(numbered(config_.trace_path, index), std::ios::binary);
  if (!trace_out) throw Fault("cannot open trace file");
  TraceWriter trace(trace_out, config_.session);
  std::optional<std::ofstream> capture_out;
  if (config_.capture_path) {
    capture_out.emplace(numbered(*config_.capture_path, index), std::ios::binary);
    *capture_out << nlohmann::json{{"format", kTelemetryFormat}, {"version", kFormatVersion}}.dump()
                 << '\n';
  }

  Session session(config_.session, config_.baseline);
  session.set_row_sink([&trace](const TraceRow& r) { trace.write(r); });
  RateMonitor rate;
  Pose pose;
  std::optional<std::int64_t> last_t;

  auto send = [&ws](const nlohmann::json& msg) { ws.write(asio::buffer(msg.dump())); };

  beast::error_code rec;
  for (;;) {
    beast::flat_buffer frame;
    ws.read(frame, rec);
    if (rec) break;
    const auto text = beast::buffers_to_string(frame.data());
    CommandSample cmd;
    std::vector<SessionEvent> events;
    try {
      cmd = parse_command(text);
      events = session.ingest(cmd);
    } catch (const Fault& f) {
      send({{"type", "error"}, {"message", f.what()}});
      continue;
    }
    if (capture_out) {
      *capture_out << "{\"t_ms\":" << cmd.t_ms << ",\"lin\":" << format_double(cmd.lin)
                   << ",\"ang\":" << format_double(cmd.ang) << "}\n"
                   << std::flush;
    }
    const double dt = last_t ? static_cast<double>(cmd.t_ms - *last_t) / 1000.0
                             : static_cast<double>(kCommandPeriodMs) / 1000.0;
    last_t = cmd.t_ms;
    pose = step_unicycle(pose, cmd.lin, cmd.ang, dt);
    send(pose_message(pose, cmd.t_ms));
    for (const auto& e : events) send(event_message(e));
    if (auto r = rate.on_arrival(RateMonitor::Clock::now())) send(rate_warning_message(*r, cmd.t_ms));
  }

  // the client may already be gone; the trace is finalized either way
  const auto tail = session.finish();
  if (ws.is_open()) {
    beast::error_code ignore;
    for (const auto& e : tail) ws.write(asio::buffer(event_message(e).dump()), ignore);
  }
  trace_out.flush();
  ++completed_;
}

void SessionService::wait() {
  if (acceptor_thread_.joinable()) acceptor_thread_.join();
}

void SessionService::stop() {
  if (!impl_->stopping.exchange(true) && impl_->acceptor.is_open()) {
    // wake the blocking accept
    beast::error_code ec;
    tcp::socket poke(impl_->io);
    poke.connect(tcp::endpoint(asio::ip::make_address(config_.address), bound_port_), ec);
    std::lock_guard lock(impl_->active_mutex);
    if (impl_->active) impl_->active->shutdown(tcp::socket::shutdown_both, ec);
  }
  wait();
  beast::error_code ec;
  impl_->acceptor.close(ec);
  std::lock_guard lock(threads_mutex_);
  for (auto& t : threads_) {
    if (t.joinable()) t.join();
  }
  threads_.clear();
}

}  // namespace behent
