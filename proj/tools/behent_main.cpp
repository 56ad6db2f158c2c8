// behent: command-line front end for the behavioural entropy engine.

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <pthread.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "behent/baseline.hpp"
#include "behent/driver.hpp"
#include "behent/errors.hpp"
#include "behent/formats.hpp"
#include "behent/protocol.hpp"
#include "behent/replay.hpp"
#include "behent/report.hpp"
#include "behent/service.hpp"
#include "behent/trace.hpp"

namespace {

using namespace behent;

struct SessionFlags {
  double period_s = 2.5;
  double threshold = 0.6;
  double hysteresis = 0.0;
  std::vector<double> weights{0.5, 0.5};
  bool no_dpu = false;
  bool classical = false;
  std::uint64_t seed = 0;

  void add_to(CLI::App* app) {
    app->add_option("--period", period_s, "Entropy computation period in seconds")->capture_default_str();
    app->add_option("--threshold", threshold, "Warning threshold on the moving average")->capture_default_str();
    app->add_option("--hysteresis", hysteresis, "Gap below the threshold before a warning clears")
        ->capture_default_str();
    app->add_option("--weights", weights, "Linear and angular entropy weights")->expected(2);
    app->add_flag("--no-dpu", no_dpu, "Disable online profile updates");
    app->add_flag("--classical-predictor", classical, "Use the halved second-difference predictor");
  }

  SessionConfig config(const std::string& baseline_source) const {
    SessionConfig c;
    c.entropy.period_s = period_s;
    c.entropy.weights = {weights.at(0), weights.at(1)};
    c.wais.threshold = threshold;
    c.wais.hysteresis = hysteresis;
    c.dpu_enabled = !no_dpu;
    c.predictor = classical ? PredictorForm::kClassical : PredictorForm::kSummedDifferences;
    c.baseline_source = baseline_source;
    c.seed = seed;
    c.validate();
    return c;
  }
};

Baseline load_baseline(const std::string& profile_path, const SessionConfig& defaults) {
  if (profile_path.empty()) return skipped_baseline(defaults.default_alpha_lin, defaults.default_alpha_ang);
  return read_profile(profile_path);
}

std::string source_of(const std::string& profile_path) {
  return profile_path.empty() ? "defaults" : "file:" + profile_path;
}

void write_events(std::ostream& out, const std::vector<SessionEvent>& events) {
  for (const auto& e : events) out << event_message(e).dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavioural entropy workload engine"};
  app.require_subcommand(1);

  // baseline
  auto* baseline_cmd = app.add_subcommand("baseline", "Build a driver profile from a trial-run log");
  std::string baseline_log, baseline_out = "profile.json";
  double baseline_duration = 600.0;
  std::size_t min_errors = 0;
  bool skip_baseline = false;
  SessionFlags baseline_flags;
  baseline_cmd->add_option("--log", baseline_log, "Telemetry log (JSON Lines)");
  baseline_cmd->add_option("--duration", baseline_duration, "Baseline duration in seconds")->capture_default_str();
  baseline_cmd->add_option("--out", baseline_out, "Profile output path")->capture_default_str();
  baseline_cmd->add_option("--min-errors", min_errors,
                           "Minimum estimation errors (default: 90% of those the duration should yield)");
  baseline_cmd->add_flag("--skip", skip_baseline, "Write default alphas with infinite thresholds");
  baseline_flags.add_to(baseline_cmd);

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic operator log");
  std::string sim_out = "telemetry.jsonl", sim_schedule, sim_profile, sim_trace, sim_events;
  double sim_duration = 600.0, sigma_lin = 0.05, sigma_ang = 0.10, half_life = 0.0;
  double recovery = 0.5, reaction = 1.0;
  bool closed_loop = false;
  SessionFlags sim_flags;
  simulate_cmd->add_option("--out", sim_out, "Telemetry log output")->capture_default_str();
  simulate_cmd->add_option("--duration", sim_duration, "Seconds to simulate")->capture_default_str();
  simulate_cmd->add_option("--seed", sim_flags.seed, "RNG seed")->capture_default_str();
  simulate_cmd->add_option("--sigma-lin", sigma_lin, "Linear jerk-noise scale, m/s")->capture_default_str();
  simulate_cmd->add_option("--sigma-ang", sigma_ang, "Angular jerk-noise scale, rad/s")->capture_default_str();
  simulate_cmd->add_option("--schedule", sim_schedule, "Workload segments label:seconds[:sigma[:speed]],...");
  simulate_cmd->add_option("--decay-half-life", half_life, "Noise half-life in seconds (decaying operator)");
  simulate_cmd->add_flag("--closed-loop", closed_loop, "Run the engine live; the driver reacts to warnings");
  simulate_cmd->add_option("--recovery-factor", recovery, "Noise multiplier while warned")->capture_default_str();
  simulate_cmd->add_option("--reaction-delay", reaction, "Seconds before reacting to a warning")
      ->capture_default_str();
  simulate_cmd->add_option("--profile", sim_profile, "Profile for closed-loop runs");
  simulate_cmd->add_option("--trace", sim_trace, "Trace CSV for closed-loop runs");
  simulate_cmd->add_option("--events", sim_events, "Event JSON Lines for closed-loop runs");
  sim_flags.add_to(simulate_cmd);

  // replay
  auto* replay_cmd = app.add_subcommand("replay", "Run a telemetry log through the engine offline");
  std::string replay_log, replay_profile, replay_trace = "trace.csv", replay_events;
  SessionFlags replay_flags;
  replay_cmd->add_option("--log", replay_log, "Telemetry log (JSON Lines)")->required();
  replay_cmd->add_option("--profile", replay_profile, "Driver profile; defaults when omitted");
  replay_cmd->add_option("--trace", replay_trace, "Trace CSV output")->capture_default_str();
  replay_cmd->add_option("--events", replay_events, "Event JSON Lines output");
  replay_flags.add_to(replay_cmd);

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Host a live session over WebSocket");
  std::string serve_profile, serve_trace = "trace.csv", serve_capture, serve_ui, serve_address = "127.0.0.1";
  unsigned short serve_port = 8765;
  SessionFlags serve_flags;
  serve_cmd->add_option("--port", serve_port, "Listen port")->capture_default_str();
  serve_cmd->add_option("--address", serve_address, "Listen address")->capture_default_str();
  serve_cmd->add_option("--profile", serve_profile, "Driver profile; defaults when omitted");
  serve_cmd->add_option("--trace", serve_trace, "Trace CSV output")->capture_default_str();
  serve_cmd->add_option("--capture", serve_capture, "Record received commands as a telemetry log");
  serve_cmd->add_option("--ui-dir", serve_ui, "Static UI assets served over plain HTTP");
  serve_flags.add_to(serve_cmd);

  // report
  auto* report_cmd = app.add_subcommand("report", "Per-segment entropy statistics from a trace");
  std::string report_trace, report_schedule = "baseline:90,low:90,medium:90,high:90";
  report_cmd->add_option("--trace", report_trace, "Trace CSV")->required();
  report_cmd->add_option("--schedule", report_schedule, "Segments label:seconds,...")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*baseline_cmd) {
      const auto config = baseline_flags.config("inline");
      Baseline b;
      if (skip_baseline) {
        b = skipped_baseline(config.default_alpha_lin, config.default_alpha_ang);
      } else {
        if (baseline_log.empty()) throw ConfigError("--log is required unless --skip is given");
        const auto log = read_telemetry(baseline_log);
        const auto required =
            min_errors > 0 ? min_errors : required_baseline_errors(baseline_duration, config.entropy);
        b = baseline_from_commands(log, baseline_duration, config.entropy, config.predictor, required);
      }
      write_profile(baseline_out, b);
      std::cout << "alpha_lin=" << format_double(b.profile.alpha_lin)
                << " alpha_ang=" << format_double(b.profile.alpha_ang) << " errors=" << b.error_count
                << " entropies=" << b.entropy_history.size() << " -> " << baseline_out << '\n';
      return 0;
    }

    if (*simulate_cmd) {
      DriverModel model;
      model.noise_sigma_lin = sigma_lin;
      model.noise_sigma_ang = sigma_ang;
      model.seed = sim_flags.seed;
      if (!sim_schedule.empty()) model.workload_schedule = parse_schedule(sim_schedule);
      if (half_life > 0.0) model.workload_schedule = decaying_schedule(sim_duration, half_life);
      const auto arena = Arena::standard();
      if (!closed_loop) {
        write_telemetry(sim_out, simulate_driver(model, arena, sim_duration));
        std::cout << "wrote " << sim_out << '\n';
        return 0;
      }
      model.warning_response = {true, recovery, reaction};
      const auto config = sim_flags.config(source_of(sim_profile));
      Session session(config, load_baseline(sim_profile, config));
      std::optional<std::ofstream> trace_out;
      std::optional<TraceWriter> trace;
      if (!sim_trace.empty()) {
        trace_out.emplace(sim_trace, std::ios::binary);
        trace.emplace(*trace_out, config);
        session.set_row_sink([&trace](const TraceRow& r) { trace->write(r); });
      }
      const auto run = simulate_closed_loop(model, arena, sim_duration, session);
      write_telemetry(sim_out, run.log);
      if (!sim_events.empty()) {
        std::ofstream ev(sim_events, std::ios::binary);
        write_events(ev, run.events);
      }
      std::cout << "wrote " << sim_out << " (" << session.rows().size() << " entropy computations)\n";
      return 0;
    }

    if (*replay_cmd) {
      const auto config = replay_flags.config(source_of(replay_profile));
      const auto log = read_telemetry(replay_log);
      if (log.empty()) std::cerr << "warning: " << replay_log << " holds no commands\n";
      std::ofstream trace_out(replay_trace, std::ios::binary);
      if (!trace_out) throw Fault("cannot open " + replay_trace);
      const auto result = replay(log, config, load_baseline(replay_profile, config), &trace_out);
      if (!replay_events.empty()) {
        std::ofstream ev(replay_events, std::ios::binary);
        write_events(ev, result.events);
      }
      std::cout << result.rows.size() << " entropy computations -> " << replay_trace << '\n';
      return 0;
    }

    if (*serve_cmd) {
      ServiceConfig sc;
      sc.session = serve_flags.config(source_of(serve_profile));
      sc.baseline = load_baseline(serve_profile, sc.session);
      sc.trace_path = serve_trace;
      if (!serve_capture.empty()) sc.capture_path = serve_capture;
      if (!serve_ui.empty()) sc.ui_dir = serve_ui;
      sc.address = serve_address;
      sc.port = serve_port;

      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);

      SessionService service(sc);
      service.start();
      std::cout << "listening on ws://" << serve_address << ':' << service.port() << '\n' << std::flush;
      int sig = 0;
      sigwait(&signals, &sig);
      service.stop();
      std::cout << service.completed_sessions() << " session(s) served\n";
      return 0;
    }

    if (*report_cmd) {
      const auto trace = read_trace(report_trace);
      print_table(std::cout, segment_statistics(trace.rows, parse_schedule(report_schedule)));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
