// Acceptance suite: one PASS/FAIL line per criterion.
//
//   behent_acceptance            run everything
//   behent_acceptance --only X   run the criterion named X
//   behent_acceptance --list     print criterion names

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "behent/baseline.hpp"
#include "behent/dpu.hpp"
#include "behent/driver.hpp"
#include "behent/entropy.hpp"
#include "behent/estimator.hpp"
#include "behent/formats.hpp"
#include "behent/protocol.hpp"
#include "behent/replay.hpp"
#include "behent/report.hpp"
#include "behent/service.hpp"
#include "behent/session.hpp"
#include "behent/wais.hpp"
#include "support/ws_client.hpp"

using namespace behent;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[violated: " << what << "] ";
    }
  }
};

constexpr std::uint64_t kSeeds = 5;

Baseline trial_run(std::uint64_t seed) {
  DriverModel m;
  m.seed = seed + 1000;
  return baseline_from_commands(simulate_driver(m, Arena::standard(), 600.0), 600.0, EntropyConfig{});
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(precision);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------------------

void entropy_identities(Outcome& o) {
  const auto profile = DriverProfile::from_alpha(1.0, 1.0);
  // one representative error per bin, boundaries at +-0.5, 1, 2.5, 5
  const std::vector<double> per_bin{-7.0, -3.0, -1.5, -0.7, 0.0, 0.7, 1.5, 3.0, 7.0};
  for (std::size_t b = 0; b < per_bin.size(); ++b) {
    o.require(bin_index(per_bin[b], profile.boundaries_lin) == static_cast<int>(b + 1),
              "representative error lands in bin " + std::to_string(b + 1));
    std::vector<ErrorPair> batch;
    for (int i = 0; i < 17; ++i) batch.push_back({i * 150, per_bin[b], per_bin[b], false});
    const auto c = compute_batch(batch, profile, EntropyConfig{}, 2500);
    o.require(c && c->hp_lin == 0.0 && c->hp_ang == 0.0 && c->total == 0.0,
              "single-bin batch has zero entropy (bin " + std::to_string(b + 1) + ")");
  }
  std::vector<ErrorPair> uniform;
  for (int rep = 0; rep < 2; ++rep)
    for (double e : per_bin) uniform.push_back({static_cast<std::int64_t>(uniform.size()) * 150, e, e, false});
  const auto u = compute_batch(uniform, profile, EntropyConfig{}, 2500);
  o.require(u.has_value(), "uniform batch evaluated");
  if (u) {
    o.require(std::fabs(u->hp_lin - 1.0) <= 1e-12 && std::fabs(u->hp_ang - 1.0) <= 1e-12,
              "uniform 9-bin batch has entropy 1");
    o.require(std::fabs(u->total - 1.0) <= 1e-12, "uniform total entropy 1");
    o.detail << "uniform Hp=" << format_double(u->hp_lin) << " |1-Hp|=" << std::fabs(1.0 - u->hp_lin);
  }
}

void predictor_closed_forms(Outcome& o) {
  for (double c : {0.0, 1.0, -2.5, 0.37}) {
    o.require(predict_next(c, c, c) - c == 0.0, "constant window error is zero");
  }
  for (double k : {1.0, -3.0, 0.5}) {
    // direct: x(n-3), x(n-2), x(n-1) = k, 2k, 3k; measured x(n) = 4k
    const double err = 4.0 * k - predict_next(k, 2.0 * k, 3.0 * k);
    o.require(err == -2.0 * k, "ramp error is -2k for k=" + format_double(k));

    // through the estimator: each raw block holds k*j, so filtered x(j) = k*j
    Estimator est;
    std::vector<ErrorPair> errors;
    for (int i = 0; i < 60; ++i) {
      const double v = k * static_cast<double>(i / 3);
      if (auto e = est.ingest({i * 50, v, -v}).error) errors.push_back(*e);
    }
    bool exact = errors.size() == 17;
    for (const auto& e : errors) exact = exact && e.err_lin == -2.0 * k && e.err_ang == 2.0 * k;
    o.require(exact, "estimator pipeline ramp error is exactly -2k for k=" + format_double(k));
  }
  o.detail << "k in {1, -3, 0.5}: errors -2, 6, -1";
}

void workload_ladder(Outcome& o) {
  const std::vector<WorkloadSegment> ladder{
      {"baseline", 90.0, 1.0, 1.0}, {"low", 90.0, 2.0, 1.0}, {"medium", 90.0, 4.0, 1.0}, {"high", 90.0, 8.0, 1.0}};
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    DriverModel m;
    m.seed = seed;
    m.workload_schedule = ladder;
    SessionConfig cfg;
    cfg.dpu_enabled = false;
    const auto r = replay(simulate_driver(m, Arena::standard(), 360.0), cfg, trial_run(seed));
    const auto stats = segment_statistics(r.rows, ladder);
    o.detail << "seed " << seed << ":";
    for (std::size_t i = 0; i < stats.size(); ++i) {
      o.detail << ' ' << fmt(stats[i].mean) << '(' << stats[i].count << ')';
      o.require(stats[i].count >= 30, "at least 30 batches per segment");
      if (i > 0) o.require(stats[i].mean > stats[i - 1].mean, "strictly increasing segment means");
    }
    o.detail << "; ";
  }
}

void dpu_adaptation(Outcome& o) {
  constexpr double kSession = 1800.0;
  std::size_t decaying_total = 0, constant_total = 0;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const auto base = trial_run(seed);
    o.require(std::isfinite(base.thresholds.avg) && std::isfinite(base.thresholds.std),
              "baseline thresholds are finite");

    DriverModel decaying;
    decaying.seed = seed;
    decaying.workload_schedule = decaying_schedule(kSession, 300.0);
    const auto r = replay(simulate_driver(decaying, Arena::standard(), kSession), SessionConfig{}, base);
    std::vector<ProfileUpdate> updates;
    for (const auto& e : r.events)
      if (const auto* u = std::get_if<ProfileUpdate>(&e)) updates.push_back(*u);
    o.require(updates.size() >= 2, "decaying driver fires at least two updates (seed " + std::to_string(seed) + ")");
    for (std::size_t i = 1; i < updates.size(); ++i) {
      o.require(updates[i].alpha_lin < updates[i - 1].alpha_lin && updates[i].alpha_ang < updates[i - 1].alpha_ang,
                "emitted alphas strictly decrease (seed " + std::to_string(seed) + ")");
    }
    decaying_total += updates.size();

    DriverModel constant;
    constant.seed = seed;
    const auto c = replay(simulate_driver(constant, Arena::standard(), kSession), SessionConfig{}, base);
    std::size_t n = 0;
    for (const auto& e : c.events) n += std::holds_alternative<ProfileUpdate>(e);
    constant_total += n;

    o.detail << "seed " << seed << ": decaying " << updates.size() << " [";
    for (const auto& u : updates) o.detail << ' ' << fmt(u.alpha_lin) << '/' << fmt(u.alpha_ang);
    o.detail << " ] constant " << n << "; ";
  }
  o.require(constant_total * 5 <= decaying_total, "constant-noise update frequency at least 5x lower");
  o.detail << "totals decaying=" << decaying_total << " constant=" << constant_total;
}

void dpu_gating(Outcome& o) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<ErrorPair> errors;
  for (int i = 0; i < 100; ++i) errors.push_back({i * 150, 0.01 * (i + 1), -0.02 * (i + 1), false});

  // every window of three values on a five-point grid, against a grid of
  // thresholds, with the oracle computed independently of the library
  const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<double> avg_thr{0.0, 0.25, 0.5, 0.6, 1.0, kInf};
  const std::vector<double> std_thr{0.0, 0.1, 0.2, 0.35, 0.5, kInf};
  std::size_t cases = 0, mismatches = 0;
  for (double a : grid)
    for (double b : grid)
      for (double c : grid)
        for (double ta : avg_thr)
          for (double ts : std_thr) {
            DpuState s({ta, ts});
            s.window = 3;
            s.record(a);
            s.record(b);
            s.record(c);
            const double m = (a + b + c) / 3.0;
            const double sd = std::sqrt(((a - m) * (a - m) + (b - m) * (b - m) + (c - m) * (c - m)) / 3.0);
            const bool expect = m < ta && sd < ts;
            const auto before = s.thresholds;
            const auto u = dpu_step(s, errors, 0, 0);
            ++cases;
            const bool ok = u.has_value() == expect && (u ? (s.thresholds.avg == m || std::fabs(s.thresholds.avg - m) < 1e-15)
                                                          : s.thresholds == before);
            mismatches += !ok;
          }
  o.require(mismatches == 0, "small-window updates match the strict-inequality oracle");

  // full-size window: mean and std each below, equal to, or above threshold
  std::size_t full_mismatch = 0;
  for (int mrel : {-1, 0, 1})
    for (int srel : {-1, 0, 1})
      for (std::size_t since : {std::size_t{99}, std::size_t{100}, std::size_t{150}}) {
        DpuState s({0.5, 0.1});
        for (int i = 0; i < 150; ++i) s.record(0.5 + 0.05 * mrel + (i % 2 ? 1 : -1) * (0.1 + 0.05 * srel));
        s.since_update = since;
        const bool expect = mrel < 0 && srel < 0 && since >= 100;
        full_mismatch += dpu_step(s, errors, 0, 0).has_value() != expect;
        ++cases;
      }
  o.require(full_mismatch == 0, "100-entry window gating matches the oracle");

  // thresholds never increase, on random traces and on simulated sessions
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::size_t updates = 0;
  bool monotone = true;
  for (int trace = 0; trace < 50; ++trace) {
    DpuState s;
    DpuThresholds prev;
    const double drift = u01(rng);
    for (int i = 0; i < 3000; ++i) {
      s.record(std::clamp(0.6 - drift * i / 3000.0 + 0.2 * (u01(rng) - 0.5), 0.0, 1.0));
      if (auto up = dpu_step(s, errors, i, 0)) {
        ++updates;
        monotone = monotone && up->thresholds.avg <= prev.avg && up->thresholds.std <= prev.std;
        prev = up->thresholds;
      }
    }
  }
  for (std::uint64_t seed = 0; seed < 2; ++seed) {
    DriverModel m;
    m.seed = seed;
    m.workload_schedule = decaying_schedule(1800.0, 600.0);
    const auto base = trial_run(seed);
    const auto r = replay(simulate_driver(m, Arena::standard(), 1800.0), SessionConfig{}, base);
    DpuThresholds prev = base.thresholds;
    for (const auto& e : r.events)
      if (const auto* up = std::get_if<ProfileUpdate>(&e)) {
        ++updates;
        monotone = monotone && up->thresholds.avg <= prev.avg && up->thresholds.std <= prev.std;
        prev = up->thresholds;
      }
  }
  o.require(monotone, "thresholds non-increasing across every update sequence");
  o.require(updates > 0, "monotonicity check saw updates");
  o.detail << cases << " gating cases, " << updates << " updates checked for monotone thresholds";
}

void wais_closed_loop(Outcome& o) {
  // strict inequality at the threshold itself
  IndicationState st;
  bool fired = false;
  for (int i = 0; i < 10; ++i) {
    EntropyComputation c;
    c.t_ms = 2500 * (i + 1);
    c.total = 0.6;
    auto step = wais_step(st, c, WaisConfig{});
    st = step.state;
    fired = fired || step.event.has_value();
  }
  o.require(!fired && st.avg == 0.6, "moving average of exactly 0.6 stays NORMAL");

  double reduction_sum = 0.0, pre_sum = 0.0, post_sum = 0.0;
  std::size_t events = 0;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    DriverModel m;
    m.seed = seed;
    m.workload_schedule = {{"high", 900.0, 4.0, 1.0}};
    m.warning_response = {true, 0.15, 1.0};
    Session session(SessionConfig{}, trial_run(seed));
    const auto run = simulate_closed_loop(m, Arena::standard(), 900.0, session);
    std::size_t seed_events = 0;
    for (const auto& e : run.events) {
      const auto* t = std::get_if<TransitionEvent>(&e);
      if (!t || t->to != Indication::kHigh) continue;
      double pre = 0.0, post = 0.0;
      std::size_t np = 0, nq = 0;
      for (const auto& r : session.rows()) {
        const auto dt = r.computation.t_ms - t->t_ms;
        if (dt > -10000 && dt <= 0) pre += r.computation.total, ++np;
        if (dt > 0 && dt <= 10000) post += r.computation.total, ++nq;
      }
      if (np == 0 || nq == 0) continue;
      pre /= static_cast<double>(np);
      post /= static_cast<double>(nq);
      reduction_sum += 1.0 - post / pre;
      pre_sum += pre;
      post_sum += post;
      ++events;
      ++seed_events;
    }
    o.detail << "seed " << seed << ": " << seed_events << " warnings; ";
  }
  o.require(events >= 20, "at least 20 HIGH events");
  const double mean_reduction = events ? reduction_sum / static_cast<double>(events) : 0.0;
  o.require(mean_reduction >= 0.15, "mean per-event reduction at least 15%");
  o.require(post_sum <= 0.85 * pre_sum, "mean post-warning entropy at most 0.85x pre-warning");
  o.detail << "events=" << events << " mean reduction=" << fmt(100.0 * mean_reduction, 1)
           << "% pooled post/pre=" << fmt(events ? post_sum / pre_sum : 0.0);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism_and_equivalence(Outcome& o) {
  // offline determinism
  DriverModel m;
  m.seed = 42;
  m.workload_schedule = {{"calm", 120.0, 1.0, 1.0}, {"busy", 120.0, 4.0, 1.0}};
  const auto log_a = simulate_driver(m, Arena::standard(), 240.0);
  const auto log_b = simulate_driver(m, Arena::standard(), 240.0);
  o.require(log_a == log_b, "same seed gives the same log");
  SessionConfig cfg;
  cfg.seed = 42;
  const auto base = trial_run(42);
  std::ostringstream ta, tb;
  replay(log_a, cfg, base, &ta);
  replay(log_b, cfg, base, &tb);
  o.require(ta.str() == tb.str() && !ta.str().empty(), "byte-identical traces");

  Session s1(cfg, base), s2(cfg, base);
  DriverModel warned = m;
  warned.warning_response.enabled = true;
  const auto c1 = simulate_closed_loop(warned, Arena::standard(), 240.0, s1);
  const auto c2 = simulate_closed_loop(warned, Arena::standard(), 240.0, s2);
  o.require(c1.log == c2.log && s1.rows() == s2.rows(), "closed-loop runs reproduce exactly");

  // live session vs offline replay of its capture
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("behent_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  ServiceConfig sc;
  sc.session = cfg;
  sc.baseline = base;
  sc.trace_path = dir / "live.csv";
  sc.capture_path = dir / "capture.jsonl";
  sc.port = 0;
  SessionService service(sc);
  service.start();

  DriverModel live_driver;
  live_driver.seed = 7;
  live_driver.workload_schedule = {{"busy", 20.0, 4.0, 1.0}};
  const auto script = simulate_driver(live_driver, Arena::standard(), 20.0);
  std::vector<nlohmann::json> live_events;
  std::size_t poses = 0;
  const auto wall_start = std::chrono::steady_clock::now();
  {
    behent::testing::WsClient client(service.port());
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& cmd : script) {
      std::this_thread::sleep_until(t0 + std::chrono::milliseconds(cmd.t_ms));
      client.send(command_message(cmd));
      for (const auto& msg : client.receive_until("pose")) {
        const auto type = msg["type"].get<std::string>();
        if (type == "pose") ++poses;
        else if (type == "entropy" || type == "indication" || type == "profile_update") live_events.push_back(msg);
      }
    }
    client.close();
  }
  for (int i = 0; i < 500 && service.completed_sessions() < 1; ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  service.stop();
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  o.require(poses == script.size(), "one pose echo per command");

  const auto captured = read_telemetry(dir / "capture.jsonl");
  o.require(captured == script, "capture equals the commands sent");
  std::ostringstream offline_trace;
  const auto offline = replay(captured, cfg, base, &offline_trace);
  std::vector<nlohmann::json> offline_events;
  for (const auto& e : offline.events) offline_events.push_back(nlohmann::json::parse(event_message(e).dump()));

  // events produced while the client was connected must match exactly; the
  // remainder is the closing tick, delivered only to the trace
  bool prefix = live_events.size() <= offline_events.size();
  for (std::size_t i = 0; prefix && i < live_events.size(); ++i) prefix = live_events[i] == offline_events[i];
  o.require(prefix, "live event sequence equals offline replay");
  bool tail_ok = true;
  for (std::size_t i = live_events.size(); i < offline_events.size(); ++i)
    tail_ok = tail_ok && offline_events[i]["t_ms"].get<std::int64_t>() > script.back().t_ms - 2500;
  o.require(tail_ok, "only the closing tick is absent from the live stream");
  o.require(slurp(dir / "live.csv") == offline_trace.str(), "live trace bytes equal offline trace bytes");
  o.require(!live_events.empty(), "live session produced events");
  fs::remove_all(dir);
  o.detail << script.size() << " commands over " << fmt(wall, 1) << " s wall, " << live_events.size()
           << " live events, " << offline_events.size() << " offline events";
}

struct Criterion {
  const char* name;
  const char* title;
  std::function<void(Outcome&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"entropy_identities", "entropy identities", entropy_identities},
      {"predictor_closed_forms", "predictor closed forms", predictor_closed_forms},
      {"workload_ladder", "workload ladder ordering", workload_ladder},
      {"dpu_adaptation", "profile update adaptation", dpu_adaptation},
      {"dpu_gating", "profile update gating", dpu_gating},
      {"wais_closed_loop", "warning closed loop", wais_closed_loop},
      {"determinism", "determinism and live/offline equivalence", determinism_and_equivalence},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--list") {
      for (const auto& c : criteria()) std::cout << c.name << '\n';
      return 0;
    }
    if (arg == "--only" && i + 1 < argc) only = argv[++i];
  }

  int failed = 0, ran = 0;
  for (const auto& c : criteria()) {
    if (!only.empty() && only != c.name) continue;
    ++ran;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.title << " (" << fmt(secs, 2) << " s): " << o.detail.str()
              << std::endl;
    failed += !o.pass;
  }
  if (ran == 0) {
    std::cerr << "unknown criterion '" << only << "'\n";
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
