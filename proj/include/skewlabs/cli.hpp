#pragma once

// Operator entry point: optimize / verify / exhaustive / bench / estimate.
// run_cli is main() minus the process boundary so tests can drive it
// in-process. Exit codes: 0 success, 1 requested target not reached,
// 2 usage error. Human output goes to `out`, diagnostics to `err`.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "skewlabs/oracle.hpp"
#include "skewlabs/seqcore.hpp"
#include "skewlabs/seqio.hpp"
#include "skewlabs/solvers.hpp"

namespace skewlabs::cli {

namespace detail {

inline std::string fmt(const char* f, auto... vs) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, vs...);
  return buf;
}

inline void check_odd_n(int n) {
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("n must be odd and >= 3");
}

inline std::filesystem::path default_log_path() {
  if (const char* dir = std::getenv("SKEWLABS_LOG_DIR"))
    return std::filesystem::path(dir) / "runs.jsonl";
  return "runs.jsonl";
}

struct OptimizeArgs {
  int n = 0;
  std::string algo;
  int workers = 1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double target_mf = 0.0;
  bool target_given = false;
  int quake_size = 0;
  bool quake_given = false;
  std::uint64_t inner = 10'000;
  bool inner_given = false;
  std::uint64_t outer = 1'000'000;
  bool outer_given = false;
  std::uint64_t steps = 1'000'000;
  bool steps_given = false;
  bool record_only = false;
  std::string log_path;
  double time_limit = 0.0;
  bool time_limit_given = false;
};

struct WorkerEvent {
  bool final = false;
  int worker = 0;
  RunRecord record;
};

inline int cmd_optimize(const OptimizeArgs& a, std::ostream& out,
                        std::ostream& err) {
  check_odd_n(a.n);
  if (a.algo != "saw" && a.algo != "shc")
    throw std::invalid_argument("unknown algo '" + a.algo +
                                "' (expected saw or shc)");
  const bool saw = a.algo == "saw";
  if (saw && (a.quake_given || a.steps_given || a.record_only))
    throw std::invalid_argument(
        "contradictory flags: --quake/--steps/--record-only-acceptance "
        "apply to shc only");
  if (!saw && (a.inner_given || a.outer_given))
    throw std::invalid_argument(
        "contradictory flags: --inner/--outer apply to saw only");
  if (a.workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (a.quake_given && a.quake_size < 1)
    throw std::invalid_argument("quake size must be >= 1");
  if (a.steps_given && a.steps < 1)
    throw std::invalid_argument("steps must be >= 1");
  if ((a.inner_given && a.inner < 1) || (a.outer_given && a.outer < 1))
    throw std::invalid_argument("thresholds must be >= 1");
  if (a.time_limit_given && a.time_limit <= 0.0)
    throw std::invalid_argument("time limit must be > 0");

  std::uint64_t seed = a.seed;
  if (!a.seed_given) seed = std::random_device{}();

  const auto log_path = a.log_path.empty()
                            ? default_log_path()
                            : std::filesystem::path(a.log_path);
  std::ofstream log(log_path, std::ios::app);
  if (!log)
    throw std::invalid_argument("cannot open log file: " + log_path.string());

  out << "optimize: n=" << a.n << " algo=" << a.algo
      << " workers=" << a.workers << " seed=" << seed;
  if (!a.seed_given) out << " (from entropy; pass --seed to reproduce)";
  if (!saw) {
    const int q = a.quake_given ? a.quake_size : quake_schedule(a.n);
    out << " quake=" << q << " steps=" << a.steps;
  } else {
    out << " inner=" << a.inner << " outer=" << a.outer;
  }
  if (a.target_given) out << " target-mf=" << a.target_mf;
  if (a.time_limit_given) out << " time-limit=" << a.time_limit << "s";
  out << "\n";

  const auto start = std::chrono::steady_clock::now();
  const auto deadline =
      a.time_limit_given
          ? std::optional(start + std::chrono::duration_cast<
                                      std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(a.time_limit)))
          : std::nullopt;

  std::atomic<bool> stop_flag{false};
  std::mutex mu;
  std::condition_variable cv;
  std::deque<WorkerEvent> queue;

  const auto push = [&](WorkerEvent e) {
    {
      std::lock_guard lk(mu);
      queue.push_back(std::move(e));
    }
    cv.notify_one();
  };

  const auto worker_body = [&](int idx) {
    SearchHooks hooks;
    hooks.should_stop = [&] {
      if (stop_flag.load(std::memory_order_relaxed)) return true;
      if (deadline && std::chrono::steady_clock::now() >= *deadline)
        return true;
      return false;
    };
    const auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           start)
          .count();
    };
    if (saw) {
      SawConfig cfg;
      cfg.inner_threshold = a.inner;
      cfg.outer_threshold = a.outer;
      cfg.seed = seed + static_cast<std::uint64_t>(idx);
      if (a.target_given) cfg.target_mf = a.target_mf;
      hooks.on_improvement = [&](const ImprovementEvent& ev) {
        push({false, idx,
              RunRecord{a.n, cfg.seed, cfg, ev.energy, ev.merit_factor,
                        ev.sequence, elapsed(), ev.step, ev.quakes}});
      };
      auto rec = saw_search(a.n, cfg, hooks);
      stop_flag.store(true, std::memory_order_relaxed);
      push({true, idx, std::move(rec)});
    } else {
      ShcConfig cfg;
      cfg.step_threshold = a.steps;
      if (a.quake_given) cfg.quake_size = a.quake_size;
      cfg.seed = seed + static_cast<std::uint64_t>(idx);
      if (a.target_given) cfg.target_mf = a.target_mf;
      cfg.record_only_acceptance = a.record_only;
      hooks.on_improvement = [&](const ImprovementEvent& ev) {
        push({false, idx,
              RunRecord{a.n, cfg.seed, cfg, ev.energy, ev.merit_factor,
                        ev.sequence, elapsed(), ev.step, ev.quakes}});
      };
      auto rec = shc_search(a.n, cfg, hooks);
      stop_flag.store(true, std::memory_order_relaxed);
      push({true, idx, std::move(rec)});
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(a.workers));
  for (int i = 0; i < a.workers; ++i) threads.emplace_back(worker_body, i);

  std::vector<RunRecord> finals;
  std::int64_t global_best = std::numeric_limits<std::int64_t>::max();
  bool log_ok = true;
  int finished = 0;
  while (finished < a.workers) {
    WorkerEvent e = [&] {
      std::unique_lock lk(mu);
      cv.wait(lk, [&] { return !queue.empty(); });
      WorkerEvent ev = std::move(queue.front());
      queue.pop_front();
      return ev;
    }();
    const bool improves = e.record.best_energy < global_best;
    if (improves) global_best = e.record.best_energy;
    if (e.final || improves) {
      if (log_ok) {
        try {
          write_run_record(log, e.record);
          log.flush();
        } catch (const std::exception& ex) {
          err << "warning: run log write failed: " << ex.what() << "\n";
          log_ok = false;
        }
      }
    }
    if (e.final) {
      ++finished;
      finals.push_back(std::move(e.record));
    } else if (improves) {
      out << detail::fmt(
          "improve worker=%d step=%llu quakes=%llu energy=%lld mf=%.6f "
          "t=%.1fs\n",
          e.worker, static_cast<unsigned long long>(e.record.steps),
          static_cast<unsigned long long>(e.record.quakes),
          static_cast<long long>(e.record.best_energy), e.record.best_mf,
          e.record.wall_time_s);
    }
  }
  for (auto& t : threads) t.join();

  const auto* best = &finals.front();
  for (const auto& r : finals)
    if (r.best_energy < best->best_energy) best = &r;
  out << detail::fmt("best: n=%d energy=%lld mf=%.6f half=%s\n", a.n,
                     static_cast<long long>(best->best_energy), best->best_mf,
                     encode_hex(best->best_sequence.half()).c_str());
  out << "log: " << log_path.string() << "\n";

  if (a.target_given) {
    if (best->best_mf >= a.target_mf) {
      out << detail::fmt("target reached: mf %.6f >= %g\n", best->best_mf,
                         a.target_mf);
      return 0;
    }
    out << detail::fmt("target not reached: best mf %.6f < %g\n",
                       best->best_mf, a.target_mf);
    return 1;
  }
  return 0;
}

inline int cmd_verify(const std::string& hex, int n, std::ostream& out) {
  const auto seq = decode_hex(hex, n);
  const auto side = sidelobes_naive(seq);
  const auto rep = report(side);
  out << "n: " << n << "\n";
  out << "skew-symmetric: " << (is_skew_symmetric(seq) ? "yes" : "no") << "\n";
  out << "energy: " << rep.energy << "\n";
  out << detail::fmt("merit factor: %.6f\n", rep.merit_factor);
  out << "psl: " << rep.psl << "\n";
  return 0;
}

inline int cmd_exhaustive(int l, std::ostream& out) {
  const auto res = exhaustive_best(l);  // guards l itself
  const int n = 2 * l + 1;
  out << "l=" << l << " n=" << n << "\n";
  out << "best energy: " << res.best_energy << "\n";
  out << detail::fmt("best merit factor: %.6f\n", res.best_mf);
  out << "optimal halves: " << res.optimal_halves.size()
      << " (first element fixed to +1)\n";
  for (const auto& half : res.optimal_halves) {
    const auto seq = SkewSymmetricSequence::from_half(half);
    out << "  half=" << encode_hex(half) << " full=" << encode_hex(seq)
        << "\n";
  }
  return 0;
}

inline int cmd_bench(const std::vector<int>& n_list, int reps,
                     std::ostream& out) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  for (const int n : n_list) check_odd_n(n);

  out << "memory model (4-byte integers): tau table vs sidelobe array\n";
  for (const int n : {256, 512, 1024, 5000, 20000, 99999}) {
    const auto m = memory_estimate(n);
    out << detail::fmt("  %6d  %12s  %12s\n", n,
                       format_bytes(m.tau_bytes).c_str(),
                       format_bytes(m.sidelobe_bytes).c_str());
  }

  out << "timing (reps=" << reps << "):\n";
  std::vector<double> deriv_ns;
  for (const int n : n_list) {
    const int l = (n - 1) / 2;
    std::mt19937_64 rng(7);
    auto psi = random_sequence_from(rng, l);
    auto side = sidelobes_naive(psi);
    std::vector<int> qs(static_cast<std::size_t>(reps));
    for (auto& q : qs)
      q = static_cast<int>(skewlabs::detail::bounded_rand(
          rng, static_cast<std::uint64_t>(l)));

    std::int64_t sink = 0;
    for (int w = 0; w < std::min(reps, 16); ++w)
      sink += derivative(psi, side, qs[static_cast<std::size_t>(w)]);
    auto t0 = std::chrono::steady_clock::now();
    for (const int q : qs) sink += derivative(psi, side, q);
    auto t1 = std::chrono::steady_clock::now();
    for (const int q : qs) sink += try_flip(psi, side, q);
    auto t2 = std::chrono::steady_clock::now();

    const double dns =
        std::chrono::duration<double, std::nano>(t1 - t0).count() / reps;
    const double fns =
        std::chrono::duration<double, std::nano>(t2 - t1).count() / reps;
    deriv_ns.push_back(dns);
    out << detail::fmt(
        "  n=%-7d derivative %9.1f ns/op   flip %9.1f ns/op   (checksum "
        "%lld)\n",
        n, dns, fns, static_cast<long long>(sink));
  }
  if (n_list.size() >= 2) {
    const double t_ratio = deriv_ns.back() / deriv_ns.front();
    const double n_ratio =
        static_cast<double>(n_list.back()) / n_list.front();
    out << detail::fmt(
        "linearity: derivative time ratio %.2f for size ratio %.2f\n",
        t_ratio, n_ratio);
  }
  return 0;
}

inline int cmd_estimate(int n, const std::string& export_path,
                        const std::vector<int>& export_ns, std::ostream& out,
                        std::ostream& err) {
  if (!export_path.empty()) {
    std::vector<int> ns = export_ns.empty() ? std::vector<int>{n} : export_ns;
    for (const int m : ns) check_odd_n(m);
    export_schedule_csv(std::filesystem::path(export_path), ns);
    out << "wrote schedule csv: " << export_path << " (" << ns.size()
        << " rows)\n";
    return 0;
  }
  check_odd_n(n);
  out << "n=" << n << "\n";
  out << "quake (fit): " << quake_schedule(n) << "\n";
  if (const auto table = quake_table_lookup(n))
    out << "quake (table): " << *table << "\n";
  const double raw = time_estimate_raw(n);
  const double secs = time_estimate(n);
  if (raw < 0.0)
    err << detail::fmt(
        "warning: time fit is negative (%.1f s) at n=%d; clamped to 0\n", raw,
        n);
  out << detail::fmt("time to MF>5 (fit): %.1f s (~%.1f h)\n", secs,
                     secs / 3600.0);
  return 0;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"merit-factor toolkit for skew-symmetric binary sequences"};
  app.name("skewlabs");
  app.require_subcommand(1);

  detail::OptimizeArgs oa;
  auto* optimize = app.add_subcommand(
      "optimize", "run a stochastic search for a high merit factor");
  optimize->add_option("--n", oa.n, "sequence length (odd, >= 3)")
      ->required();
  optimize->add_option("--algo", oa.algo, "search algorithm: saw or shc")
      ->required();
  optimize->add_option("--workers", oa.workers,
                       "independent solver instances");
  auto* o_seed = optimize->add_option("--seed", oa.seed,
                                      "base seed; worker i uses seed+i");
  auto* o_target =
      optimize->add_option("--target-mf", oa.target_mf,
                           "stop once the best merit factor reaches this");
  auto* o_quake =
      optimize->add_option("--quake", oa.quake_size,
                           "shc: positions flipped per quake "
                           "(default: schedule fit)");
  auto* o_inner = optimize->add_option("--inner", oa.inner,
                                       "saw: steps per walk before restart");
  auto* o_outer =
      optimize->add_option("--outer", oa.outer, "saw: walks before giving up");
  auto* o_steps =
      optimize->add_option("--steps", oa.steps, "shc: scan/quake rounds");
  auto* o_accept = optimize->add_flag(
      "--record-only-acceptance", oa.record_only,
      "shc variant: accept only flips that beat the all-time best "
      "energy (the search then tends to freeze; off by default)");
  optimize->add_option("--log", oa.log_path,
                       "run log path (default: $SKEWLABS_LOG_DIR/runs.jsonl "
                       "or ./runs.jsonl)");
  auto* o_limit = optimize->add_option("--time-limit", oa.time_limit,
                                       "wall-clock budget in seconds");

  std::string v_hex;
  int v_n = 0;
  auto* verify = app.add_subcommand(
      "verify", "score a hex-encoded sequence (energy, MF, PSL)");
  verify->add_option("--hex", v_hex, "sequence payload in hex")->required();
  verify->add_option("--n", v_n, "sequence length in bits")->required();

  int e_l = 0;
  auto* exhaustive = app.add_subcommand(
      "exhaustive", "exact optimum over all halves of length l+1 (l <= 16)");
  exhaustive->add_option("--l", e_l, "half-length")->required();

  std::vector<int> b_ns{2001, 20001};
  int b_reps = 1000;
  auto* bench = app.add_subcommand(
      "bench", "time the flip/probe kernels and print the memory model");
  bench->add_option("--n-list", b_ns, "lengths to time")->delimiter(',');
  bench->add_option("--reps", b_reps, "kernel invocations per length");

  int s_n = 0;
  std::string s_export;
  std::vector<int> s_ns;
  auto* estimate = app.add_subcommand(
      "estimate", "quake size and runtime predictions for a length");
  auto* s_n_opt = estimate->add_option("--n", s_n, "sequence length");
  estimate->add_option("--export", s_export,
                       "write n,quake,est_seconds csv to this path");
  estimate->add_option("--n-list", s_ns, "lengths for --export")
      ->delimiter(',');

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("skewlabs");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(optimize)) {
      oa.seed_given = o_seed->count() > 0;
      oa.target_given = o_target->count() > 0;
      oa.quake_given = o_quake->count() > 0;
      oa.inner_given = o_inner->count() > 0;
      oa.outer_given = o_outer->count() > 0;
      oa.steps_given = o_steps->count() > 0;
      oa.time_limit_given = o_limit->count() > 0;
      (void)o_accept;
      return detail::cmd_optimize(oa, out, err);
    }
    if (app.got_subcommand(verify)) return detail::cmd_verify(v_hex, v_n, out);
    if (app.got_subcommand(exhaustive)) return detail::cmd_exhaustive(e_l, out);
    if (app.got_subcommand(bench)) return detail::cmd_bench(b_ns, b_reps, out);
    if (app.got_subcommand(estimate))
      return detail::cmd_estimate(s_n_opt->count() ? s_n : 0, s_export, s_ns,
                                  out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace skewlabs::cli
