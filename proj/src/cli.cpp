#include "crabnet/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "crabnet/configspace.hpp"
#include "crabnet/error.hpp"
#include "crabnet/graph.hpp"
#include "crabnet/link_stats.hpp"
#include "crabnet/simulate.hpp"

namespace crabnet::cli {

namespace {

struct RunFlags {
  std::string scenario;
  std::string algo = "crab";
  std::vector<std::string> algos;
  std::string criterion = "coverage";
  std::optional<double> threshold;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds;
  double duration = 10.0;
  double decision_period = 1.0;
  double slot = 0.1;
  int max_iters = 50;
  std::optional<int> max_configs;
  std::string out;
  std::string events_csv;
  std::string diagnostics;
  double ucb_c = 1.4142135623730951;
  std::uint64_t ucb_iterations = kUcbIterationCap;
  double dbscan_eps = 15.0;
  int dbscan_min_pts = 2;
  std::string sweep;
  double time = -1.0;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

void add_scenario_flags(CLI::App* app, RunFlags& f) {
  app->add_option("--scenario", f.scenario, "Scenario config file")->required();
  app->add_option("--criterion", f.criterion, "Connectivity criterion")
      ->check(CLI::IsMember({"distance", "los", "coverage"}));
  app->add_option("--threshold", f.threshold, "Connectivity threshold c_thr");
  app->add_option("--max-configs", f.max_configs, "Candidate configurations per gNB")->check(CLI::PositiveNumber);
}

void add_sim_flags(CLI::App* app, RunFlags& f) {
  app->add_option("--duration", f.duration, "Simulated seconds")->check(CLI::PositiveNumber);
  app->add_option("--decision-period", f.decision_period, "Seconds between decisions")->check(CLI::PositiveNumber);
  app->add_option("--slot", f.slot, "Enactment slot in seconds")->check(CLI::PositiveNumber);
  app->add_option("--max-iters", f.max_iters, "Belief-propagation rounds per attempt")->check(CLI::PositiveNumber);
  app->add_option("--ucb-c", f.ucb_c, "UCB exploration weight")->check(CLI::NonNegativeNumber);
  app->add_option("--ucb-iterations", f.ucb_iterations, "UCB pulls per decision (capped at 10000)");
  app->add_option("--dbscan-eps", f.dbscan_eps, "DBSCAN radius in meters")->check(CLI::PositiveNumber);
  app->add_option("--dbscan-min-pts", f.dbscan_min_pts, "DBSCAN core-point size")->check(CLI::PositiveNumber);
}

Scenario open_scenario(const std::string& path) {
  if (!std::filesystem::exists(path)) throw UsageError("scenario not found: " + path);
  return load_scenario(path);
}

SimConfig sim_config(const RunFlags& f, Algorithm algo, std::uint64_t seed) {
  SimConfig c;
  c.duration_s = f.duration;
  c.decision_period_s = f.decision_period;
  c.slot_s = f.slot;
  c.channel_tick_s = std::min(c.channel_tick_s, f.slot);
  c.seed = seed;
  c.algorithm = algo;
  c.criterion = parse_criterion(f.criterion);
  c.threshold = f.threshold;
  c.crab.max_iters = f.max_iters;
  c.max_configs = f.max_configs;
  c.ucb.c = f.ucb_c;
  c.ucb.iterations = f.ucb_iterations;
  c.dbscan.eps_m = f.dbscan_eps;
  c.dbscan.min_pts = f.dbscan_min_pts;
  c.validate();
  return c;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

int cmd_run(const RunFlags& f, std::ostream& out) {
  const Scenario sc = open_scenario(f.scenario);
  const SimConfig cfg = sim_config(f, parse_algorithm(f.algo), f.seed);
  std::vector<SlotEvent> events;
  const MetricsReport r = run(cfg, sc, nullptr, f.events_csv.empty() ? nullptr : &events);
  const std::string json = report_json(r);
  if (f.out.empty())
    out << json;
  else
    write_file(f.out, json);
  if (!f.events_csv.empty()) {
    std::ostringstream csv;
    write_events_csv(events, csv);
    write_file(f.events_csv, csv.str());
  }
  if (!f.diagnostics.empty()) {
    std::ostringstream lines;
    for (const auto& d : r.periods) lines << diagnostics_json_line(d) << "\n";
    write_file(f.diagnostics, lines.str());
  }
  return 0;
}

std::vector<double> parse_sweep(const std::string& text) {
  double a = 0, b = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || b < a)
    throw UsageError("--sweep expects start:stop:step with step > 0");
  std::vector<double> out;
  const long n = std::lround(std::floor((b - a) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
  return out;
}

int cmd_graph(const RunFlags& f, std::ostream& out) {
  const Scenario sc = open_scenario(f.scenario);
  const Criterion crit = parse_criterion(f.criterion);
  const double t = f.time >= 0.0 ? f.time : (sc.trace().empty() ? 0.0 : sc.trace().start());
  const std::vector<ZoneId> occupied = sc.trace().empty() ? std::vector<ZoneId>{} : sc.occupancy(t);
  const LinkStats links(sc, occupied, f.seed, 0);
  CandidateLimits limits = sc.limits;
  if (f.max_configs) limits.max_configs = *f.max_configs;

  std::vector<std::vector<ZoneId>> coverage(sc.sites().size());
  for (std::size_t g = 0; g < sc.sites().size(); ++g) {
    for (const BeamConfig& c : enumerate_candidates(g, links, limits))
      for (const Beam& b : c.beams) {
        if (b.is_null()) continue;
        const auto& zs = links.covered(g, b);
        coverage[g].insert(coverage[g].end(), zs.begin(), zs.end());
      }
    std::sort(coverage[g].begin(), coverage[g].end());
    coverage[g].erase(std::unique(coverage[g].begin(), coverage[g].end()), coverage[g].end());
  }
  const ConnectivityInputs in{sc, coverage};

  std::ofstream file;
  std::ostream* dst = &out;
  if (!f.out.empty()) {
    file.open(f.out, std::ios::binary);
    if (!file) throw Error("cannot write " + f.out);
    dst = &file;
  }

  char buf[160];
  if (!f.sweep.empty()) {
    *dst << "threshold,nodes,edges,mean_degree,components\n";
    for (double thr : parse_sweep(f.sweep)) {
      const InteractionGraph g = build_graph(crit, thr, in);
      std::snprintf(buf, sizeof buf, "%.6g,%zu,%zu,%.6f,%zu\n", thr, g.node_count(), g.edges().size(), g.mean_degree(),
                    g.component_count());
      *dst << buf;
    }
    return 0;
  }
  const InteractionGraph g = build_graph(crit, f.threshold.value_or(default_threshold(crit)), in);
  write_edge_list(g, sc, *dst);
  std::snprintf(buf, sizeof buf, "# nodes=%zu edges=%zu mean_degree=%.6f components=%zu\n", g.node_count(),
                g.edges().size(), g.mean_degree(), g.component_count());
  out << buf;
  return 0;
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CRABNET_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(v));
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

int cmd_bench(RunFlags f, std::ostream& out) {
  const Scenario sc = open_scenario(f.scenario);
  if (f.algos.empty()) f.algos = {f.algo};
  if (f.seeds.empty()) f.seeds = {f.seed};

  struct Job {
    std::size_t algo;
    std::uint64_t seed;
    MetricsReport report;
  };
  std::vector<Job> jobs;
  std::vector<Algorithm> algos;
  for (const auto& a : f.algos) algos.push_back(parse_algorithm(a));
  for (std::size_t a = 0; a < algos.size(); ++a)
    for (std::uint64_t s : f.seeds) jobs.push_back({a, s, {}});
  for (const Job& j : jobs) sim_config(f, algos[j.algo], j.seed);  // validate before spawning

  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(mu);
        if (next >= jobs.size() || failure) return;
        i = next++;
      }
      try {
        jobs[i].report = run(sim_config(f, algos[jobs[i].algo], jobs[i].seed), sc);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < worker_count(jobs.size()); ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  auto stats = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - m) * (x - m);
    const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
    return std::make_pair(m, sd);
  };

  std::ostringstream csv;
  csv << "algo,runs,mean_total_bits,std_total_bits,mean_covered_fraction,std_covered_fraction,mean_jain,std_jain\n";
  char buf[320];
  for (std::size_t a = 0; a < algos.size(); ++a) {
    std::vector<double> bits, cov, jain;
    for (const Job& j : jobs)
      if (j.algo == a) {
        bits.push_back(j.report.total_bits);
        cov.push_back(j.report.covered_fraction);
        jain.push_back(j.report.jain_index);
      }
    const auto [mb, sb] = stats(bits);
    const auto [mc, scv] = stats(cov);
    const auto [mj, sj] = stats(jain);
    std::snprintf(buf, sizeof buf, "%s,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", f.algos[a].c_str(), bits.size(), mb,
                  sb, mc, scv, mj, sj);
    csv << buf;
  }
  if (f.out.empty())
    out << csv.str();
  else
    write_file(f.out, csv.str());
  return 0;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mmWave beam coordination simulator"};
  app.require_subcommand(1);
  RunFlags f;

  CLI::App* run_cmd = app.add_subcommand("run", "Simulate one algorithm and write a JSON report");
  add_scenario_flags(run_cmd, f);
  add_sim_flags(run_cmd, f);
  run_cmd->add_option("--algo", f.algo, "Beam selection algorithm")
      ->check(CLI::IsMember({"crab", "dbscan", "ucb", "random"}));
  run_cmd->add_option("--seed", f.seed, "Random seed");
  run_cmd->add_option("--out", f.out, "Report path (stdout when omitted)");
  run_cmd->add_option("--events-csv", f.events_csv, "Per-slot event log");
  run_cmd->add_option("--diagnostics", f.diagnostics, "Per-period CRAB diagnostics as JSON lines");

  CLI::App* graph_cmd = app.add_subcommand("graph", "Build the interaction graph and write its edge list");
  add_scenario_flags(graph_cmd, f);
  graph_cmd->add_option("--seed", f.seed, "Random seed for the averaged link gains");
  graph_cmd->add_option("--time", f.time, "Trace time for occupancy (trace start when omitted)");
  graph_cmd->add_option("--sweep", f.sweep, "start:stop:step threshold sweep; one summary row per value");
  graph_cmd->add_option("--out", f.out, "Output path (stdout when omitted)");

  CLI::App* bench_cmd = app.add_subcommand("bench", "Compare algorithms over a list of seeds");
  add_scenario_flags(bench_cmd, f);
  add_sim_flags(bench_cmd, f);
  bench_cmd->add_option("--algo", f.algos, "Algorithms, comma separated or repeated")
      ->delimiter(',')
      ->check(CLI::IsMember({"crab", "dbscan", "ucb", "random"}));
  bench_cmd->add_option("--seeds", f.seeds, "Seeds, comma separated")->delimiter(',');
  bench_cmd->add_option("--seed", f.seed, "Single seed when --seeds is omitted");
  bench_cmd->add_option("--out", f.out, "CSV path (stdout when omitted)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(f, out);
    if (graph_cmd->parsed()) return cmd_graph(f, out);
    if (bench_cmd->parsed()) return cmd_bench(f, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace crabnet::cli
