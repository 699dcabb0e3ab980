#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "crabnet/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("crabnet_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::ofstream(dir / "s.ini") << "[area]\norigin = 0, 0\nwidth_m = 400\nheight_m = 100\nzone_side_m = 10\n"
                                    "[gnbs]\n1,50,50,0,33,16,4,4\n2,350,50,180,33,16,4,4\n"
                                    "[trace]\npath = t.csv\n";
    std::ofstream(dir / "t.csv") << "t_s,vehicle_id,x_m,y_m\n0,1,100,50\n5,1,150,50\n0,2,300,52\n5,2,250,52\n";
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string path(const char* name) const { return (dir / name).string(); }
};

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int c = crabnet::cli::main(args, out, err);
  return {c, out.str(), err.str()};
}

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// skip_comments also drops the edge-list header
int count_lines(const std::string& s, bool skip_comments) {
  std::istringstream in(s);
  int n = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && !(skip_comments && (line[0] == '#' || line.rfind("g_id,", 0) == 0))) ++n;
  return n;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(call({"run"}).code == 2);
  const Result missing = call({"run", "--scenario", "/nonexistent/s.ini"});
  CHECK(missing.code == 2);
  CHECK_FALSE(missing.err.empty());
  CHECK(call({"run", "--scenario", "x", "--algo", "cawbm"}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("graph export") {
  Workspace w;
  const Result d = call({"graph", "--scenario", w.path("s.ini"), "--criterion", "distance"});
  REQUIRE(d.code == 0);
  CHECK(count_lines(d.out, true) == 1);
  CHECK(d.out.rfind("g_id,h_id,weight\n", 0) == 0);
  CHECK(d.out.find("1,2,") != std::string::npos);
  CHECK(d.out.find("edges=1") != std::string::npos);

  const Result none = call({"graph", "--scenario", w.path("s.ini"), "--criterion", "distance", "--threshold", "1"});
  REQUIRE(none.code == 0);
  CHECK(count_lines(none.out, true) == 0);
  CHECK(none.out.find("edges=0") != std::string::npos);

  const Result sweep = call({"graph", "--scenario", w.path("s.ini"), "--sweep", "0.05:0.30:0.05"});
  REQUIRE(sweep.code == 0);
  CHECK(sweep.out.rfind("threshold,nodes,edges,mean_degree,components\n", 0) == 0);
  CHECK(count_lines(sweep.out, false) == 7);
}

TEST_CASE("run writes a reproducible report") {
  Workspace w;
  const std::vector<std::string> base{"run", "--scenario", w.path("s.ini"), "--algo", "crab", "--criterion",
                                      "coverage", "--threshold", "0.15", "--seed", "7", "--duration", "2"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", w.path("a.json"), "--events-csv", w.path("a.csv"), "--diagnostics", w.path("d.jsonl")});
  b.insert(b.end(), {"--out", w.path("b.json")});
  REQUIRE(call(a).code == 0);
  REQUIRE(call(b).code == 0);
  const std::string ja = slurp(w.path("a.json"));
  CHECK(ja == slurp(w.path("b.json")));
  CHECK(ja.find("\"total_bits\"") != std::string::npos);
  CHECK(slurp(w.path("a.csv")).rfind("t,gnb,config_id,zone,rb_count,sinr_db,bits", 0) == 0);
  CHECK(count_lines(slurp(w.path("d.jsonl")), false) == 2);

  const Result stdout_run = call(base);
  REQUIRE(stdout_run.code == 0);
  CHECK(stdout_run.out == ja);
}

TEST_CASE("bench aggregates over seeds") {
  Workspace w;
  const Result r = call({"bench", "--scenario", w.path("s.ini"), "--algo", "random,random", "--seeds", "3",
                         "--duration", "1"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(header == "algo,runs,mean_total_bits,std_total_bits,mean_covered_fraction,std_covered_fraction,mean_jain,std_jain");
  CHECK(row1 == row2);
  CHECK(row1.rfind("random,1,", 0) == 0);

  const Result single = call({"run", "--scenario", w.path("s.ini"), "--algo", "random", "--seed", "3", "--duration", "1"});
  REQUIRE(single.code == 0);
  const auto pos = single.out.find("\"total_bits\": ");
  REQUIRE(pos != std::string::npos);
  const double run_bits = std::stod(single.out.substr(pos + 14));
  const double bench_bits = std::stod(row1.substr(std::string("random,1,").size()));
  CHECK(bench_bits == doctest::Approx(run_bits).epsilon(1e-12));
}
