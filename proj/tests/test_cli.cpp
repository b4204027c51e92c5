#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBin = PERC_CLI_BIN;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "perc_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run(const std::string& args, const std::string& env = "") {
  fs::path out = scratch_dir() / "stdout.txt";
  std::string cmd = env + (env.empty() ? "" : " ") + kBin + " " + args + " > " +
                    out.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// data rows with the wall_time column stripped (the one timing field)
std::vector<std::string> csv_data_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("spec,", 0) == 0) continue;
    auto cut = line.rfind(',');
    rows.push_back(line.substr(0, cut));
  }
  return rows;
}

}  // namespace

TEST_CASE("estimate: trivial crossing at p=1") {
  auto r = run("estimate --event \"crossing_v(d=2,k=1,m=1)\" --p 1.0 --trials 10 --seed 3");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find(",10,10,1,") != std::string::npos);  // trials,successes,p_hat
}

TEST_CASE("argument errors exit with 2") {
  CHECK(run("estimate --event \"bogus(d=2)\" --trials 5").exit_code == 2);
  CHECK(run("estimate").exit_code == 2);
  CHECK(run("nonsense-subcommand").exit_code == 2);
  CHECK(run("estimate --event \"two_arms(d=2,n=1)\" --p 1.5 --trials 5").exit_code == 2);
  CHECK(run("verify --check bogus --d 2").exit_code == 2);
  CHECK(run("fit --in /nonexistent.csv").exit_code == 2);
}

TEST_CASE("resource guard exits with 3") {
  // Lambda(3) in d=2 has 49 sites, beyond the default 28-site guard
  auto r = run("enumerate --event \"two_arms(d=2,n=3)\" --p 1/2");
  CHECK(r.exit_code == 3);
}

TEST_CASE("enumerate prints exact rationals") {
  auto r = run("enumerate --event \"crossing_v(d=2,k=1,m=1)\" --p 1/2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("7/16") != std::string::npos);
  auto r2 = run("enumerate --event \"two_arms(d=2,n=1)\" --p 1/2");
  CHECK(r2.exit_code == 0);
  CHECK(r2.out.find("123/512") != std::string::npos);
  auto r3 = run("enumerate --event \"crossing_v(d=2,k=1,m=1)\" --p 0.25");
  CHECK(r3.exit_code == 0);
}

TEST_CASE("repeated runs produce identical files modulo the timing column") {
  fs::path a = scratch_dir() / "est_a.csv";
  fs::path b = scratch_dir() / "est_b.csv";
  std::string args = "estimate --event \"two_arms(d=2,n=3)\" --p 0.55 --trials 4000 --seed 17";
  CHECK(run(args + " --out " + a.string()).exit_code == 0);
  CHECK(run(args + " --out " + b.string()).exit_code == 0);
  CHECK(csv_data_rows(slurp(a)) == csv_data_rows(slurp(b)));
  CHECK(fs::exists(a.string() + ".manifest.json"));
}

TEST_CASE("tallies do not depend on PERC_THREADS") {
  fs::path a = scratch_dir() / "thr1.csv";
  fs::path b = scratch_dir() / "thr4.csv";
  fs::path c = scratch_dir() / "thr16.csv";
  std::string args = "estimate --event \"two_arms(d=2,n=4)\" --p 0.5927 --trials 6000 --seed 11";
  CHECK(run(args + " --out " + a.string(), "PERC_THREADS=1").exit_code == 0);
  CHECK(run(args + " --out " + b.string(), "PERC_THREADS=4").exit_code == 0);
  CHECK(run(args + " --out " + c.string(), "PERC_THREADS=16").exit_code == 0);
  CHECK(csv_data_rows(slurp(a)) == csv_data_rows(slurp(b)));
  CHECK(csv_data_rows(slurp(b)) == csv_data_rows(slurp(c)));
}

TEST_CASE("sweep at p=0 yields all-zero estimates and schedule metadata") {
  fs::path out = scratch_dir() / "sweep0.csv";
  auto r = run("sweep --family two_arms --d 2 --n-min 1 --n-max 8 --ratio 2 --p 0.0 "
               "--trials 50 --seed 5 --out " + out.string());
  CHECK(r.exit_code == 0);
  std::string text = slurp(out);
  CHECK(text.find("schedule=1|2|4|8") != std::string::npos);
  CHECK(text.find("max_consecutive_ratio=2") != std::string::npos);
  for (const std::string& row : csv_data_rows(text))
    CHECK(row.find(",50,0,0,") != std::string::npos);  // trials,successes,p_hat
}

TEST_CASE("sweep a2_ratio reports the schedule minimum") {
  fs::path out = scratch_dir() / "sweep_a2.csv";
  auto r = run("sweep --family a2_ratio --d 2 --M 2 --n-min 1 --n-max 4 --ratio 2 --p 0.55 "
               "--trials 400 --seed 6 --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("min P(A2(n,2n))") != std::string::npos);
  CHECK(slurp(out).find("min_a2_p_hat=") != std::string::npos);
}

TEST_CASE("sweep to fit round-trip") {
  fs::path csv = scratch_dir() / "sweep_fit.csv";
  auto r = run("sweep --family two_arms --d 2 --n-min 2 --n-max 8 --ratio 2 --p 0.5927 "
               "--trials 3000 --seed 7 --out " + csv.string());
  CHECK(r.exit_code == 0);
  fs::path fit_out = scratch_dir() / "fit.json";
  auto rf = run("fit --in " + csv.string() + " --out " + fit_out.string());
  CHECK(rf.exit_code == 0);
  json j = json::parse(slurp(fit_out));
  CHECK(j.contains("alpha_hat"));
  CHECK(j["bounds"]["lower_fraction"] == "11/21");
  CHECK(j["bounds"]["upper"] == 10.0);
  CHECK(j["points_used"].get<int>() >= 3);
}

TEST_CASE("fit recovers a synthetic exponent of 2") {
  fs::path csv = scratch_dir() / "synth.csv";
  {
    std::ofstream f(csv);
    f << "# perc.estimate.v1\n";
    f << "spec,d,p,trials,successes,p_hat,ci_low,ci_high,seed,wall_time_s\n";
    for (int n : {2, 4, 8, 16}) {
      double ph = 1.0 / (n * n);
      auto succ = static_cast<long long>(ph * 1e9);
      f << "\"two_arms(d=2,n=" << n << ")\",2,0.5,1000000000," << succ << "," << ph
        << ",0,1,1,0\n";
    }
  }
  fs::path out = scratch_dir() / "synth_fit.json";
  auto r = run("fit --in " + csv.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  json j = json::parse(slurp(out));
  CHECK(std::abs(j["alpha_hat"].get<double>() - 2.0) < 1e-6);
  CHECK(j["verdicts"]["lower"] == "consistent");
  CHECK(j["verdicts"]["upper"] == "consistent");
}

TEST_CASE("ratio report wires three sweep files together") {
  fs::path two = scratch_dir() / "r_two.csv";
  fs::path a2f = scratch_dir() / "r_a2.csv";
  fs::path pairs = scratch_dir() / "r_pairs.csv";
  std::string common = " --d 2 --M 3 --n-min 2 --n-max 8 --ratio 2 --p 0.55 --seed 13 ";
  CHECK(run("sweep --family two_arms" + common + "--trials 2000 --out " + two.string()).exit_code == 0);
  CHECK(run("sweep --family a2_ratio" + common + "--trials 500 --out " + a2f.string()).exit_code == 0);
  CHECK(run("sweep --family pair_min" + common + "--trials 500 --out " + pairs.string()).exit_code == 0);
  fs::path out = scratch_dir() / "ratio_fit.json";
  auto r = run("fit --in " + two.string() + " --ratio-a2 " + a2f.string() + " --ratio-pairs " +
               pairs.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  json j = json::parse(slurp(out));
  REQUIRE(j.contains("ratio_report"));
  CHECK(j["ratio_report"].size() == 3);  // n = 2, 4, 8
  for (const auto& pt : j["ratio_report"]) {
    CHECK(pt.contains("inconclusive"));
    if (!pt["inconclusive"].get<bool>()) {
      CHECK(pt["ratio"].get<double>() > 0.0);
      CHECK(pt["ci_low"].get<double>() <= pt["ratio"].get<double>());
    }
  }
  // missing one of the two ratio inputs is an argument error
  CHECK(run("fit --in " + two.string() + " --ratio-a2 " + a2f.string()).exit_code == 2);
}

TEST_CASE("verify exits 0 on clean checks and writes JSON verdicts") {
  fs::path out = scratch_dir() / "verify.json";
  auto r = run("verify --check inclusions --d 2 --n 1 --M 2 --out " + out.string());
  CHECK(r.exit_code == 0);
  json j = json::parse(slurp(out));
  CHECK(j["violations"] == 0);
  CHECK(j["check"] == "inclusions");

  auto r2 = run("verify --check gluing --d 2 --n 2 --M 2 --trials 100 --p 0.3,0.5,0.7 --seed 8");
  CHECK(r2.exit_code == 0);
}

TEST_CASE("corrupted conclusion detector trips exit code 4 with a witness") {
  fs::path out = scratch_dir() / "inject.json";
  auto r = run("verify --check subface --d 2 --n 1 --M 2 --trials 40 --p 0.65 --seed 9 "
               "--inject-violation --out " + out.string());
  CHECK(r.exit_code == 4);
  json j = json::parse(slurp(out));
  CHECK(j["violations"].get<std::uint64_t>() > 0);
  REQUIRE(!j["witnesses"].empty());
  CHECK(j["witnesses"][0].contains("seed"));
  CHECK(j["witnesses"][0].contains("trial"));
}

TEST_CASE("renorm emits the documented CSV schema") {
  fs::path out = scratch_dir() / "renorm.csv";
  auto r = run("renorm --d 2 --n 1 --M 2 --K 1 --p 0.55 --trials 5 --seed 10 --out " +
               out.string());
  CHECK(r.exit_code == 0);
  std::string text = slurp(out);
  CHECK(text.find("d,n,M,p,K,density,dependence_radius_checked") != std::string::npos);
  std::stringstream ss(text);
  std::string line, data;
  while (std::getline(ss, line))
    if (!line.empty() && line[0] != '#' && line[0] != 'd') data = line;
  REQUIRE(!data.empty());
  double density = std::stod(data.substr(data.find("0.55,") + 5));
  CHECK(density >= 0.0);
  CHECK(density <= 1.0);
}

TEST_CASE("config file overrides are honored") {
  fs::path conf = scratch_dir() / "custom.conf";
  {
    std::ofstream f(conf);
    f << "confidence = 0.99\np_c.site.d2 = 0.25\n";
  }
  fs::path out = scratch_dir() / "conf_est.csv";
  auto r = run("--config " + conf.string() +
               " estimate --event \"crossing_v(d=2,k=1,m=1)\" --p pc --trials 100 --seed 2 "
               "--out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(slurp(out).find(",2,0.25,") != std::string::npos);  // resolved threshold

  auto bad = run("--config /nonexistent.conf estimate --event \"two_arms(d=2,n=1)\" --trials 5");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("manifest records the command and the config snapshot") {
  fs::path out = scratch_dir() / "manifest_demo.csv";
  auto r = run("estimate --event \"two_arms(d=2,n=2)\" --p 0.5 --trials 200 --seed 12 --out " +
               out.string());
  CHECK(r.exit_code == 0);
  json m = json::parse(slurp(out.string() + ".manifest.json"));
  CHECK(m["version"] == "0.1.0");
  CHECK(m["seed"] == 12);
  std::string cmd;
  for (const auto& part : m["command"]) cmd += part.get<std::string>() + " ";
  CHECK(cmd.find("--trials 200") != std::string::npos);
  CHECK(m["config"].get<std::string>().find("confidence") != std::string::npos);
}
