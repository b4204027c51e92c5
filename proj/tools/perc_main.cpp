// perc: Monte Carlo estimation, deterministic containment checks, exponent
// fitting and exact enumeration for critical site percolation on Z^d.
//
// Exit codes: 0 success, 2 argument/usage errors, 3 resource-guard
// rejections, 4 containment violation found by `verify`.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "perc/estimate.hpp"
#include "perc/fit.hpp"
#include "perc/parallel.hpp"
#include "perc/renorm.hpp"
#include "perc/run_config.hpp"
#include "perc/verify.hpp"
#include "perc/version.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitArgs = 2;
constexpr int kExitResource = 3;
constexpr int kExitViolation = 4;

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string iso_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct Cli {
  perc::RunConfig config;
  std::string config_path;
  std::vector<std::string> argv_copy;
  std::string started = iso_now();

  void write_manifest(const std::string& out_path, std::uint64_t seed) const {
    if (out_path.empty()) return;
    json m;
    m["version"] = perc::kVersion;
    m["command"] = argv_copy;
    m["config"] = config.snapshot();
    m["seed"] = seed;
    m["started"] = started;
    m["finished"] = iso_now();
    m["outputs"] = {out_path};
    std::ofstream f(out_path + ".manifest.json");
    f << m.dump(2) << "\n";
  }
};

// "--p" accepts a number or "pc" (the configured threshold for d).
double resolve_p(const std::string& text, const perc::RunConfig& config, int d) {
  if (text == "pc" || text == "crit") return config.threshold(d);
  std::size_t used = 0;
  double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad probability '" + text + "'");
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("p outside [0,1]");
  return v;
}

const char* kEstimateHeader = "spec,d,p,trials,successes,p_hat,ci_low,ci_high,seed,wall_time_s";

std::string estimate_row(const perc::Estimate& e) {
  std::ostringstream row;
  row << csv_quote(e.spec.canonical()) << ',' << e.spec.d << ',' << fmt_double(e.p) << ','
      << e.trials << ',' << e.successes << ',' << fmt_double(e.p_hat) << ','
      << fmt_double(e.ci_low) << ',' << fmt_double(e.ci_high) << ',' << e.seed << ','
      << fmt_double(e.wall_time_s);
  return row.str();
}

void write_rows(const std::string& out_path, const std::vector<std::string>& comments,
                const std::vector<perc::Estimate>& rows) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::invalid_argument("cannot open output file " + out_path);
    os = &file;
  }
  *os << "# perc.estimate.v1\n";
  for (const std::string& c : comments) *os << "# " << c << "\n";
  *os << kEstimateHeader << "\n";
  for (const perc::Estimate& e : rows) *os << estimate_row(e) << "\n";
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("CSV column '" + name + "' not found");
  }
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (t.header.empty())
      t.header = split_csv_line(line);
    else
      t.rows.push_back(split_csv_line(line));
  }
  if (t.header.empty()) throw std::invalid_argument(path + ": no header row");
  return t;
}

std::vector<perc::Estimate> read_estimate_rows(const CsvTable& tab) {
  std::vector<perc::Estimate> out;
  int cs = tab.column("spec");
  int cp = tab.column("p_hat");
  int ct = tab.column("trials");
  int cc = tab.column("successes");
  for (const auto& row : tab.rows) {
    perc::Estimate e;
    e.spec = perc::EventSpec::parse(row[static_cast<std::size_t>(cs)]);
    e.trials = std::stoull(row[static_cast<std::size_t>(ct)]);
    e.successes = std::stoull(row[static_cast<std::size_t>(cc)]);
    e.p_hat = std::stod(row[static_cast<std::size_t>(cp)]);
    e.confidence = 0.95;
    out.push_back(e);
  }
  return out;
}

json verdict_json(const perc::VerifySummary& s) {
  json out;
  out["check"] = perc::to_string(s.params.check);
  out["d"] = s.params.d;
  out["n"] = s.params.n;
  out["M"] = s.params.M;
  if (s.params.check == perc::CheckerKind::annulus) {
    out["r"] = s.params.r > 0 ? s.params.r : 8 * s.params.M * s.params.n;
    out["R"] = s.params.R > 0 ? s.params.R : 8 * s.params.M * s.params.M * s.params.n;
  }
  out["trials_per_p"] = s.params.trials;
  out["seed"] = s.params.seed;
  out["violations"] = s.total_violations;
  json per_p = json::array();
  for (const auto& st : s.per_p)
    per_p.push_back(
        {{"p", st.p}, {"vacuous", st.vacuous}, {"holds", st.holds}, {"violations", st.violations}});
  out["per_p"] = per_p;
  json wit = json::array();
  for (const auto& w : s.witnesses)
    wit.push_back(
        {{"seed", w.seed}, {"trial", w.trial}, {"params", w.params}, {"detail", w.detail}});
  out["witnesses"] = wit;
  return out;
}

void write_json(const std::string& out_path, const json& j) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::invalid_argument("cannot open output file " + out_path);
    f << j.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  for (int i = 0; i < argc; ++i) cli.argv_copy.emplace_back(argv[i]);

  CLI::App app{"Monte Carlo lab for critical site percolation on Z^d"};
  app.require_subcommand(1);
  app.add_option("--config", cli.config_path, "key=value config file (default: config/perc.conf)");

  auto* cmd_est = app.add_subcommand("estimate", "estimate one event probability");
  std::string est_event, est_p = "0.5", est_out;
  std::uint64_t est_trials = 10000, est_seed = 1, est_offset = 0;
  double est_conf = -1;
  cmd_est->add_option("--event", est_event, "event spec, e.g. two_arms(d=2,n=4)")->required();
  cmd_est->add_option("--p", est_p, "site probability, or 'pc' for the configured threshold");
  cmd_est->add_option("--trials", est_trials, "number of Monte Carlo trials");
  cmd_est->add_option("--seed", est_seed, "master seed");
  cmd_est->add_option("--offset", est_offset, "first trial index (for sharding)");
  cmd_est->add_option("--confidence", est_conf, "confidence level (default from config)");
  cmd_est->add_option("--out", est_out, "output CSV (stdout if omitted)");

  auto* cmd_sweep = app.add_subcommand("sweep", "estimate an event family over a schedule of n");
  std::string sw_family = "two_arms", sw_p = "pc", sw_out;
  int sw_d = 2;
  perc::Coord sw_M = 2, sw_nmin = 2, sw_nmax = 16;
  double sw_ratio = 2.0, sw_rel = 0.0, sw_conf = -1;
  std::uint64_t sw_trials = 10000, sw_max_trials = 10'000'000, sw_seed = 1;
  cmd_sweep->add_option("--family", sw_family, "two_arms | a2_ratio | pair_min");
  cmd_sweep->add_option("--d", sw_d, "dimension")->required();
  cmd_sweep->add_option("--M", sw_M, "aspect M (a2_ratio: A2(n,Mn); pair_min: box (M-1)n)");
  cmd_sweep->add_option("--n-min", sw_nmin, "schedule start")->required();
  cmd_sweep->add_option("--n-max", sw_nmax, "schedule end")->required();
  cmd_sweep->add_option("--ratio", sw_ratio, "schedule ratio (consecutive n ratio)");
  cmd_sweep->add_option("--p", sw_p, "site probability or 'pc'");
  cmd_sweep->add_option("--trials", sw_trials, "trials per point (fixed mode)");
  cmd_sweep->add_option("--rel-width", sw_rel,
                        "target relative CI half-width; enables adaptive mode");
  cmd_sweep->add_option("--max-trials", sw_max_trials, "adaptive-mode trial cap per point");
  cmd_sweep->add_option("--seed", sw_seed, "master seed");
  cmd_sweep->add_option("--confidence", sw_conf, "confidence level");
  cmd_sweep->add_option("--out", sw_out, "output CSV");

  auto* cmd_verify =
      app.add_subcommand("verify", "run a containment checker over sampled configurations");
  std::string vf_check, vf_p = "0.3,0.5,0.7", vf_out;
  int vf_d = 2;
  perc::Coord vf_n = 2, vf_M = 2, vf_r = 0, vf_R = 0;
  std::uint64_t vf_trials = 1000, vf_seed = 1;
  bool vf_inject = false;
  cmd_verify
      ->add_option("--check", vf_check, "gluing | good_gluing | annulus | subface | inclusions")
      ->required();
  cmd_verify->add_option("--d", vf_d, "dimension")->required();
  cmd_verify->add_option("--n", vf_n, "scale n");
  cmd_verify->add_option("--M", vf_M, "aspect M");
  cmd_verify->add_option("--r", vf_r, "annulus inner radius (default 8Mn)");
  cmd_verify->add_option("--R", vf_R, "annulus outer radius (default 8M^2n)");
  cmd_verify->add_option("--trials", vf_trials, "configurations per p value");
  cmd_verify->add_option("--p", vf_p, "comma-separated p grid ('pc' allowed)");
  cmd_verify->add_option("--seed", vf_seed, "master seed");
  cmd_verify->add_option("--out", vf_out, "output JSON");
  cmd_verify
      ->add_flag("--inject-violation", vf_inject,
                 "corrupt the conclusion detector (harness negative control)")
      ->group("");  // hidden

  auto* cmd_fit =
      app.add_subcommand("fit", "fit a power law to a sweep CSV and compare to exponent bounds");
  std::string ft_in, ft_out, ft_ratio_a2, ft_ratio_pairs;
  int ft_d = 0;
  cmd_fit->add_option("--in", ft_in, "sweep CSV of two_arms estimates")->required();
  cmd_fit->add_option("--d", ft_d, "dimension (default: from the spec column)");
  cmd_fit->add_option("--ratio-a2", ft_ratio_a2, "a2_ratio sweep CSV for the ratio report");
  cmd_fit->add_option("--ratio-pairs", ft_ratio_pairs, "pair_min sweep CSV for the ratio report");
  cmd_fit->add_option("--out", ft_out, "output JSON");

  auto* cmd_enum =
      app.add_subcommand("enumerate", "exact event probability by exhaustive enumeration");
  std::string en_event, en_p = "1/2", en_out;
  std::uint64_t en_guard = 0;
  cmd_enum->add_option("--event", en_event, "event spec")->required();
  cmd_enum->add_option("--p", en_p, "probability as decimal or fraction, e.g. 0.5 or 3/4");
  cmd_enum->add_option("--guard", en_guard, "support-size guard (default from config)");
  cmd_enum->add_option("--out", en_out, "output JSON");

  auto* cmd_renorm = app.add_subcommand("renorm", "good-point field density sweep");
  std::string rn_p = "pc", rn_out;
  int rn_d = 2;
  perc::Coord rn_n = 2, rn_M = 2, rn_K = 1;
  std::uint64_t rn_trials = 100, rn_seed = 1;
  bool rn_dep = false;
  cmd_renorm->add_option("--d", rn_d, "dimension")->required();
  cmd_renorm->add_option("--n", rn_n, "block scale n");
  cmd_renorm->add_option("--M", rn_M, "aspect M");
  cmd_renorm->add_option("--K", rn_K, "coarse window radius");
  cmd_renorm->add_option("--p", rn_p, "site probability or 'pc'");
  cmd_renorm->add_option("--trials", rn_trials, "sampled configurations");
  cmd_renorm->add_option("--seed", rn_seed, "master seed");
  cmd_renorm->add_flag("--check-dependence", rn_dep,
                       "also test covariance of good at coarse distance > 32M");
  cmd_renorm->add_option("--out", rn_out, "output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitArgs;
  }

  try {
    cli.config = cli.config_path.empty() ? perc::RunConfig::load_if_present("config/perc.conf")
                                         : perc::RunConfig::load(cli.config_path);

    if (*cmd_est) {
      perc::EventSpec spec = perc::EventSpec::parse(est_event);
      double p = resolve_p(est_p, cli.config, spec.d);
      double conf = est_conf > 0 ? est_conf : cli.config.confidence;
      perc::Estimate e = perc::estimate_event(spec, p, est_trials, est_seed, conf, 0, est_offset);
      std::vector<std::string> comments;
      if (!est_out.empty()) comments.push_back("manifest=" + est_out + ".manifest.json");
      write_rows(est_out, comments, {e});
      cli.write_manifest(est_out, est_seed);
      return kExitOk;
    }

    if (*cmd_sweep) {
      double p = resolve_p(sw_p, cli.config, sw_d);
      double conf = sw_conf > 0 ? sw_conf : cli.config.confidence;
      std::vector<perc::Coord> ns = perc::schedule(sw_nmin, sw_nmax, sw_ratio);
      std::vector<perc::Estimate> rows;
      std::vector<std::string> comments;
      if (!sw_out.empty()) comments.push_back("manifest=" + sw_out + ".manifest.json");
      comments.push_back("family=" + sw_family + " d=" + std::to_string(sw_d) +
                         " M=" + std::to_string(sw_M) + " schedule_ratio=" + fmt_double(sw_ratio));
      auto run_point = [&](const perc::EventSpec& spec) {
        return sw_rel > 0.0
                   ? perc::estimate_to_relative_width(spec, p, sw_rel, sw_max_trials, sw_seed, conf)
                   : perc::estimate_event(spec, p, sw_trials, sw_seed, conf);
      };
      if (sw_family == "two_arms") {
        for (perc::Coord n : ns) {
          perc::EventSpec spec;
          spec.kind = perc::EventKind::two_arms;
          spec.d = sw_d;
          spec.n = n;
          spec.origin_policy = cli.config.origin_policy;
          rows.push_back(run_point(spec));
        }
      } else if (sw_family == "a2_ratio") {
        for (perc::Coord n : ns) {
          perc::EventSpec spec;
          spec.kind = perc::EventKind::a2;
          spec.d = sw_d;
          spec.m = n;
          spec.n = sw_M * n;
          rows.push_back(run_point(spec));
        }
        auto min_it = std::min_element(
            rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.p_hat < b.p_hat; });
        comments.push_back("min_a2_p_hat=" + fmt_double(min_it->p_hat) +
                           " at_n=" + std::to_string(min_it->spec.m));
        std::cout << "min P(A2(n," << sw_M << "n)) over schedule = " << fmt_double(min_it->p_hat)
                  << " at n = " << min_it->spec.m << "\n";
      } else if (sw_family == "pair_min") {
        for (perc::Coord n : ns) {
          std::optional<perc::Estimate> best;
          for (const auto& [a, b] : perc::extremal_boundary_pairs(sw_d, n)) {
            perc::EventSpec spec;
            spec.kind = perc::EventKind::point_pair;
            spec.d = sw_d;
            spec.n = (sw_M - 1) * n;
            spec.x = a;
            spec.y = b;
            perc::Estimate e = run_point(spec);
            if (!best || e.p_hat < best->p_hat) best = e;
          }
          rows.push_back(*best);
        }
        comments.push_back("pair_min: sampled minimum over opposite corners and face centres");
      } else {
        throw std::invalid_argument("unknown sweep family '" + sw_family + "'");
      }
      double max_ratio = 0;
      for (std::size_t i = 0; i + 1 < ns.size(); ++i)
        max_ratio =
            std::max(max_ratio, static_cast<double>(ns[i + 1]) / static_cast<double>(ns[i]));
      std::string sched;
      for (auto n : ns) sched += (sched.empty() ? "" : "|") + std::to_string(n);
      comments.push_back("schedule=" + sched + " max_consecutive_ratio=" + fmt_double(max_ratio));
      write_rows(sw_out, comments, rows);
      cli.write_manifest(sw_out, sw_seed);
      return kExitOk;
    }

    if (*cmd_verify) {
      perc::VerifyRunParams pr;
      pr.check = perc::checker_from_name(vf_check);
      pr.d = vf_d;
      pr.n = vf_n;
      pr.M = vf_M;
      pr.r = vf_r;
      pr.R = vf_R;
      pr.trials = vf_trials;
      pr.seed = vf_seed;
      pr.inject_violation = vf_inject;
      pr.p_grid.clear();
      std::stringstream ss(vf_p);
      std::string tok;
      while (std::getline(ss, tok, ','))
        if (!tok.empty()) pr.p_grid.push_back(resolve_p(tok, cli.config, vf_d));
      if (pr.p_grid.empty()) throw std::invalid_argument("verify: empty p grid");
      perc::VerifySummary s = perc::run_checker(pr);
      json vout = verdict_json(s);
      if (!vf_out.empty()) vout["manifest"] = vf_out + ".manifest.json";
      write_json(vf_out, vout);
      cli.write_manifest(vf_out, vf_seed);
      return s.total_violations == 0 ? kExitOk : kExitViolation;
    }

    if (*cmd_fit) {
      CsvTable t = read_csv(ft_in);
      int col_spec = t.column("spec");
      int col_phat = t.column("p_hat");
      int col_trials = t.column("trials");
      int col_succ = t.column("successes");
      std::vector<perc::FitPoint> points;
      json dropped = json::array();
      int d = ft_d;
      for (const auto& row : t.rows) {
        perc::EventSpec spec = perc::EventSpec::parse(row[static_cast<std::size_t>(col_spec)]);
        if (d == 0) d = spec.d;
        double ph = std::stod(row[static_cast<std::size_t>(col_phat)]);
        double trials = std::stod(row[static_cast<std::size_t>(col_trials)]);
        std::uint64_t succ = std::stoull(row[static_cast<std::size_t>(col_succ)]);
        perc::FitPoint pt;
        pt.n = static_cast<double>(spec.kind == perc::EventKind::a2 ? spec.m : spec.n);
        pt.p_hat = ph;
        pt.sigma = std::sqrt(std::max(ph * (1.0 - ph), 0.0) / trials);
        points.push_back(pt);
        if (succ == 0) {
          auto [lo, hi] = perc::wilson_interval(0, static_cast<std::uint64_t>(trials), 0.95);
          (void)lo;
          dropped.push_back({{"n", pt.n}, {"upper_ci", hi}});
        }
      }
      perc::FitResult fr = perc::fit_power_law(points);
      perc::compare_to_bounds(fr, d);
      perc::ExponentBounds b = perc::exponent_bounds(d);
      json out;
      out["alpha_hat"] = fr.alpha_hat;
      out["c_hat"] = fr.c_hat;
      out["stderr_alpha"] = fr.stderr_alpha;
      out["points_used"] = fr.points_used;
      out["points_dropped"] = fr.points_dropped;
      out["residual_rms"] = fr.residual_rms;
      out["dropped_points"] = dropped;
      out["bounds"] = {
          {"lower", b.lower},
          {"lower_fraction", std::to_string(b.lower_num) + "/" + std::to_string(b.lower_den)},
          {"upper", b.upper},
          {"weaker_upper", b.weaker_upper}};
      out["verdicts"] = {{"lower", fr.lower_verdict}, {"upper", fr.upper_verdict}};
      if (!ft_out.empty()) out["manifest"] = ft_out + ".manifest.json";
      if (!ft_ratio_a2.empty() || !ft_ratio_pairs.empty()) {
        if (ft_ratio_a2.empty() || ft_ratio_pairs.empty())
          throw std::invalid_argument("fit: ratio report needs both --ratio-a2 and --ratio-pairs");
        std::vector<perc::Estimate> a2_rows = read_estimate_rows(read_csv(ft_ratio_a2));
        std::vector<perc::Estimate> pair_rows = read_estimate_rows(read_csv(ft_ratio_pairs));
        std::vector<perc::RatioInputs> inputs;
        for (const auto& row : t.rows) {
          perc::EventSpec spec = perc::EventSpec::parse(row[static_cast<std::size_t>(col_spec)]);
          perc::RatioInputs in;
          in.n = spec.n;
          in.two_arms.spec = spec;
          in.two_arms.trials = std::stoull(row[static_cast<std::size_t>(col_trials)]);
          in.two_arms.successes = std::stoull(row[static_cast<std::size_t>(col_succ)]);
          in.two_arms.p_hat = std::stod(row[static_cast<std::size_t>(col_phat)]);
          in.two_arms.confidence = 0.95;
          bool found_a2 = false, found_pair = false;
          for (const auto& e : a2_rows)
            if (e.spec.kind == perc::EventKind::a2 && e.spec.m == in.n) {
              in.a2 = e;
              found_a2 = true;
            }
          // pair_min rows carry endpoints on the boundary of Lambda(n_i)
          for (const auto& e : pair_rows)
            if (e.spec.kind == perc::EventKind::point_pair && perc::chebyshev(e.spec.x) == in.n) {
              in.min_pair = e;
              found_pair = true;
            }
          if (found_a2 && found_pair) inputs.push_back(in);
        }
        json ratio = json::array();
        for (const auto& pt : perc::ratio_report(inputs, d)) {
          ratio.push_back({{"n", pt.n},
                           {"inconclusive", pt.inconclusive},
                           {"ratio", pt.ratio},
                           {"ci_low", pt.ci_low},
                           {"ci_high", pt.ci_high}});
        }
        out["ratio_report"] = ratio;
      }
      write_json(ft_out, out);
      cli.write_manifest(ft_out, 0);
      return kExitOk;
    }

    if (*cmd_enum) {
      perc::EventSpec spec = perc::EventSpec::parse(en_event);
      perc::Rational p = perc::parse_rational(en_p);
      std::uint64_t guard = en_guard > 0 ? en_guard : cli.config.enum_guard_sites;
      perc::IndicatorPoly poly = perc::enumerate_indicator(spec, guard);
      perc::Rational value = perc::exact_probability(poly, p);
      double as_double = static_cast<double>(value);
      std::cout << spec.canonical() << " at p = " << perc::rational_to_string(p) << "\n";
      std::cout << "exact = " << perc::rational_to_string(value) << " = " << fmt_double(as_double)
                << "\n";
      if (!en_out.empty()) {
        json out;
        out["spec"] = spec.canonical();
        out["p"] = perc::rational_to_string(p);
        out["support_sites"] = poly.sites;
        out["exact_rational"] = perc::rational_to_string(value);
        out["exact_double"] = as_double;
        out["manifest"] = en_out + ".manifest.json";
        write_json(en_out, out);
        cli.write_manifest(en_out, 0);
      }
      return kExitOk;
    }

    if (*cmd_renorm) {
      double p = resolve_p(rn_p, cli.config, rn_d);
      perc::Coord reach = rn_n * rn_K + 16 * rn_M * rn_n;
      perc::Rect region = perc::Box::centered(rn_d, reach).rect();
      double density_sum = 0.0;
      for (std::uint64_t t = 0; t < rn_trials; ++t) {
        auto cfg = perc::Configuration::sample(region, p, rn_seed, t, perc::Storage::lazy);
        density_sum += perc::good_field(cfg, rn_K, rn_n, rn_M).density;
      }
      double density = density_sum / static_cast<double>(rn_trials);
      std::string dep_flag = "-";
      if (rn_dep) {
        // good(0) and good(y) at coarse distance > 32M read disjoint site sets
        perc::Coord far = 32 * rn_M + 1;
        perc::Point y = perc::Point::zero(rn_d);
        y.c[0] = far;
        perc::Rect other = perc::Box(y.scaled(rn_n), 16 * rn_M * rn_n).rect();
        perc::Rect bound = perc::Box::centered(rn_d, 16 * rn_M * rn_n).rect();
        for (int i = 0; i < rn_d; ++i) {
          bound.lo[i] = std::min(bound.lo[i], other.lo[i]);
          bound.hi[i] = std::max(bound.hi[i], other.hi[i]);
        }
        std::uint64_t c0 = 0, c1 = 0, c01 = 0;
        for (std::uint64_t t = 0; t < rn_trials; ++t) {
          auto cfg =
              perc::Configuration::sample(bound, p, rn_seed + 0x9e3779b9, t, perc::Storage::lazy);
          bool g0 = perc::good(cfg, perc::Point::zero(rn_d), rn_n, rn_M);
          bool g1 = perc::good(cfg, y, rn_n, rn_M);
          c0 += g0;
          c1 += g1;
          c01 += g0 && g1;
        }
        auto N = static_cast<double>(rn_trials);
        double p0 = static_cast<double>(c0) / N;
        double p1 = static_cast<double>(c1) / N;
        double p01 = static_cast<double>(c01) / N;
        double cov = p01 - p0 * p1;
        double sigma = std::sqrt(p0 * (1 - p0) * p1 * (1 - p1) / N);
        bool ok = sigma > 0 ? std::abs(cov) <= 4 * sigma : cov == 0.0;
        dep_flag = ok ? "1" : "0";
      }
      std::ostream* os = &std::cout;
      std::ofstream file;
      if (!rn_out.empty()) {
        file.open(rn_out);
        if (!file) throw std::invalid_argument("cannot open output file " + rn_out);
        os = &file;
      }
      *os << "# perc.renorm.v1\n";
      if (!rn_out.empty()) *os << "# manifest=" << rn_out << ".manifest.json\n";
      *os << "d,n,M,p,K,density,dependence_radius_checked\n";
      *os << rn_d << ',' << rn_n << ',' << rn_M << ',' << fmt_double(p) << ',' << rn_K << ','
          << fmt_double(density) << ',' << dep_flag << "\n";
      cli.write_manifest(rn_out, rn_seed);
      return kExitOk;
    }
  } catch (const perc::ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitArgs;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitArgs;
  }
  return kExitArgs;
}
