#include "sharpsum/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "sharpsum/coupling_oracle.hpp"
#include "sharpsum/format.hpp"
#include "sharpsum/hardy.hpp"
#include "sharpsum/selfcheck.hpp"
#include "sharpsum/sum_bound.hpp"
#include "sharpsum/worst_case.hpp"

namespace sharpsum {

namespace {

const std::set<std::string> kCommands{"bound", "worstcase", "oracle", "moments", "selfcheck"};

template <class T>
std::vector<T> as_list(const Json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = a + (b - a) * i / (count - 1);
  return out;
}

struct NamedCurve {
  std::string name;
  MonotoneCurve curve;
  Json report;
};

// The curve's own finite breakpoints plus the requested thresholds inside its domain.
std::vector<double> sample_points(const MonotoneCurve& c, const std::vector<double>& ts) {
  const Interval dom = c.domain();
  std::vector<double> out;
  for (double t : ts) {
    if (dom.contains(t)) out.push_back(t);
  }
  for (const auto& v : c.vertices()) {
    if (std::isfinite(v.x) && dom.contains(v.x)) out.push_back(v.x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_common(const RunConfig& cfg) {
  if (!kCommands.count(cfg.command)) throw ArgumentError("unknown command '" + cfg.command + "'");
  if (cfg.format != "csv" && cfg.format != "json") throw ArgumentError("format must be csv or json");
  for (double t : cfg.thresholds) {
    if (!std::isfinite(t)) throw ArgumentError("thresholds must be finite");
  }
  if (cfg.reps < 1) throw ArgumentError("reps must be positive");
  if (cfg.workers < 1) throw ArgumentError("workers must be positive");
}

std::vector<Distribution> load_dists(const RunConfig& cfg, std::size_t min_count,
                                     std::size_t max_count) {
  std::vector<Distribution> out;
  for (const auto& j : cfg.dists) out.push_back(Distribution::from_json(j));
  if (out.size() < min_count || out.size() > max_count) {
    std::ostringstream os;
    os << cfg.command << " needs ";
    if (min_count == max_count) {
      os << min_count;
    } else {
      os << min_count << " to " << max_count;
    }
    os << " distribution(s), got " << out.size();
    throw ArgumentError(os.str());
  }
  return out;
}

std::string header_comment(const RunConfig& cfg) {
  return "# sharpsum " + cfg.command + " seed=" + std::to_string(cfg.seed) + "\n";
}

std::string run_bound(const RunConfig& cfg) {
  const auto mus = load_dists(cfg, 1, 16);
  std::vector<NamedCurve> curves;
  Json skipped = Json::array();
  double mean = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  for (const auto& mu : mus) {
    mean += expectation(mu);
    t_lo += tail_quantile(mu, 1.0 - 1e-3)->lo;
    t_hi += hardy_value(mu, 1e-4);
  }
  if (mus.size() == 1) {
    const auto& mu = mus[0];
    curves.push_back({"survival", mu.survival(), mu.to_json()});
    curves.push_back({"incr", make_incr(mean), {{"delta", mean}}});
    const auto b = iid_bound(mu);
    curves.push_back({"bound", b.bound, b.to_json()});
    try {
      const auto c = corollary_exp_bound(mu.survival());
      curves.push_back({"corollary_exp", c.bound, c.to_json()});
    } catch (const ConvexityError& e) {
      skipped.push_back({{"curve", "corollary_exp"}, {"reason", e.what()},
                         {"certificate", e.certificate().to_json()}});
    }
    for (double q : cfg.qs) {
      const std::string name = "corollary_power_q" + fmt17(q);
      try {
        const auto c = corollary_power_bound(mu.survival(), q);
        curves.push_back({name, c.bound, c.to_json()});
      } catch (const ConvexityError& e) {
        skipped.push_back({{"curve", name}, {"reason", e.what()},
                           {"certificate", e.certificate().to_json()}});
      }
    }
  } else {
    for (std::size_t k = 0; k < mus.size(); ++k) {
      curves.push_back({"survival_" + std::to_string(k + 1), mus[k].survival(), mus[k].to_json()});
    }
    curves.push_back({"incr", make_incr(mean), {{"delta", mean}}});
    const auto b = theorem1_bound(mus);
    curves.push_back({"bound", b.bound, b.to_json()});
  }

  std::vector<double> ts = cfg.thresholds;
  if (ts.empty()) {
    if (!(t_hi > t_lo)) t_hi = t_lo + 1.0;
    const double pad = 0.1 * (t_hi - t_lo);
    ts = linspace(t_lo - pad, t_hi + pad, 201);
  }

  if (cfg.format == "json") {
    Json j = {{"command", "bound"}, {"seed", cfg.seed}, {"skipped", skipped}};
    Json arr = Json::array();
    for (const auto& c : curves) {
      Json samples = Json::array();
      for (double t : sample_points(c.curve, ts)) {
        const Interval v = eval(c.curve, t);
        samples.push_back({t, real_to_json(v.lo), real_to_json(v.hi)});
      }
      arr.push_back({{"name", c.name}, {"curve", c.curve.to_json()}, {"report", c.report},
                     {"samples", samples}});
    }
    j["curves"] = arr;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << header_comment(cfg) << "curve,t,lo,hi\n";
  for (const auto& c : curves) {
    for (double t : sample_points(c.curve, ts)) {
      const Interval v = eval(c.curve, t);
      os << c.name << ',' << fmt17(t) << ',' << fmt17(v.lo) << ',' << fmt17(v.hi) << '\n';
    }
  }
  return os.str();
}

std::string run_worstcase(const RunConfig& cfg, const std::string& sidecar) {
  const auto mu = load_dists(cfg, 1, 1)[0];
  SimulationConfig sc;
  sc.p = cfg.p;
  sc.ns = cfg.ns;
  sc.reps = cfg.reps;
  sc.seed = cfg.seed;
  sc.workers = cfg.workers;
  sc.margin = cfg.margin;
  sc.thresholds = cfg.thresholds;
  if (sc.thresholds.empty()) {
    // Below, inside and above the plateau of the limiting profile.
    double a = expectation(mu);
    double b = a;
    if (cfg.p > 0.0 && cfg.p < 1.0) {
      b = hardy_value(mu, cfg.p);
      a = b - delta(mu, cfg.p);
    }
    const double g = b > a ? b - a : 1.0;
    sc.thresholds = {a - 0.5 * g, a + 0.25 * g, a + 0.5 * g, a + 0.75 * g, b + 0.5 * g};
    if (b == a) sc.thresholds = {a - 0.5, a + 0.5};
  }
  const auto res = simulate_profile(mu, sc);
  Json summary = res.summary();
  if (!sidecar.empty()) {
    std::ofstream f(sidecar);
    if (!f) throw ArgumentError("cannot write " + sidecar);
    f << summary.dump(2) << "\n";
  }
  if (cfg.format == "json") {
    Json rows = Json::array();
    for (const auto& r : res.rows) {
      rows.push_back({{"n", r.n}, {"t", r.t}, {"empirical_survival", r.empirical},
                      {"half_width", r.half_width}, {"limit_value", r.limit_value},
                      {"flag", r.near_jump ? "near_jump" : "ok"}});
    }
    summary["rows"] = rows;
    return summary.dump(2) + "\n";
  }
  return header_comment(cfg) + res.to_csv();
}

std::string run_oracle(const RunConfig& cfg) {
  const auto mus = load_dists(cfg, 2, 2);
  std::vector<double> ts = cfg.thresholds;
  if (ts.empty()) {
    if (mus[0].kind() != Distribution::Kind::discrete ||
        mus[1].kind() != Distribution::Kind::discrete) {
      throw CapabilityError("transport oracle needs discrete marginals");
    }
    for (const auto& a : mus[0].atoms()) {
      for (const auto& b : mus[1].atoms()) ts.push_back(a.value + b.value);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  }
  const auto bound = theorem1_bound(mus);
  Json rows = Json::array();
  std::ostringstream os;
  os << header_comment(cfg) << "t,oracle_max,bound_hi,slack\n";
  for (double t : ts) {
    const auto r = max_tail_two({mus[0], mus[1], t}, cfg.workers);
    const double hi = eval(bound.bound, t).hi;
    os << fmt17(t) << ',' << fmt17(r.value_double) << ',' << fmt17(hi) << ','
       << fmt17(hi - r.value_double) << '\n';
    Json pi = Json::array();
    for (const auto& row : r.coupling) {
      Json jr = Json::array();
      for (const auto& x : row) jr.push_back(x.str());
      pi.push_back(jr);
    }
    rows.push_back({{"t", t}, {"oracle_max", r.value.str()}, {"oracle_max_double", r.value_double},
                    {"bound_hi", hi}, {"slack", hi - r.value_double}, {"coupling", pi}});
  }
  if (cfg.format == "json") {
    return Json{{"command", "oracle"}, {"seed", cfg.seed}, {"rows", rows}}.dump(2) + "\n";
  }
  return os.str();
}

std::string run_moments(const RunConfig& cfg) {
  const auto mu = load_dists(cfg, 1, 1)[0];
  std::vector<double> qs = cfg.qs;
  if (qs.empty()) qs = {1.5, 2.0, 4.0};
  std::ostringstream os;
  os << header_comment(cfg) << "q,lhs,rhs,jensen_rhs,holds\n";
  Json rows = Json::array();
  for (double q : qs) {
    const auto m = moment_bound_check(mu, q);
    os << fmt17(q) << ',' << fmt17(m.lhs) << ',' << fmt17(m.rhs) << ',' << fmt17(m.jensen_rhs)
       << ',' << (m.holds ? "true" : "false") << '\n';
    rows.push_back({{"q", q}, {"lhs", m.lhs}, {"rhs", m.rhs}, {"jensen_rhs", m.jensen_rhs},
                    {"holds", m.holds}});
  }
  if (cfg.format == "json") {
    return Json{{"command", "moments"}, {"seed", cfg.seed}, {"distribution", mu.to_json()},
                {"rows", rows}}
               .dump(2) +
           "\n";
  }
  return os.str();
}

std::string run_selfcheck_table(const RunConfig& cfg, bool& all_passed) {
  const auto results = run_selfcheck(cfg.workers);
  all_passed = true;
  std::ostringstream os;
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& r : results) {
      all_passed = all_passed && r.passed;
      arr.push_back({{"check", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    }
    return Json{{"command", "selfcheck"}, {"checks", arr}, {"passed", all_passed}}.dump(2) + "\n";
  }
  for (const auto& r : results) {
    all_passed = all_passed && r.passed;
    os << (r.passed ? "PASS  " : "FAIL  ") << r.name;
    if (!r.detail.empty()) os << "  (" << r.detail << ")";
    os << '\n';
  }
  os << (all_passed ? "all checks passed\n" : "some checks FAILED\n");
  return os.str();
}

void report_error(std::ostream& err, const std::string& type, const std::string& message) {
  err << Json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
}

Json load_json_arg(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (s[first] == '{' || s[first] == '[')) return Json::parse(s);
  std::ifstream f(s);
  if (!f) throw ArgumentError("cannot read '" + s + "'");
  return Json::parse(f);
}

void append_dists(std::vector<Json>& out, const Json& j) {
  if (j.is_array()) {
    for (const auto& d : j) out.push_back(d);
  } else {
    out.push_back(j);
  }
}

}  // namespace

RunConfig config_from_json(const Json& j, RunConfig cfg) {
  if (!j.is_object()) throw ArgumentError("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "command") {
      cfg.command = v.get<std::string>();
    } else if (key == "dist" || key == "dists") {
      cfg.dists.clear();
      append_dists(cfg.dists, v);
    } else if (key == "p") {
      cfg.p = v.get<double>();
    } else if (key == "n") {
      cfg.ns = as_list<int>(v);
    } else if (key == "q") {
      cfg.qs = as_list<double>(v);
    } else if (key == "thresholds") {
      cfg.thresholds = as_list<double>(v);
    } else if (key == "reps") {
      cfg.reps = v.get<int>();
    } else if (key == "seed") {
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "workers") {
      cfg.workers = v.get<unsigned>();
    } else if (key == "margin") {
      cfg.margin = v.get<double>();
    } else if (key == "out") {
      cfg.out = v.get<std::string>();
    } else if (key == "format") {
      cfg.format = v.get<std::string>();
    } else {
      throw ArgumentError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    check_common(cfg);
    std::string body;
    int status = 0;
    if (cfg.command == "bound") {
      body = run_bound(cfg);
    } else if (cfg.command == "worstcase") {
      body = run_worstcase(cfg, cfg.out.empty() ? std::string() : cfg.out + ".json");
    } else if (cfg.command == "oracle") {
      body = run_oracle(cfg);
    } else if (cfg.command == "moments") {
      body = run_moments(cfg);
    } else {
      bool ok = true;
      body = run_selfcheck_table(cfg, ok);
      status = ok ? 0 : 1;
    }
    if (cfg.out.empty()) {
      out << body;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw ArgumentError("cannot write " + cfg.out);
      f << body;
    }
    return status;
  } catch (const ConvexityError& e) {
    report_error(err, "ConvexityError", e.what());
    return 3;
  } catch (const CapabilityError& e) {
    report_error(err, "CapabilityError", e.what());
    return 3;
  } catch (const DomainError& e) {
    report_error(err, "DomainError", e.what());
    return 2;
  } catch (const ArgumentError& e) {
    report_error(err, "ArgumentError", e.what());
    return 2;
  } catch (const PreconditionError& e) {
    report_error(err, "PreconditionError", e.what());
    return 2;
  } catch (const Json::exception& e) {
    report_error(err, "ConfigError", e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return 1;
  }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Concentration bounds for sums of dependent variables"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::vector<std::string> dist_args;
  std::string config_path;
  RunConfig flags;
  app.add_option("--dist", dist_args, "distribution as JSON or a JSON file (repeatable)");
  app.add_option("--config", config_path, "JSON config file mirroring the flags");
  auto* o_p = app.add_option("--p", flags.p, "tail level p in (0, 1]");
  auto* o_n = app.add_option("--n", flags.ns, "number of variables (comma list for a ladder)")
                  ->delimiter(',');
  auto* o_q = app.add_option("--q", flags.qs, "moment / power exponents")->delimiter(',');
  auto* o_t = app.add_option("--thresholds", flags.thresholds, "thresholds t")->delimiter(',');
  auto* o_reps = app.add_option("--reps", flags.reps, "Monte Carlo replications");
  auto* o_seed = app.add_option("--seed", flags.seed, "root seed");
  auto* o_workers = app.add_option("--workers", flags.workers, "worker threads");
  auto* o_margin = app.add_option("--margin", flags.margin, "exclusion margin around jumps");
  auto* o_out = app.add_option("--out", flags.out, "output path (default: standard output)");
  auto* o_format = app.add_option("--format", flags.format, "csv or json");

  for (const auto& name : kCommands) {
    app.add_subcommand(name, name == "selfcheck" ? "run the invariant suite" : name);
  }

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, "ArgumentError", e.what());
    return 2;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = config_from_json(load_json_arg(config_path), cfg);
    cfg.command = app.get_subcommands().front()->get_name();
    if (!dist_args.empty()) {
      cfg.dists.clear();
      for (const auto& s : dist_args) append_dists(cfg.dists, load_json_arg(s));
    }
    if (o_p->count()) cfg.p = flags.p;
    if (o_n->count()) cfg.ns = flags.ns;
    if (o_q->count()) cfg.qs = flags.qs;
    if (o_t->count()) cfg.thresholds = flags.thresholds;
    if (o_reps->count()) cfg.reps = flags.reps;
    if (o_seed->count()) cfg.seed = flags.seed;
    if (o_workers->count()) cfg.workers = flags.workers;
    if (o_margin->count()) cfg.margin = flags.margin;
    if (o_out->count()) cfg.out = flags.out;
    if (o_format->count()) cfg.format = flags.format;
  } catch (const Json::exception& e) {
    report_error(err, "ConfigError", e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error(err, "ArgumentError", e.what());
    return 2;
  }
  return run(cfg, out, err);
}

}  // namespace sharpsum
