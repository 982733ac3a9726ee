#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sharpsum/cli.hpp"
#include "sharpsum/distributions.hpp"
#include "sharpsum/sum_bound.hpp"

using namespace sharpsum;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sharpsum");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int st = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {st, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const std::string kExp = R"({"kind":"exponential","rate":1})";

}  // namespace

TEST_CASE("bound row at t = 2") {
  const auto r = cli({"bound", "--dist", kExp, "--thresholds", "1,2,3"});
  REQUIRE(r.status == 0);
  bool found = false;
  for (const auto& row : csv_rows(r.out)) {
    if (row[0] == "bound" && row[1] == "2") {
      found = true;
      CHECK(std::stod(row[2]) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    }
  }
  CHECK(found);
  CHECK(r.out.rfind("# sharpsum bound seed=1\n", 0) == 0);
}

TEST_CASE("emitted curves reload and agree at breakpoints") {
  const std::string bern = R"({"kind":"discrete","atoms":[[0,0.25],[1,0.5],[3,0.25]]})";
  const auto r = cli({"bound", "--dist", bern});
  REQUIRE(r.status == 0);
  std::map<std::string, std::vector<double>> ts, lo, hi;
  for (const auto& row : csv_rows(r.out)) {
    ts[row[0]].push_back(std::stod(row[1]));
    lo[row[0]].push_back(std::stod(row[2]));
    hi[row[0]].push_back(std::stod(row[3]));
  }
  const auto mu = Distribution::from_json(Json::parse(bern));
  const std::map<std::string, MonotoneCurve> original{
      {"survival", mu.survival()}, {"incr", make_incr(expectation(mu))},
      {"bound", iid_bound(mu).bound}};
  for (const auto& [name, curve] : original) {
    REQUIRE(ts.count(name));
    const auto back = curve_from_samples(ts[name], lo[name], hi[name]);
    for (const auto& v : curve.vertices()) {
      if (!std::isfinite(v.x)) continue;
      CHECK(eval(back, v.x) == eval(curve, v.x));
    }
  }
}

TEST_CASE("worstcase output is byte-identical across runs and workers") {
  const std::vector<std::string> base{"worstcase", "--dist", kExp, "--p", "0.5", "--n", "50,200",
                                      "--reps", "3000", "--seed", "42"};
  const auto a = cli(base);
  const auto b = cli(base);
  auto c_args = base;
  c_args.insert(c_args.end(), {"--workers", "4"});
  const auto c = cli(c_args);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(a.out.find("seed=42") != std::string::npos);
  CHECK(a.out.find("n,t,empirical_survival,half_width,limit_value,flag\n") != std::string::npos);
}

TEST_CASE("worstcase writes a summary next to the CSV") {
  const std::string path = "cli_test_worstcase.csv";
  const auto r = cli({"worstcase", "--dist", kExp, "--n", "20", "--reps", "500", "--seed", "3",
                      "--out", path});
  REQUIRE(r.status == 0);
  std::ifstream js(path + ".json");
  REQUIRE(js);
  const Json summary = Json::parse(js);
  CHECK(summary["seed"] == 3);
  CHECK(summary["reps"] == 500);
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
}

TEST_CASE("config file mirrors the flags") {
  const std::string path = "cli_test_config.json";
  {
    std::ofstream f(path);
    f << R"({"dist": {"kind":"exponential","rate":1}, "thresholds": [2.0], "format": "json"})";
  }
  const auto r = cli({"bound", "--config", path});
  std::remove(path.c_str());
  REQUIRE(r.status == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["command"] == "bound");
  CHECK(j["seed"] == 1);
  CHECK(j["curves"].size() >= 3);
}

TEST_CASE("oracle and moments") {
  const std::string b = R"({"kind":"bernoulli"})";
  const auto o = cli({"oracle", "--dist", b, "--dist", b, "--thresholds", "1,2"});
  REQUIRE(o.status == 0);
  const auto rows = csv_rows(o.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][1] == "1");
  CHECK(rows[1][1] == "0.5");
  const auto m = cli({"moments", "--dist", R"({"kind":"pareto","exponent":3,"scale":1})", "--q", "2"});
  REQUIRE(m.status == 0);
  CHECK(csv_rows(m.out)[0][4] == "true");
}

TEST_CASE("errors are JSON on stderr with nonzero status") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"bogus"},
           {"moments"},
           {"bound", "--dist", "{not json"},
           {"bound", "--dist", kExp, "--thresholds=-1,inf"},
           {"worstcase", "--dist", kExp, "--p", "1.5"},
           {"bound", "--dist", kExp, "--format", "xml"},
           {"oracle", "--dist", kExp, "--dist", kExp, "--thresholds", "1"}}) {
    const auto r = cli(args);
    CHECK(r.status != 0);
    CHECK(r.out.empty());
    const Json e = Json::parse(r.err);
    CHECK(e.contains("error"));
  }
}

TEST_CASE("selfcheck passes") {
  const auto r = cli({"selfcheck"});
  CHECK(r.status == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
