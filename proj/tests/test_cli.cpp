#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "liespec/cli.hpp"
#include "liespec/jsonio.hpp"
#include "liespec/rng.hpp"

using namespace liespec;
using nlohmann::json;

namespace {

struct Run {
  int exit_code;
  std::string report;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const RunOutput r = run_for_report(args, out, err);
  return {r.exit_code, r.report, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/liespec_test_") + name;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

bool file_exists(const std::string& path) {
  std::ifstream f(path);
  return f.good();
}

std::string strip_timestamp(const std::string& report) {
  json doc = json::parse(report);
  doc.erase("generated_at");
  return doc.dump();
}

}  // namespace

TEST_CASE("presets command lists the built-in groups") {
  const Run r = run({"presets"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("su2") != std::string::npos);
  CHECK(r.out.find("u2") != std::string::npos);
  const json doc = json::parse(r.report);
  CHECK(doc.at("result").at("presets").size() == 7);
}

TEST_CASE("spectrum golden through the CLI") {
  const Run r = run({"spectrum", "--group", "su2", "--metric", "bi-invariant",
                     "--scale", "1", "--cutoff", "3"});
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.report);
  const auto& set = doc.at("result").at("eigenvalue_set");
  const std::vector<double> values = set.at("values").get<std::vector<double>>();
  const std::vector<long long> mults = set.at("multiplicities").get<std::vector<long long>>();
  REQUIRE(values.size() == 5);
  const double expected[] = {0.0, 0.375, 1.0, 1.875, 3.0};
  const long long expected_mults[] = {1, 4, 9, 16, 25};
  for (int i = 0; i < 5; ++i) {
    CHECK(values[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    CHECK(mults[i] == expected_mults[i]);
  }
  // the spectrum object carries the pinned schema
  const auto& spec = doc.at("result").at("spectrum");
  CHECK(spec.at("cutoff").get<double>() == 3.0);
  CHECK(spec.at("certificate").contains("alpha"));
  CHECK(spec.at("blocks").size() == 5);
  CHECK(spec.at("blocks")[1].at("label").at("spins")[0].get<double>() == 0.5);
}

TEST_CASE("t2 spectrum through the CLI") {
  const Run r = run({"spectrum", "--group", "t2", "--cutoff", "100"});
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.report);
  const std::vector<double> values =
      doc.at("result").at("eigenvalue_set").at("values").get<std::vector<double>>();
  REQUIRE(values.size() == 3);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(values[0] == doctest::Approx(0.0));
  CHECK(values[1] == doctest::Approx(4.0 * pi2).epsilon(1e-12));
  CHECK(values[2] == doctest::Approx(8.0 * pi2).epsilon(1e-12));
}

TEST_CASE("malformed group file: exit 2 and no output file") {
  const std::string group_path = temp_path("bad_group.json");
  const std::string out_path = temp_path("bad_group_report.json");
  std::remove(out_path.c_str());
  write_file(group_path, "{\"dim\": 3, \"structure_constants\": [[1, 2");

  const Run r = run({"spectrum", "--group", group_path, "--out", out_path});
  CHECK(r.exit_code == 2);
  CHECK(!file_exists(out_path));
  CHECK(!r.err.empty());
}

TEST_CASE("group definition files load and run") {
  const std::string group_path = temp_path("su2_def.json");
  write_file(group_path, R"({
    "dim": 3,
    "structure_constants": [[1,2,3,1.0],[2,3,1,1.0],[3,1,2,1.0]],
    "ideals": [{"range": [1,3], "kind": "simple"}]
  })");
  const Run r = run({"spectrum", "--group", group_path, "--cutoff", "3"});
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.report);
  CHECK(doc.at("result").at("eigenvalue_set").at("values").size() == 5);
  // the definition is embedded for replay
  CHECK(!doc.at("config").at("group_definition").is_null());
}

TEST_CASE("trace-check exit codes") {
  // identity metric: C = 1, exit 0
  const Run same = run({"trace-check", "--group", "su2"});
  CHECK(same.exit_code == 0);

  // diag(1/2,1,1) metric in reference coordinates of -B is inline 2*diag(1/2,1,1)
  const Run ratio = run({"trace-check", "--group", "su2", "--metric",
                         "inline:[[1.0,0,0],[0,2.0,0],[0,0,2.0]]"});
  CHECK(ratio.exit_code == 0);
  const json doc = json::parse(ratio.report);
  CHECK(doc.at("result").at("predicted_c").get<double>() == doctest::Approx(4.0 / 3.0));

  // hypothesis gate on a non-simple group
  const Run gated = run({"trace-check", "--group", "su2xt1", "--assert-constant"});
  CHECK(gated.exit_code == 4);

  // without the flag the report is produced
  const Run ungated = run({"trace-check", "--group", "su2xt1"});
  CHECK(ungated.exit_code == 0);
}

TEST_CASE("rigidity through the CLI") {
  const Run same = run({"rigidity", "--group", "su2"});
  REQUIRE(same.exit_code == 0);
  CHECK(json::parse(same.report).at("result").at("verdict").get<bool>());

  // metric loaded from a file: g = g0 written out as a Gram document
  const std::string metric_path = temp_path("g0_metric.json");
  write_file(metric_path, R"({"gram": [[2,0,0],[0,2,0],[0,0,2]]})");
  const Run from_file = run({"rigidity", "--group", "su2", "--metric", "file:" + metric_path});
  REQUIRE(from_file.exit_code == 0);
  const json ff = json::parse(from_file.report);
  CHECK(ff.at("result").at("verdict").get<bool>());
  // the resolved Gram is embedded in the config for replay
  CHECK(ff.at("config").at("metric_gram")[0][0].get<double>() == 2.0);

  const Run off = run({"rigidity", "--group", "su2", "--metric",
                       "inline:[[1.0,0,0],[0,2.0,0],[0,0,2.0]]"});
  REQUIRE(off.exit_code == 0);
  const json doc = json::parse(off.report);
  CHECK(!doc.at("result").at("verdict").get<bool>());
  CHECK(doc.at("result").at("alpha2_trace_ratio").get<double>() == doctest::Approx(4.0 / 3.0));

  // insufficient cutoff: certificate error, exit 3 naming the needed cutoff
  const Run starved = run({"rigidity", "--group", "su2", "--cutoff", "0.1"});
  CHECK(starved.exit_code == 3);
  CHECK(starved.err.find("need at least") != std::string::npos);

  // the three-eigenvalue statement needs a simple group: exit 4
  const Run nonsimple = run({"rigidity", "--group", "su2xt1"});
  CHECK(nonsimple.exit_code == 4);
}

TEST_CASE("scan replay is byte identical modulo the timestamp") {
  const std::string out1 = temp_path("scan1.json");
  const std::string out2 = temp_path("scan2.json");
  const Run first = run({"scan", "--group", "su2", "--radius", "0.2", "--samples", "40",
                         "--level", "3", "--seed", "42", "--out", out1});
  REQUIRE(first.exit_code == 0);
  REQUIRE(file_exists(out1));

  const Run second = run({"scan", "--config", out1, "--out", out2});
  REQUIRE(second.exit_code == 0);
  CHECK(strip_timestamp(first.report) == strip_timestamp(second.report));

  std::ifstream f1(out1), f2(out2);
  std::stringstream b1, b2;
  b1 << f1.rdbuf();
  b2 << f2.rdbuf();
  CHECK(strip_timestamp(b1.str()) == strip_timestamp(b2.str()));
}

TEST_CASE("search and eigenset replay") {
  const std::string out1 = temp_path("search1.json");
  const Run first = run({"search", "--group", "su2", "--level", "3", "--exclude", "0.1",
                         "--budget", "600", "--starts", "2", "--seed", "7", "--out", out1});
  REQUIRE(first.exit_code == 0);
  const Run replay = run({"search", "--config", out1});
  REQUIRE(replay.exit_code == 0);
  CHECK(strip_timestamp(first.report) == strip_timestamp(replay.report));

  const std::string out_eigen = temp_path("eigenset.json");
  const Run eigen = run({"eigenset", "--group", "su2", "--cutoff", "3", "--out", out_eigen});
  REQUIRE(eigen.exit_code == 0);
  const Run eigen_replay = run({"eigenset", "--config", out_eigen});
  CHECK(strip_timestamp(eigen.report) == strip_timestamp(eigen_replay.report));
}

TEST_CASE("config and command must agree") {
  const std::string out1 = temp_path("mismatch.json");
  const Run first = run({"eigenset", "--group", "su2", "--cutoff", "3", "--out", out1});
  REQUIRE(first.exit_code == 0);
  const Run wrong = run({"scan", "--config", out1});
  CHECK(wrong.exit_code == 2);
}

TEST_CASE("csv output embeds the config and rows") {
  const Run r = run({"eigenset", "--group", "su2", "--cutoff", "3", "--output", "csv"});
  REQUIRE(r.exit_code == 0);
  CHECK(r.report.rfind("# config {", 0) == 0);
  CHECK(r.report.find("value,multiplicity") != std::string::npos);

  // spectrum CSV: one row per block eigenvalue with label and weight
  const Run spec = run({"spectrum", "--group", "su2", "--cutoff", "3", "--output", "csv"});
  REQUIRE(spec.exit_code == 0);
  CHECK(spec.report.find("label,value,multiplicity") != std::string::npos);
  CHECK(spec.report.find("\"{j=0.5}\",0.37") != std::string::npos);
  // 1 + 2 + 3 + 4 + 5 block rows plus the header and config lines
  long long rows = std::count(spec.report.begin(), spec.report.end(), '\n');
  CHECK(rows == 2 + 15);

  const Run scan_csv = run({"scan", "--group", "su2", "--samples", "10", "--seed", "3",
                            "--output", "csv"});
  REQUIRE(scan_csv.exit_code == 0);
  CHECK(scan_csv.report.find("sample,distance,volume_ratio,discrepancy") != std::string::npos);

  const Run bad = run({"eigenset", "--group", "su2", "--output", "tsv"});
  CHECK(bad.exit_code == 2);
}

TEST_CASE("report doubles round-trip exactly") {
  Rng rng(2024);
  for (int rep = 0; rep < 200; ++rep) {
    double x = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12.0, 12.0));
    const std::string text = format_double(x);
    CHECK(std::stod(text) == x);
  }
  CHECK(format_double(0.375) == "0.375");
}

TEST_CASE("unknown options and groups fail cleanly") {
  const Run unknown_flag = run({"spectrum", "--frequency", "11"});
  CHECK(unknown_flag.exit_code == 2);
  const Run unknown_group = run({"spectrum", "--group", "e8"});
  CHECK(unknown_group.exit_code == 2);
  const Run no_command = run({});
  CHECK(no_command.exit_code == 2);
}
