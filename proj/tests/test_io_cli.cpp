#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "aging/cli.hpp"
#include "aging/errors.hpp"
#include "aging/io.hpp"

using namespace aging;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "aging");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("grid parsing") {
  CHECK(io::parse_grid("0:1:0.25", "--p") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(io::parse_grid("0.8", "--p") == std::vector<double>{0.8});
  CHECK(io::parse_int_grid("1:5:2", "--sizes") == std::vector<int>{1, 3, 5});
  for (const char* bad : {"", "a:b:c", "0:1", "0:1:0", "1:0:0.1", "0:1:0.1:2", "0.5x"}) {
    CAPTURE(bad);
    try {
      io::parse_grid(bad, "--p");
      FAIL("accepted a malformed grid");
    } catch (const Error& e) {
      CHECK(contains(e.what(), "--p"));
      CHECK(e.is_validation());
    }
  }
  CHECK_THROWS_AS(io::parse_int_grid("1:5:0.5", "--sizes"), Error);
}

TEST_CASE("real formatting") {
  CHECK(io::format_real(0.5) == "0.5");
  CHECK(io::format_real(std::nan("")) == "nan");
  CHECK(io::format_real(INFINITY) == "inf");
  CHECK(std::stod(io::format_real(1.0 / 3.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("sweep CSV round trip") {
  SweepResult s;
  s.axis = {0.0, 0.5, 1.0};
  s.nbar = {0.4, 0.3, 0.2};
  s.converged = {true, false, true};
  std::stringstream buf;
  io::write_sweep_csv(buf, s);
  CHECK(buf.str().rfind("p,nbar,converged\n", 0) == 0);
  const auto back = io::read_sweep_csv(buf);
  CHECK(back.axis == s.axis);
  CHECK(back.nbar == s.nbar);
  CHECK(back.converged == s.converged);

  s.axis_name = "N";
  std::stringstream sizes;
  io::write_sweep_csv(sizes, s);
  CHECK(sizes.str().rfind("N,", 0) == 0);
  CHECK(io::read_sweep_csv(sizes).axis_name == "N");
}

TEST_CASE("other CSV schemas round trip") {
  Sweep2DResult g;
  g.axis = SweepAxis::Drive;
  g.x = {1.0, 2.0};
  g.p = {0.0, 0.5, 1.0};
  g.nbar = {1, 2, 3, 4, 5, 6};
  g.converged.assign(6, true);
  std::stringstream b2;
  io::write_sweep2d_csv(b2, g);
  CHECK(b2.str().rfind("x,p,nbar\n", 0) == 0);
  const auto g2 = io::read_sweep2d_csv(b2);
  CHECK(g2.x == g.x);
  CHECK(g2.p == g.p);
  CHECK(g2.nbar == g.nbar);

  BasinGrid basin;
  basin.q0_axis = {0.0, 1.0};
  basin.a0_axis = {0.0, 0.5};
  basin.labels = {BasinLabel::ToN1, BasinLabel::ToN2, BasinLabel::Undetermined, BasinLabel::ToN1};
  std::stringstream bb;
  io::write_basin_csv(bb, basin);
  CHECK(bb.str().rfind("q0,a0,label\n", 0) == 0);
  CHECK(contains(bb.str(), "toN2"));
  const auto basin2 = io::read_basin_csv(bb);
  CHECK(basin2.labels == basin.labels);
  CHECK(basin2.q0_axis == basin.q0_axis);

  BistableInterval interval;
  interval.p_cmin = 0.7;
  interval.p_cmax = 1.0;
  interval.clamped_upper = true;
  std::stringstream bi;
  io::write_interval_csv(bi, interval);
  CHECK(bi.str().rfind("p_cmin,p_cmax,clamped_upper\n", 0) == 0);
  const auto interval2 = io::read_interval_csv(bi);
  CHECK(interval2.p_cmin == 0.7);
  CHECK(interval2.clamped_upper);

  std::vector<CompareRow> rows{{0.0, 0.6, 0.59, 0.58}, {1.0, 0.2, 0.21, std::nullopt}};
  std::stringstream bc;
  io::write_compare_csv(bc, rows);
  CHECK(bc.str().rfind("p,nbar_collective,nbar_meanfield,nbar_exact\n", 0) == 0);
  CHECK(contains(bc.str(), "nan"));
  const auto rows2 = io::read_compare_csv(bc);
  REQUIRE(rows2.size() == 2);
  CHECK(rows2[0].exact == 0.58);
  CHECK_FALSE(rows2[1].exact.has_value());
}

TEST_CASE("malformed CSV is rejected") {
  std::istringstream wrong_header("q,nbar,converged\n0,0.1,1\n");
  CHECK_THROWS_AS(io::read_sweep_csv(wrong_header), Error);
  std::istringstream short_row("p,nbar,converged\n0,0.1\n");
  CHECK_THROWS_AS(io::read_sweep_csv(short_row), Error);
  std::istringstream bad_label("q0,a0,label\n0,0,sideways\n");
  CHECK_THROWS_AS(io::read_basin_csv(bad_label), Error);
}

TEST_CASE("JSON documents") {
  const auto params = io::to_json(ModelParams{});
  CHECK(params["n"] == 100);
  SweepResult s;
  s.axis = {0.0, 1.0};
  s.nbar = {0.5, 0.2};
  s.converged = {true, true};
  s.jumps = {{0.5, 0.3}};
  const auto doc = io::to_json(s);
  CHECK(doc["jumps"].size() == 1);
  CHECK(doc["rows"].size() == 2);
  CHECK(doc["rows"][1]["nbar"] == 0.2);
}

TEST_CASE("SVG output is a complete document") {
  const auto line = io::svg_line_plot({0, 1, 2}, {{"a", {0.1, 0.2, 0.3}}}, "p", "nbar");
  CHECK(line.rfind("<svg", 0) == 0);
  CHECK(contains(line, "</svg>"));
  CHECK(contains(line, "polyline"));
  const auto heat = io::svg_heatmap({0, 1, 2, 3}, 2, 2, "x", "p");
  CHECK(contains(heat, "<rect"));
}

TEST_CASE("cli: help and usage errors") {
  const auto help = run_cli({"--help"});
  CHECK(help.code == cli::kExitOk);
  CHECK(contains(help.out, "sweep"));
  CHECK(run_cli({}).code == cli::kExitValidation);
  CHECK(run_cli({"nonsense"}).code == cli::kExitValidation);
  CHECK(run_cli({"sweep", "--bogus"}).code == cli::kExitValidation);
  CHECK(run_cli({"sweep", "--p", "0:1"}).code == cli::kExitValidation);
  CHECK(run_cli({"sweep", "--n", "0"}).code == cli::kExitValidation);
  CHECK(run_cli({"sweep", "--kappa", "-1"}).code == cli::kExitValidation);
  CHECK(run_cli({"interval", "--format", "svg"}).code == cli::kExitValidation);
}

TEST_CASE("cli: sweep writes CSV and reports the jump") {
  const auto r = run_cli({"sweep", "--p", "0:1:0.01"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.rfind("p,nbar,converged\n", 0) == 0);
  CHECK(contains(r.err, "jump at p="));
  std::istringstream in(r.out);
  CHECK(io::read_sweep_csv(in).axis.size() == 101);
}

TEST_CASE("cli: JSON carries metadata") {
  const auto r = run_cli({"sweep", "--p", "0:1:0.1", "--format", "json", "--serial"});
  REQUIRE(r.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.contains("meta"));
  CHECK(doc["rows"].size() == 11);
}

TEST_CASE("cli: interval summary line") {
  const auto r = run_cli({"interval"});
  CHECK(r.code == cli::kExitOk);
  CHECK(contains(r.out, "p_cmin="));
  const auto none = run_cli({"interval", "--omega", "0"});
  CHECK(none.code == cli::kExitSolverFailure);
  CHECK(contains(none.err, "error:"));
}

TEST_CASE("cli: validation versus solver failures") {
  const auto cumulant = run_cli({"cumulant-sweep", "--v", "0.2", "--p", "0:1:0.5"});
  CHECK(cumulant.code == cli::kExitValidation);
  CHECK(contains(cumulant.err, "--v 0"));
  const auto unwritable = run_cli({"sweep", "--p", "0.5", "-o", "/nonexistent/dir/out.csv"});
  CHECK(unwritable.code == cli::kExitSolverFailure);
}

TEST_CASE("cli: compare snaps p and leaves exact empty for large N") {
  const auto small = run_cli({"compare", "--n", "4", "--p", "0:1:0.3"});
  REQUIRE(small.code == cli::kExitOk);
  CHECK(contains(small.err, "rounded"));
  std::istringstream in(small.out);
  const auto rows = io::read_compare_csv(in);
  for (const auto& row : rows) {
    CHECK(row.exact.has_value());
    CHECK(std::abs(row.p * 4 - std::round(row.p * 4)) < 1e-12);
  }
  const auto big = run_cli({"compare", "--n", "20", "--p", "0:1:0.5"});
  REQUIRE(big.code == cli::kExitOk);
  CHECK(contains(big.out, "nan"));
}

TEST_CASE("cli: basin and sizescan") {
  const auto basin = run_cli({"basin", "--q0-grid", "0:1:0.5", "--a0-grid", "0:1:0.5"});
  REQUIRE(basin.code == cli::kExitOk);
  std::istringstream in(basin.out);
  CHECK(io::read_basin_csv(in).labels.size() == 9);
  const auto scan = run_cli({"sizescan", "--p", "0.6", "--sizes", "180:195:1"});
  REQUIRE(scan.code == cli::kExitOk);
  CHECK(scan.out.rfind("N,", 0) == 0);
  CHECK(contains(scan.err, "jump at N="));
}
