#include <cmath>
#include <sstream>

#include "doctest.h"
#include "persuasion/commands.hpp"

using namespace persuasion;

namespace {

Problem fixture(const char* name) { return load_problem(std::string(PERSUASION_FIXTURE_DIR) + "/" + name); }

std::string render(const Report& report, OutputFormat format = OutputFormat::kBoth) {
  std::ostringstream os;
  print_report(report, format, os);
  return os.str();
}

const Table* table_named(const Report& report, const std::string& name) {
  for (const auto& t : report.tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("numbers carry nine significant digits") {
  CHECK(format_number(1.0 / std::sqrt(2.0)) == "0.707106781");
  CHECK(format_number(-1.0 / std::sqrt(2.0)) == "-0.707106781");
  CHECK(format_number(123456789012.0) == "1.23456789e+11");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(format_number(NAN) == "nan");
}

TEST_CASE("csv quoting") {
  const Table t{"t", {"a", "b"}, {{"1,2", "say \"hi\""}}};
  CHECK(to_csv(t) == "a,b\n\"1,2\",\"say \"\"hi\"\"\"\n");
}

TEST_CASE("value-of-info repro passes on the fixture") {
  const auto p = fixture("value_of_info.problem");
  CommandOptions o;
  o.command = "repro";
  o.subject = "value-of-info";
  const auto r = run_command(p, o);
  CHECK(r.passed);
  const auto text = render(r);
  CHECK(text.find("U_no_info,0.707106781,0.707106781") != std::string::npos);
  CHECK(text.find("value_of_information,-0.707106781") != std::string::npos);
  CHECK(r.tree["provenance"]["seed"] == 1);
  CHECK(r.tree["provenance"]["grid"] == 100);
}

TEST_CASE("a wrong expectation fails the repro") {
  auto p = fixture("value_of_info.problem");
  p.value_of_info.expected_no_info = 0.7;
  CommandOptions o;
  o.command = "repro";
  o.subject = "value-of-info";
  CHECK(!run_command(p, o).passed);
}

TEST_CASE("known-bias value profile has G + 1 rows") {
  const auto p = fixture("value_of_info.problem");
  CommandOptions o;
  o.command = "solve";
  o.model = "full-info";
  o.grid = 100;
  const auto r = run_command(p, o);
  const auto* t = table_named(r, "value_profile_full-info_A");
  REQUIRE(t);
  CHECK(t->header == std::vector<std::string>{"p(s1)", "b(p)"});
  CHECK(t->rows.size() == 101);
  CHECK(t->rows.front()[0] == "0");
  CHECK(t->rows.back()[0] == "1");
}

TEST_CASE("output is deterministic for a fixed seed") {
  const auto p = fixture("value_of_info.problem");
  CommandOptions o;
  o.command = "repro";
  o.subject = "warp";
  const auto a = render(run_command(p, o));
  const auto b = render(run_command(p, o));
  CHECK(a == b);
  o.seed = 99;
  const auto c = run_command(p, o);
  CHECK(c.tree["provenance"]["seed"] == 99);
}

TEST_CASE("audits without witnesses say so") {
  auto p = fixture("theorem_signature.problem");
  p.audit.count = 5;
  p.audit_axioms = {"3", "9"};
  CommandOptions o;
  o.command = "audit";
  o.model = "known-bias";
  const auto r = run_command(p, o);
  const auto* t = table_named(r, "witnesses");
  REQUIRE(t);
  REQUIRE(t->rows.size() == 1);
  CHECK(t->rows[0][2] == "none found within budget");
  CHECK(r.tree["models"][0]["witnesses"] == "none found within budget");
}

TEST_CASE("a fixed taste law exhausts the WARP budget and fails the repro") {
  auto p = fixture("value_of_info.problem");
  p.warp.model = "no-info";
  p.warp.budget = 20;
  CommandOptions o;
  o.command = "repro";
  o.subject = "warp";
  const auto r = run_command(p, o);
  CHECK(!r.passed);
  CHECK(r.tree["witness"] == "none found within budget");
}

TEST_CASE("unknown commands and names are errors") {
  const auto p = fixture("value_of_info.problem");
  CommandOptions o;
  o.command = "frobnicate";
  CHECK_THROWS_AS(run_command(p, o), Error);
  o.command = "repro";
  o.subject = "nothing";
  CHECK_THROWS_AS(run_command(p, o), Error);
  o.command = "solve";
  o.subject.clear();
  o.model = "missing";
  CHECK_THROWS_AS(run_command(p, o), Error);
  CHECK_THROWS_AS(parse_format("xml"), Error);
}
