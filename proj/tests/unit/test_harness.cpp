#include <doctest.h>

#include <algorithm>
#include <json.hpp>
#include <sstream>

#include "wordrange/harness.hpp"

using namespace wordrange;
using nlohmann::json;

namespace {

RunSpec spec_for(const std::string& command) {
  RunSpec s;
  s.command = command;
  return s;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::size_t fields(const std::string& line) { return std::count(line.begin(), line.end(), ',') + 1; }

}  // namespace

TEST_CASE("run spec validation") {
  RunSpec s = spec_for("oracle-fuzz");
  CHECK_NOTHROW(s.validate());
  s.B = {3};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.B = {4};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);  // core needs B = 2
  s.variant = Variant::FastQuery5B;
  CHECK_NOTHROW(s.validate());
  s.B = {4, 8};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  CHECK_THROWS_AS(run_command(spec_for("nope")), std::invalid_argument);
  RunSpec f = spec_for("fp-rate");
  f.format = "xml";
  CHECK_THROWS_AS(run_command(f), std::invalid_argument);
  f.format = "json";
  f.epsilon = 0;
  CHECK_THROWS_AS(run_command(f), std::invalid_argument);
}

TEST_CASE("attempt seeds") {
  CHECK(attempt_seed(17, 0) == 17);
  CHECK(attempt_seed(17, 1) != 17);
  CHECK(attempt_seed(17, 1) != attempt_seed(17, 2));
  CHECK(attempt_seed(17, 2) == attempt_seed(17, 2));
}

TEST_CASE("oracle fuzz is deterministic") {
  RunSpec s = spec_for("oracle-fuzz");
  s.w = 8;
  s.trials = 2;
  s.audit = true;
  const RunOutcome a = run_command(s);
  const RunOutcome b = run_command(s);
  CHECK(a.ok);
  CHECK(a.output == b.output);
  const json j = json::parse(a.output);
  CHECK(j["mismatches"] == 0);
  CHECK(j["audit_failures"] == 0);
  CHECK(j["ops_per_trial"] == 200);
  CHECK(j["within_bounds"] == true);
  CHECK(j["max"]["pred_queries"] == 0);

  s.seed = 2;
  CHECK(run_command(s).output != a.output);
}

TEST_CASE("oracle fuzz csv") {
  RunSpec s = spec_for("oracle-fuzz");
  s.w = 16;
  s.ops = 300;
  s.format = "csv";
  const auto out = lines(run_command(s).output);
  REQUIRE(out.size() == 2);
  CHECK(fields(out[0]) == fields(out[1]));
  CHECK(out[0].rfind("command,", 0) == 0);
}

TEST_CASE("oracle fuzz fast variants") {
  RunSpec s = spec_for("oracle-fuzz");
  s.w = 8;
  s.B = {4};
  s.audit = true;
  s.backend = IndexBackend::Bloomier;
  for (Variant v : {Variant::FastUpdate5A, Variant::FastQuery5B}) {
    s.variant = v;
    const RunOutcome o = run_command(s);
    CHECK_MESSAGE(o.ok, o.output);
  }
}

TEST_CASE("probe bench") {
  RunSpec s = spec_for("probe-bench");
  s.n = 256;
  s.B = {2, 4};
  s.trials = 0;
  s.format = "csv";
  const RunOutcome o = run_command(s);
  CHECK(o.ok);
  const auto out = lines(o.output);
  REQUIRE(out.size() == 5);
  CHECK(out[0] == "B,strategy,Tu_max,Tq_max,correct");
  CHECK(out[1] == "2,query-heavy,8,5,true");

  s.format = "json";
  s.strategy = "update-heavy";
  const json j = json::parse(run_command(s).output);
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["pairs"] == 65536);
  CHECK(j["rows"][1]["strategy"] == "update-heavy");
}

TEST_CASE("fp rate") {
  RunSpec s = spec_for("fp-rate");
  s.n = 1 << 10;
  s.u_bits = 32;
  s.trials = 100000;
  const RunOutcome o = run_command(s);
  const json j = json::parse(o.output);
  CHECK(o.ok);
  CHECK(j["stored_errors"] == 0);
  CHECK(j["samples"] == 100000);
  CHECK(j["fp_rate"].get<double>() <= j["fp_bound"].get<double>());
}

TEST_CASE("perfect hash demo") {
  RunSpec s = spec_for("perfect-hash-demo");
  s.n = 1 << 10;
  const RunOutcome o = run_command(s);
  const json j = json::parse(o.output);
  CHECK(o.ok);
  CHECK(j["injective"] == true);
  CHECK(j["ops"] == 3 * 1024);
  CHECK(j["range"].get<double>() <= j["range_bound"].get<double>());
  CHECK(j["spill_peak"].get<double>() <= j["spill_peak_bound"].get<double>());
}

TEST_CASE("space report") {
  // default parameters are the acceptance ones
  RunSpec s = spec_for("space-report");
  const RunOutcome o = run_command(s);
  const json j = json::parse(o.output);
  CHECK(o.ok);
  CHECK(j["bloomier"]["measured_bits"].get<double>() > j["bloomier"]["empty_bits"].get<double>());
  CHECK(j["perfecthash"]["measured_bits"].get<double>() > j["perfecthash"]["empty_bits"].get<double>());
  CHECK(j["perfecthash"]["C_measured"].get<double>() <= 8);
  CHECK(o.output == run_command(s).output);

  s.n = 1 << 10;
  s.structure = "bloomier";
  const json small = json::parse(run_command(s).output);
  CHECK_FALSE(small.contains("perfecthash"));
  CHECK(small["bloomier"]["n"] == 1024);
}

TEST_CASE("command defaults") {
  RunSpec s = spec_for("probe-bench");
  s.n = 256;
  json j = json::parse(run_command(s).output);
  CHECK(j["trials"] == 0);
  CHECK(j["rows"][0]["pairs"] == 65536);

  s.n = 0;
  s.B = {16};
  j = json::parse(run_command(s).output);
  CHECK(j["n"] == 65536);
  CHECK(j["rows"][0]["pairs"] == 100000);

  j = json::parse(run_command(spec_for("fp-rate")).output);
  CHECK(j["samples"] == 1000000);
  CHECK(j["n"] == 4096);

  RunSpec f = spec_for("fp-rate");
  f.trials = 0;
  CHECK_THROWS_AS(run_command(f), std::invalid_argument);
}
