#include "common.hpp"

#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <sstream>

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = heatgen::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("catalog lists builtin spaces") {
  const auto r = run({"catalog", "--json"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.size() == 11);
  CHECK(doc[0]["name"] == "S2");
}

TEST_CASE("coeffs prints exact values") {
  const auto r = run({"coeffs", "S2", "--order", "4", "--json"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["space"] == "S2");
  CHECK(doc["order"] == 4);
  CHECK(doc["a"] == nlohmann::json({"1", "1/3", "1/15", "4/315", "1/315"}));
  CHECK(doc["timing_ms"].is_null());
  for (const auto &c : doc["checks"])
    CHECK(c["pass"] == true);

  const auto text = run({"coeffs", "S3", "--order", "3"});
  CHECK(text.code == 0);
  CHECK(text.out.find("1/6") != std::string::npos);
}

TEST_CASE("output is deterministic") {
  CHECK(run({"coeffs", "S2xS3", "--order", "3", "--json"}).out ==
        run({"coeffs", "S2xS3", "--order", "3", "--json"}).out);
  CHECK(run({"eval", "S3", "--t", "0.1", "--method", "mc", "--samples", "2000"}).out ==
        run({"eval", "S3", "--t", "0.1", "--method", "mc", "--samples", "2000"}).out);
}

TEST_CASE("timing is reported on request") {
  const auto doc = nlohmann::json::parse(run({"coeffs", "S2", "--order", "2", "--json", "--timing"}).out);
  CHECK(doc["timing_ms"].is_number());
}

TEST_CASE("validate exit codes") {
  CHECK(run({"validate", "S4"}).code == 0);
  const auto bad = run({"validate", data_file("s3_squashed.json"), "--json"});
  CHECK(bad.code == 1);
  const auto doc = nlohmann::json::parse(bad.out);
  CHECK(doc["pass"] == false);
  bool found = false;
  for (const auto &c : doc["checks"])
    if (c["name"] == "holonomy-invariance")
      found = c["pass"] == false;
  CHECK(found);
}

TEST_CASE("space files are accepted wherever a name is") {
  CHECK(run({"coeffs", data_file("s3_squashed.json"), "--order", "2"}).code == 1);
  CHECK(run({"coeffs", data_file("bad_generator.json"), "--order", "2"}).code == 1);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"coeffs", "S2"}).code == 2);
  CHECK(run({"coeffs", "nowhere", "--order", "2"}).code == 2);
  CHECK(run({"eval", "S2", "--t", "0.1", "--method", "simpson"}).code == 2);
  CHECK(run({"eval", "S2", "--t", "-1"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("eval series and quadrature agree") {
  const auto s = nlohmann::json::parse(run({"eval", "S2", "--t", "0.05", "--order", "6", "--json"}).out);
  const auto q = nlohmann::json::parse(run({"eval", "S2", "--t", "0.05", "--method", "quadrature", "--json"}).out);
  CHECK(s["value"].get<double>() == doctest::Approx(q["value"].get<double>()).epsilon(1e-10));
  CHECK(s["diagonal"].get<double>() > 0);
}

TEST_CASE("compare runs the cross-checks") {
  const auto r = run({"compare", "S2xS2", "--order", "3", "--t", "0.05,0.1", "--json"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  std::size_t numeric = 0;
  for (const auto &c : doc["checks"])
    if (c["name"].get<std::string>().rfind("numeric", 0) == 0)
      ++numeric;
  CHECK(numeric == 2);
}

TEST_CASE("word budget from the environment") {
  ::setenv("HEATGEN_BUDGET", "10", 1);
  CHECK(run({"coeffs", "S4", "--order", "3"}).code == 1);
  ::setenv("HEATGEN_BUDGET", "ten", 1);
  CHECK(run({"coeffs", "S2", "--order", "1"}).code == 2);
  ::unsetenv("HEATGEN_BUDGET");
  CHECK(run({"coeffs", "S2", "--order", "1"}).code == 0);
}
