#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "gadi/io.hpp"

using namespace gadi;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string scratch_dir() {
  const char* base = std::getenv("TMPDIR");
  return std::string(base ? base : "/tmp") + "/gadi_test_io";
}

}  // namespace

TEST_CASE("numbers print with 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(std::strtod(format_number(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("config hash ignores threads and output") {
  RunConfig a = parse_config_text("{}");
  RunConfig b = a;
  b.threads = 4;
  b.output = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.seed = 2;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("csv and sidecar") {
  const std::string dir = scratch_dir();
  ensure_directory(dir);
  CsvTable t{{"x", "y"}, {}};
  t.add({0.5, 2.0});
  t.add({1.0, -3.0});
  write_csv(dir + "/t.csv", t);
  CHECK(slurp(dir + "/t.csv") == "x,y\n0.5,2\n1,-3\n");

  const RunConfig c = parse_config_text("{}");
  Sidecar s;
  s.subcommand = "scatter";
  s.artifact = "t.csv";
  s.columns = t.columns;
  write_sidecar(dir, c, s);
  const Json j = Json::parse(slurp(dir + "/t.csv.json"));
  CHECK(j.at("config_hash").get<std::string>() == config_hash(c));
  CHECK(j.at("seed").get<std::uint64_t>() == c.seed);
  CHECK(j.contains("conventions"));
}

TEST_CASE("ragged rows are a contract violation") {
  CsvTable t{{"x", "y"}, {{1.0}}};
  CHECK_THROWS_AS(write_csv(scratch_dir() + "/bad.csv", t), ContractError);
}
