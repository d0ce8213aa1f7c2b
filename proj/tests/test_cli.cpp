#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qkd/cli.hpp"

using namespace qkd;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qkdsim_test_" + name);
}

/// Writes a config echo back out as a flat `key = value` file.
void write_config(const Json& echo, const std::filesystem::path& path) {
  std::ofstream f(path);
  for (const auto& [key, value] : echo.items()) {
    f << key << " = ";
    if (value.is_string()) {
      f << '"' << value.get<std::string>() << '"';
    } else {
      f << value.dump();
    }
    f << '\n';
  }
}

}  // namespace

TEST_CASE("keyrate emits the full breakdown for both protocols") {
  const auto r = run({"keyrate", "--mu", "0.05", "--length-km", "20"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  REQUIRE(j["results"].size() == 2);
  CHECK(j["results"][0]["protocol"] == "bb84");
  CHECK(j["results"][1]["protocol"] == "qutrit");
  for (const char* key : {"gamma_q", "r_sig", "r_raw", "q", "y0", "y1", "y2", "epsilon1", "i_e", "k"}) {
    CHECK(j["results"][0].contains(key));
  }
  CHECK(j["results"][0]["k"].get<double>() == doctest::Approx(0.0001019970268879911).epsilon(1e-10));
  CHECK(j["results"][1]["k"].get<double>() == doctest::Approx(0.00016510237225001537).epsilon(1e-10));
  CHECK(j["config"]["pd"] == 1e-5);

  const auto zero = Json::parse(run({"keyrate", "--length-km", "0", "--alpha-db-per-km", "3.7"}).out);
  CHECK(zero["results"][0]["gamma_q"] == 1.0);
}

TEST_CASE("keyrate csv") {
  const auto r = run({"keyrate", "--protocol", "qutrit", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "protocol,gamma_q,r_sig,r_raw,q,y0,y1,y2,epsilon1,i_e,k");
  CHECK(row.rfind("qutrit,1,", 0) == 0);
  CHECK_FALSE(std::getline(in, extra));
}

TEST_CASE("invalid configuration exits with 2 and names the field") {
  auto r = run({"keyrate", "--q-opt", "0.6"});
  CHECK(r.code == 2);
  CHECK(r.err.find("q_opt") != std::string::npos);

  CHECK(run({"curve", "--l-step", "0"}).code == 2);
  CHECK(run({"curve", "--l-from", "10", "--l-to", "5"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"simulate", "--strategy", "teleport"}).code == 2);
  CHECK(run({"simulate", "--protocol", "bb84", "--strategy", "qubit_forward", "--rounds", "10"}).code == 2);
  CHECK(run({"distance", "--format", "csv"}).code == 2);
  CHECK(run({"keyrate", "--mu", "abc"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("curve csv layout") {
  const auto r = run({"curve", "--l-from", "0", "--l-to", "80", "--l-step", "1", "--workers", "4"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 163);
  CHECK(lines[0] == "length_km,protocol,mu_opt,key_rate");
  CHECK(lines[1].rfind("0,bb84,", 0) == 0);
  CHECK(lines[2].rfind("0,qutrit,", 0) == 0);
  CHECK(lines[162].rfind("80,qutrit,", 0) == 0);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(std::count(lines[i].begin(), lines[i].end(), ',') == 3);
  }
  CHECK(r.out.back() == '\n');
}

TEST_CASE("distance") {
  auto j = Json::parse(run({"distance", "--protocol", "qutrit"}).out);
  CHECK(j["protocol"] == "qutrit");
  CHECK(j["secure_distance_km"].get<double>() > 30.0);
  CHECK(j["mu_at_cutoff_minus_1km"].get<double>() > 0.0);
  CHECK(j.contains("config"));

  j = Json::parse(run({"distance", "--protocol", "bb84", "--pd", "0.4"}).out);
  CHECK(j["secure_distance_km"] == 0.0);
  CHECK(j["status"] == "insecure_at_zero");

  j = Json::parse(run({"distance"}).out);
  CHECK(j["results"].size() == 2);
}

TEST_CASE("simulate") {
  const auto r = run({"simulate", "--protocol", "qutrit", "--pd", "0", "--q-opt", "0", "--rounds", "100000",
                      "--mu", "0.5", "--length-km", "0", "--gamma-b", "1", "--eta", "1"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["counts"]["errors"] == 0);
  CHECK(j["counts"]["rounds"] == 100000);
  CHECK(j["analytic"].contains("r_raw"));
  CHECK(j["config"]["seed"] == 1);
}

TEST_CASE("simulate output does not depend on the worker count") {
  const std::vector<std::string> base{"simulate", "--protocol", "qutrit", "--strategy", "pns",
                                      "--mu", "0.4", "--rounds", "50000", "--seed", "77"};
  auto a = base;
  a.insert(a.end(), {"--workers", "1"});
  auto b = base;
  b.insert(b.end(), {"--workers", "8"});
  const auto one = run(a);
  const auto eight = run(b);
  REQUIRE(one.code == 0);
  CHECK(one.out == eight.out);
}

TEST_CASE("config echo reproduces the run") {
  const auto first = run({"simulate", "--protocol", "bb84", "--strategy", "intercept_resend_bb84", "--rounds",
                          "20000", "--seed", "5", "--mu", "0.3"});
  REQUIRE(first.code == 0);
  const auto path = temp_file("echo.toml");
  write_config(Json::parse(first.out)["config"], path);
  const auto again = run({"--config", path.string()});
  CHECK(again.code == 0);
  CHECK(again.out == first.out);

  // Flags win over the file.
  const auto overridden = run({"--config", path.string(), "--seed", "6"});
  CHECK(Json::parse(overridden.out)["config"]["seed"] == 6);

  const auto curve_first = run({"curve", "--l-to", "10", "--protocol", "qutrit", "--format", "json"});
  const auto curve_path = temp_file("curve.toml");
  write_config(Json::parse(curve_first.out)["config"], curve_path);
  CHECK(run({"--config", curve_path.string(), "--format", "json"}).out == curve_first.out);
  std::filesystem::remove(path);
  std::filesystem::remove(curve_path);
}

TEST_CASE("config files reject unknown keys") {
  const auto path = temp_file("bad.toml");
  {
    std::ofstream f(path);
    f << "command = \"keyrate\"\nmu = 0.2\nwavelength = 1550\n";
  }
  const auto r = run({"--config", path.string()});
  CHECK(r.code == 2);
  std::filesystem::remove(path);
}

TEST_CASE("--out writes to a file") {
  const auto path = temp_file("out.csv");
  const auto r = run({"curve", "--l-to", "3", "--out", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header == "length_km,protocol,mu_opt,key_rate");
  std::filesystem::remove(path);
}
