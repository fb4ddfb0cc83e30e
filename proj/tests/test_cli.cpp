#include <filesystem>
#include <fstream>
#include <sstream>

#include "dots/cli.hpp"
#include "dots/io.hpp"

#include "doctest.h"
#include "support.hpp"

using namespace dots;
using namespace dots::test;
using dots::io::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;

  json error() const { return json::parse(err.substr(0, err.find('\n'))); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const std::string& name) { return fixture(name); }

/// A scratch directory removed at the end of the test.
struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("dots-cli-" + std::to_string(seed()) + "-" + std::to_string(uniform(0, 1u << 30)));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string write(const std::string& name, const std::string& text) const {
    auto p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("compose") {
  SUBCASE("SIR from its diagram") {
    auto r = run({"compose", "--diagram", fx("sir.uwd"), "--systems", fx("infection.json"), fx("recovery.json")});
    REQUIRE(r.code == 0);
    auto net = io::open_petri_from_json(json::parse(r.out));
    CHECK(open_petri_iso(net, sir_net()).has_value());
    CHECK(r.out == read_file(fx("sir.json")));
  }
  SUBCASE("mod-4 counter from two mod-2 counters") {
    auto r = run({"compose", "--diagram", fx("series.dwd"), "--systems", fx("mod2.json"), fx("mod2.json")});
    REQUIRE(r.code == 0);
    const Machine parts[] = {counter(2), counter(2)};
    CHECK(io::machine_from_json(json::parse(r.out)) == compose_via_dwd(series_dwd(), parts));
    CHECK(r.out == read_file(fx("mod4.json")));
  }
  SUBCASE("predator and prey") {
    auto r = run({"compose", "--diagram", fx("lotka_volterra.dwd"), "--systems", fx("rabbits.json"), fx("foxes.json")});
    REQUIRE(r.code == 0);
    auto sys = io::ode_from_json(json::parse(r.out));
    CHECK(sys.state == std::vector<std::string>{"rabbits.r", "foxes.f"});
  }
  SUBCASE("writes to a file") {
    Scratch s;
    auto r = run({"compose", "--diagram", fx("sir.uwd"), "--systems", fx("infection.json"), fx("recovery.json"), "-o",
                  s.path("sir.json")});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(read_file(s.path("sir.json")) == read_file(fx("sir.json")));
  }
  SUBCASE("wrong kind of system") {
    auto r = run({"compose", "--diagram", fx("sir.uwd"), "--systems", fx("mod2.json"), fx("mod2.json")});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.error().at("error") == "KindMismatch");
    CHECK(r.err.find("\nerror: ") != std::string::npos);
  }
  SUBCASE("wrong number of systems") {
    auto r = run({"compose", "--diagram", fx("sir.uwd"), "--systems", fx("infection.json")});
    CHECK(r.code == 2);
    CHECK(r.error().contains("error"));
  }
  SUBCASE("diagram errors carry their position") {
    Scratch s;
    auto bad = s.write("bad.uwd", "junction S\nbox b(s = T)\n");
    auto r = run({"compose", "--diagram", bad, "--systems", fx("infection.json")});
    CHECK(r.code == 2);
    auto e = r.error();
    CHECK(e.at("error") == "UnknownJunction");
    CHECK(e.at("line") == 2);
    CHECK(e.at("column") == 11);
  }
}

TEST_CASE("simulate") {
  SUBCASE("mod-4 counter cycles") {
    auto r = run({"simulate", "--system", fx("mod4.json"), "--init", "00", "--inputs", "1", "--steps", "4"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    auto states = j.at("states").get<std::vector<std::string>>();
    REQUIRE(states.size() == 5);
    CHECK(states.front() == "0:0");
    CHECK(states.back() == "0:0");
    CHECK(std::set<std::string>(states.begin(), states.end()).size() == 4);
  }
  SUBCASE("csv") {
    auto r = run({"simulate", "--system", fx("mod2.json"), "--init", "0", "--inputs", "1,1,1", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
  }
  SUBCASE("distribution runs carry exact weights") {
    auto r = run({"simulate", "--system", fx("coin.json"), "--init", "0", "--inputs", "0", "--steps", "3"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    Rational total = 0;
    for (const auto& run : j.at("runs")) total += parse_rational(run.at("weight").get<std::string>());
    CHECK(total == 1);
  }
  SUBCASE("an ODE") {
    auto r = run({"simulate", "--system", fx("rabbits.json"), "--init", "10", "--inputs", "0", "--steps", "2", "--h",
                  "0.1"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j.at("kind") == "ode_trace");
    auto last = j.at("states").back().at(0).get<double>();
    CHECK(last == doctest::Approx(10 * 1.03 * 1.03).epsilon(1e-12));
  }
  SUBCASE("bad initial state") {
    auto r = run({"simulate", "--system", fx("mod2.json"), "--init", "7", "--inputs", "1"});
    CHECK(r.code == 2);
  }
  SUBCASE("diagrams cannot be simulated") {
    auto r = run({"simulate", "--system", fx("series.dwd"), "--init", "0", "--inputs", "1"});
    CHECK(r.code == 2);
    CHECK(r.error().at("error") == "KindMismatch");
  }
}

TEST_CASE("check-map") {
  SUBCASE("SIR onto SIS") {
    auto r = run({"check-map", "--map", fx("sir_to_sis.map.json"), "--from", fx("sir.json"), "--to", fx("sis.json")});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j.at("kind") == "check_report");
    CHECK(j.at("pass") == true);
  }
  SUBCASE("trajectory of the mod-2 counter") {
    auto r = run({"check-map", "--map", fx("mod2_trajectory.map.json"), "--from", fx("timeline3.json"), "--to",
                  fx("mod2.json")});
    CHECK(r.code == 0);
  }
  SUBCASE("perturbed maps fail") {
    Scratch s;
    auto m = json::parse(read_file(fx("sir_to_sis.map.json")));
    m["species"]["R"] = "I";
    auto path = s.write("bad.map.json", m.dump());
    auto r = run({"check-map", "--map", path, "--from", fx("sir.json"), "--to", fx("sis.json")});
    CHECK(r.code == 1);
    auto j = json::parse(r.out);
    CHECK(j.at("pass") == false);
    CHECK(j.contains("failure"));

    auto t = json::parse(read_file(fx("mod2_trajectory.map.json")));
    t["states"]["t2"] = "1";
    auto tpath = s.write("bad_traj.map.json", t.dump());
    CHECK(run({"check-map", "--map", tpath, "--from", fx("timeline3.json"), "--to", fx("mod2.json")}).code == 1);
  }
}

TEST_CASE("render and print") {
  auto r = run({"render", "--system", fx("sir.json")});
  REQUIRE(r.code == 0);
  auto circles = 0, squares = 0;
  for (auto at = r.out.find("shape=circle"); at != std::string::npos; at = r.out.find("shape=circle", at + 1)) ++circles;
  for (auto at = r.out.find("shape=square"); at != std::string::npos; at = r.out.find("shape=square", at + 1)) ++squares;
  CHECK(circles == 3);
  CHECK(squares == 2);
  CHECK(run({"render", "--system", fx("sir.json")}).out == r.out);

  for (const char* name : {"sir.uwd", "series.dwd", "lotka_volterra.dwd", "sir.json", "mod4.json", "coin.json",
                           "walker.json", "rabbits.json"}) {
    CAPTURE(name);
    Scratch s;
    auto first = run({"print", fx(name)});
    REQUIRE(first.code == 0);
    auto ext = fs::path(name).extension().string();
    auto copy = s.write(fs::path(name).stem().string() + ext, first.out);
    auto second = run({"print", copy});
    CHECK(second.out == first.out);
  }
}

TEST_CASE("usage and file errors") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"simulate", "--help"}).code == 0);
  auto none = run({});
  CHECK(none.code == 2);
  CHECK(none.error().at("error") == "UsageError");
  auto missing = run({"print", "/nonexistent/file.json"});
  CHECK(missing.code == 2);
  CHECK(missing.error().at("error") == "IoError");
  Scratch s;
  auto junk = s.write("junk.json", "{ not json");
  auto j = run({"print", junk});
  CHECK(j.code == 2);
  CHECK(j.error().at("message").get<std::string>().find("junk.json") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
  std::vector<std::vector<std::string>> commands = {
      {"compose", "--diagram", fx("sir.uwd"), "--systems", fx("infection.json"), fx("recovery.json")},
      {"compose", "--diagram", fx("series.dwd"), "--systems", fx("mod2.json"), fx("mod2.json")},
      {"simulate", "--system", fx("walker.json"), "--init", "0", "--inputs", "0", "--steps", "3"},
      {"simulate", "--system", fx("rabbits.json"), "--init", "10", "--inputs", "1", "--steps", "5"},
      {"render", "--system", fx("mod4.json")},
  };
  for (const auto& c : commands) {
    auto a = run(c), b = run(c);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
  }
}
