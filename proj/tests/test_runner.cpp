#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gapcount/cli/runner.hpp"

namespace fs = std::filesystem;
using namespace gapcount::cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "gapcount");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("gapcount_test_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& body) const {
    std::ofstream(path / name) << body;
    return (path / name).string();
  }
  std::string at(const std::string& name) const { return (path / name).string(); }
};

const char* kP2 = "[background]\nperiod = 2\na = [1.0, 1.0]\nb = [1.0, -1.0]\n";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("bands writes four edge rows with a commented header") {
    TempDir d;
    const std::string cfg = d.write("p2.toml", kP2);
    const Run r = run({"bands", "--config", cfg, "--out", d.at("bands.csv")});
    REQUIRE(r.code == 0);
    const std::string body = slurp(d.at("bands.csv"));
    std::istringstream in(body);
    std::vector<std::string> data;
    bool saw_version = false, saw_time = false, saw_period = false;
    for (std::string line; std::getline(in, line);) {
      if (line.rfind("#", 0) == 0) {
        saw_version |= line.find(version()) != std::string::npos;
        saw_time |= line.find("generated") != std::string::npos;
        saw_period |= line.find("period = 2") != std::string::npos;
      } else {
        data.push_back(line);
      }
    }
    CHECK(saw_version);
    CHECK(saw_time);
    CHECK(saw_period);
    REQUIRE(data.size() == 5);
    CHECK(data[0] == "band,side,lambda,slope,resonant_sites");
    CHECK(data[1].find("-2.2360679774996") != std::string::npos);
  }

  TEST_CASE("exit codes") {
    TempDir d;
    const std::string nop = d.write("np.toml", "[background]\na = [1.0]\nb = [0.0]\n");
    const Run missing = run({"bands", "--config", nop, "--out", d.at("x.csv")});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("period") != std::string::npos);

    const std::string e0 = d.write("e0.toml", "[verify]\ne0_fraction = 0.0\n");
    const Run prox = run({"verify", "--config", e0, "--variant", "t11", "--seeds", "0..9", "--out", d.at("r.json")});
    CHECK(prox.code == 2);
    CHECK(prox.err.find("distance") != std::string::npos);

    CHECK(run({"bands", "--bogus"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"bands", "--help"}).code == 0);
    CHECK(run({"count", "--config", d.write("p.toml", kP2), "--format", "xml"}).code == 1);
    const Run nointerval = run({"count", "--config", d.at("p.toml"), "--out", d.at("c.csv")});
    CHECK(nointerval.code == 1);
    CHECK(nointerval.err.find("count.interval") != std::string::npos);
  }

  TEST_CASE("dry run computes nothing and writes nothing") {
    TempDir d;
    const std::string cfg = d.write("p2.toml", kP2);
    for (const char* cmd : {"bands", "green-scan"}) {
      const Run r = run({cmd, "--config", cfg, "--dry-run", "--out", d.at("o.csv")});
      CHECK(r.code == 0);
      CHECK(r.out.find("plan:") != std::string::npos);
      CHECK_FALSE(fs::exists(d.at("o.csv")));
    }
    CHECK(run({"count", "--config", cfg, "--dry-run"}).code == 1);  // interval is still required
  }

  TEST_CASE("flags override config values and reach the header") {
    TempDir d;
    const std::string cfg = d.write("p2.toml", kP2);
    const Run r = run({"count", "--config", cfg, "--window=-30..30", "--interval=-1,1", "--no-timestamp", "--out",
                       d.at("c.json")});
    REQUIRE(r.code == 0);
    const std::string body = slurp(d.at("c.json"));
    CHECK(body.find("generated") == std::string::npos);
    CHECK(body.find("-30..30") != std::string::npos);
    CHECK(body.find("\"count\"") != std::string::npos);
  }

  TEST_CASE("outputs are byte-identical across runs without timestamps") {
    TempDir d;
    const std::string cfg = d.write("p2.toml", std::string(kP2) + "[green]\nlambda = 0.25\npairs = \"0,0;1,4\"\n");
    REQUIRE(run({"green", "--config", cfg, "--no-timestamp", "--out", d.at("a.csv")}).code == 0);
    REQUIRE(run({"green", "--config", cfg, "--no-timestamp", "--out", d.at("b.csv")}).code == 0);
    CHECK(slurp(d.at("a.csv")) == slurp(d.at("b.csv")));
  }

  TEST_CASE("every subcommand is registered") {
    CHECK(subcommands().size() == 8);
    for (const std::string& s : subcommands()) CHECK(run({s, "--help"}).code == 0);
  }
}
