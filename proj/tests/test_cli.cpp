#include "doctest.h"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "clme/grid_io.hpp"
#include "clme/parallel.hpp"
#include "clme/scenario.hpp"

using namespace clme;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"({
  "params": {"gamma": 5, "omega": 3, "diffusion": {"mode": "explicit", "D": 60}},
  "state": {"type": "cat", "separation": 2, "sigma": 0.4},
  "times": [0, 0.5],
  "grid": {"n_R": 128, "n_r": 128, "R_max": 8, "r_max": 8},
  "pipeline": ["observables", "spectrum", "density", "char", "wigner", "audit"],
  "spectrum": {"n_max": 12},
  "audit": {"samples": 100}
})";

std::string config_error_for(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("clgrid_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CLGRID_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config errors name the offending key") {
  auto base = nlohmann::json::parse(kSmall);

  auto j = base;
  j["params"]["gamma"] = "fast";
  CHECK(config_error_for(j.dump()).find("params.gamma") != std::string::npos);

  j = base;
  j["grid"]["n_R"] = 100;
  CHECK(config_error_for(j.dump()).find("grid.n_R") != std::string::npos);

  j = base;
  j["state"]["colour"] = 1;
  CHECK(config_error_for(j.dump()).find("state.colour") != std::string::npos);

  j = base;
  j["times"] = {1.0, 0.5};
  CHECK(config_error_for(j.dump()).find("times") != std::string::npos);

  j = base;
  j["pipeline"] = nlohmann::json::array();
  CHECK(config_error_for(j.dump()).find("pipeline") != std::string::npos);

  j = base;
  j["params"]["omega"] = 5;
  auto msg = config_error_for(j.dump());
  CHECK(msg.find("CriticalDamping") != std::string::npos);

  CHECK(config_error_for("{not json").find("malformed") != std::string::npos);
}

TEST_CASE("times ranges and units") {
  auto j = nlohmann::json::parse(kSmall);
  j["times"] = {{"start", 0.0}, {"stop", 1.0}, {"count", 5}};
  j["units"] = {{"boltzmann", 2.0}};
  j["params"]["diffusion"] = {{"mode", "high_temperature"}, {"temperature", 1.5}};
  auto sc = parse_scenario(j.dump());
  REQUIRE(sc.times.size() == 5);
  CHECK(sc.times[2] == doctest::Approx(0.5));
  CHECK(sc.params.diffusion() == doctest::Approx(8 * 5 * 3.0));
}

TEST_CASE("grid dumps round trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int trial = 0; trial < 20; ++trial) {
    GridDump d;
    d.n1 = 1 + rng() % 9;
    d.n2 = 1 + rng() % 9;
    d.step1 = u(rng);
    d.step2 = u(rng);
    for (std::uint64_t k = 0; k < d.n1 * d.n2; ++k) d.values.emplace_back(u(rng), u(rng));
    auto bytes = encode_grid(d);
    CHECK(bytes.size() == kGridHeaderBytes + 16 * d.n1 * d.n2);
    CHECK(std::equal(bytes.begin(), bytes.begin() + 8, kGridMagic));
    auto back = decode_grid(bytes);
    CHECK(back.n1 == d.n1);
    CHECK(back.step2 == d.step2);
    CHECK(back.values == d.values);
  }
  std::vector<unsigned char> junk(50, 0);
  CHECK_THROWS_AS(decode_grid(junk), Error);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("run writes artifacts whose checksums match the manifest") {
  auto dir = scratch("manifest");
  RunOptions opts;
  opts.output_dir = dir;
  std::ostringstream log;
  auto res = run_scenario(parse_scenario(kSmall), opts, log);
  CHECK(res.audit_discrepancy);
  CHECK(*res.audit_discrepancy < 1e-10);

  auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["tool"] == "clgrid");
  CHECK(manifest["version"] == kToolVersion);
  std::size_t checked = 0;
  for (const auto& entry : manifest["outputs"]) {
    const auto bytes = slurp(dir / entry["file"].get<std::string>());
    CHECK(sha256_hex(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()) == entry["sha256"]);
    ++checked;
  }
  CHECK(checked >= 8);

  std::istringstream csv(slurp(dir / "observables.csv"));
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,trace,purity,S,dx,dp,dxdp,offdiag_ratio");
}

TEST_CASE("reruns are bit-identical across thread counts") {
  auto a = scratch("rerun_a"), b = scratch("rerun_b");
  std::ostringstream log;
  auto sc = parse_scenario(kSmall);
  set_thread_count(1);
  run_scenario(sc, RunOptions{false, false, a}, log);
  set_thread_count(4);
  run_scenario(sc, RunOptions{false, false, b}, log);
  set_thread_count(1);
  for (const auto& e : fs::directory_iterator(a))
    CHECK_MESSAGE(slurp(e.path()) == slurp(b / e.path().filename()), e.path().filename().string());
}

TEST_CASE("exit codes") {
  auto dir = scratch("exit");
  auto j = nlohmann::json::parse(kSmall);
  j["pipeline"] = {"observables"};
  j["times"] = {0.1};

  std::ofstream(dir / "ok.json") << j.dump();
  CHECK(run_cli("run " + (dir / "ok.json").string() + " --out " + (dir / "out").string()) == 0);
  CHECK(fs::exists(dir / "out" / "observables.csv"));

  auto crit = j;
  crit["params"]["omega"] = 5;
  std::ofstream(dir / "crit.json") << crit.dump();
  CHECK(run_cli("run " + (dir / "crit.json").string()) == 2);

  auto bad = j;
  bad["state"]["sigma"] = 0.01;
  std::ofstream(dir / "alias.json") << bad.dump();
  CHECK(run_cli("run " + (dir / "alias.json").string() + " --out " + (dir / "alias").string()) == 3);

  std::ofstream(dir / "io.json") << j.dump();
  std::ofstream(dir / "blocker") << "x";
  CHECK(run_cli("run " + (dir / "io.json").string() + " --out " + (dir / "blocker" / "sub").string()) == 4);

  CHECK(run_cli("run " + (dir / "missing.json").string()) == 2);
  CHECK(run_cli("frobnicate") == 2);
}
