#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "commands.hpp"

using namespace ghostpol;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ghostpol");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ghostpol_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "config.json";
  write_file(p, body);
  return p;
}

const fs::path kData = GHOSTPOL_DATA_DIR;

}  // namespace

TEST_CASE("verify exits zero") {
  const Outcome o = run_cli({"verify"});
  CHECK(o.code == cli::kOk);
  CHECK(o.out.find("all suites passed") != std::string::npos);
}

TEST_CASE("optimize is deterministic for a fixed seed") {
  const fs::path dir = scratch("optimize");
  const fs::path cfg = write_config(dir, R"({"objects": "paper-abc", "q": 1.0, "outputs": 3, "seed": 5})");
  REQUIRE(run_cli({"optimize", "--config", cfg.string(), "--out", (dir / "a").string()}).code == cli::kOk);
  REQUIRE(run_cli({"optimize", "--config", cfg.string(), "--out", (dir / "b").string()}).code == cli::kOk);
  CHECK(read_file(dir / "a" / "design.json") == read_file(dir / "b" / "design.json"));
  const auto doc = nlohmann::json::parse(read_file(dir / "a" / "design.json"));
  CHECK(doc["margin"].get<double>() > 0.0);
  CHECK(doc["config"]["seed"].get<int>() == 5);
}

TEST_CASE("simulate writes poincare and pattern tables") {
  const fs::path dir = scratch("simulate");
  const fs::path cfg = write_config(dir, R"({"objects": "paper-abc", "design": "identity", "grid_points": 36, "out": "o"})");
  const Outcome o = run_cli({"simulate", "--config", cfg.string()});
  REQUIRE(o.code == cli::kOk);
  const auto rows = parse_poincare_csv(read_file(dir / "o" / "poincare.csv"));
  CHECK(rows.size() == 108);
  // Identity probe: the quarter-wave plate heralds the maximally mixed state at every angle.
  for (const PoincareRow& r : rows)
    if (r.object_name == object_a().name) CHECK(r.p.norm() < 1e-12);
  CHECK(parse_patterns_csv(read_file(dir / "o" / "patterns.csv")).size() == 108);
  CHECK_FALSE(fs::exists(dir / "o" / "design.json"));
}

TEST_CASE("identify recovers the object from noiseless counts") {
  const fs::path dir = scratch("identify");
  const fs::path design = kData / "paper_abc_design.json";
  const fs::path cfg = write_config(dir, R"({"objects": "paper-abc", "design": ")" + design.string() + R"(", "out": "o"})");

  const Design d = parse_design(read_file(design));
  const CoincidencePattern p = pattern(object_b(), 40.0 * std::numbers::pi / 180.0, d.probe.jones(), d.bank, 1.0);
  std::string counts;
  for (double j : p.joints) counts += std::to_string(std::llround(j * 1e9)) + " ";
  write_file(dir / "counts.txt", counts);

  const Outcome o = run_cli({"identify", "--config", cfg.string(), "--counts", (dir / "counts.txt").string()});
  REQUIRE(o.code == cli::kOk);
  const auto report = nlohmann::json::parse(read_file(dir / "o" / "identify.json"));
  CHECK(report["result"]["object_name"] == object_b().name);
  CHECK(report["result"]["theta_hat_rad"].get<double>() == doctest::Approx(40.0 * std::numbers::pi / 180.0));
}

TEST_CASE("noise-sweep honors budget overrides") {
  const fs::path dir = scratch("noise");
  const fs::path design = kData / "paper_abc_design.json";
  const fs::path cfg = write_config(
      dir, R"({"objects": "paper-abc", "design": ")" + design.string() + R"(", "trials": 50, "out": "o"})");
  const Outcome o = run_cli({"noise-sweep", "--config", cfg.string(), "--budgets", "10,1000000"});
  REQUIRE(o.code == cli::kOk);
  const auto rows = parse_noise_csv(read_file(dir / "o" / "noise_sweep.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].budget == 1000000);
  CHECK(rows[1].accuracy >= 0.99);
  CHECK(rows[0].trials == 50);
}

TEST_CASE("non-discriminable configuration exits 2") {
  const fs::path dir = scratch("q0");
  const fs::path cfg = write_config(
      dir, R"({"objects": "retarder-sweep", "q": 0.0, "optimizer": {"multistarts": 2}, "out": "o"})");
  const Outcome o = run_cli({"optimize", "--config", cfg.string()});
  CHECK(o.code == cli::kNonDiscriminable);
  CHECK(fs::exists(dir / "o" / "design.json"));
}

TEST_CASE("invalid input exits 1 with a message") {
  const fs::path dir = scratch("invalid");
  auto expect_invalid = [&](const std::string& body, const std::string& needle) {
    const fs::path cfg = write_config(dir, body);
    const Outcome o = run_cli({"simulate", "--config", cfg.string()});
    CHECK(o.code == cli::kInvalidInput);
    CHECK_MESSAGE(o.err.find(needle) != std::string::npos, o.err);
  };
  expect_invalid(R"({"q": 1.5})", "q");
  expect_invalid(R"({"objects": "no-such-preset"})", "paper-abc");
  expect_invalid(R"({"objects": {"objects": [{"name": "x", "t_v": 2}]}})", "t_v");
  expect_invalid(R"({"outputs": 7})", "outputs");
  expect_invalid("not json", "JSON");
  expect_invalid(R"({"design": "missing.json"})", "missing.json");

  CHECK(run_cli({"simulate"}).code == cli::kInvalidInput);
  CHECK(run_cli({"frobnicate"}).code == cli::kInvalidInput);
}

TEST_CASE("golden fixtures") {
  const ObjectSet golden = parse_object_set(read_file(kData / "paper_abc.json"));
  CHECK(golden == preset_set("paper-abc"));

  const Design d = parse_design(read_file(kData / "paper_abc_design.json"));
  const double margin = design_margin(preset_set("paper-abc"), d.probe, d.bank, 1.0, OptimizerConfig{});
  CHECK(margin > 0.0);
  const auto doc = nlohmann::json::parse(read_file(kData / "paper_abc_design.json"));
  CHECK(margin == doctest::Approx(doc["margin"].get<double>()).epsilon(1e-12));
}

TEST_CASE("installed binary runs") {
  const std::string cmd = std::string("\"") + GHOSTPOL_BINARY + "\" verify > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
}
