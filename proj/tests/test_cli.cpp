#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

const fs::path work_dir = fs::path("cli_work");

struct RunResult {
  int code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  fs::create_directories(work_dir);
  const fs::path out_path = work_dir / "stdout.txt";
  const std::string command =
      std::string(NME_CLI_PATH) + " " + args + " > " + out_path.string() + " 2>&1";
  const int raw = std::system(command.c_str());
  RunResult result;
  result.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(out_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  result.stdout_text = buffer.str();
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("solve: identity target is returned unchanged (exit 0)") {
  const fs::path report = work_dir / "identity_outcome.json";
  const fs::path trace = work_dir / "identity_trace.csv";
  const RunResult run = run_cli("solve --problem identity --y sin:1:0.5 --eps 1e-9 --out-report " +
                                report.string() + " --out-trace " + trace.string());
  CHECK(run.code == 0);
  const json outcome = json::parse(slurp(report));
  CHECK(outcome.at("status") == "Success");
  CHECK(outcome.at("x").at("b")[0] == 0.5);
  const std::string csv = slurp(trace);
  CHECK(csv.rfind("t,r,accepted,defect_0", 0) == 0);
}

TEST_CASE("solve: quadratic small target certifies at eps 1e-6 (exit 0)") {
  const RunResult run = run_cli("solve --problem quadratic --mu 1 --y sin:1:0.1 --eps 1e-6");
  CHECK(run.code == 0);
  CHECK(run.stdout_text.find("status=Success") != std::string::npos);
}

TEST_CASE("solve: guard-violating target exits 2 with GuardExit") {
  const fs::path report = work_dir / "guard_outcome.json";
  const RunResult run =
      run_cli("solve --problem quadratic --mu 1 --y sin:1:10 --out-report " + report.string());
  CHECK(run.code == 2);
  const json outcome = json::parse(slurp(report));
  CHECK(outcome.at("status") == "GuardExit");
}

TEST_CASE("verify: smoothing single mode passes (exit 0)") {
  const fs::path report = work_dir / "verify_smoothing.json";
  const RunResult run = run_cli("verify --problem smoothing --y sin:3:1 --eps 1e-9 --levels 3 " +
                                std::string("--out-report ") + report.string());
  CHECK(run.code == 0);
  const json j = json::parse(slurp(report));
  CHECK(j.at("pass") == true);
  CHECK(j.at("theorem_bounds").at("bound_ratio")[0].get<double>() ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("verify: corrupted c reports bound failures (exit 2)") {
  const fs::path config_path = work_dir / "corrupted.json";
  {
    std::ofstream out(config_path);
    out << R"({"problem": "smoothing", "K": 16, "N": 4, "q": 4,
               "c": [0.1, 0.1, 0.1, 0.1, 0.1]})";
  }
  const fs::path report = work_dir / "verify_corrupted.json";
  const RunResult run = run_cli("verify --config " + config_path.string() +
                                " --y sin:3:1 --eps 1e-9 --levels 3 --out-report " +
                                report.string());
  CHECK(run.code == 2);
  const json j = json::parse(slurp(report));
  CHECK(j.at("pass") == false);
  CHECK(j.at("theorem_bounds").at("pass") == false);
}

TEST_CASE("solve: coefficient-file target via @path") {
  const fs::path target_path = work_dir / "target.json";
  fs::create_directories(work_dir);
  {
    std::ofstream out(target_path);
    json j;
    j["K"] = 16;
    j["a"] = std::vector<double>(17, 0.0);
    j["b"] = std::vector<double>(16, 0.0);
    j["b"][2] = 1.0;  // sin(3 theta)
    out << j.dump();
  }
  const fs::path report = work_dir / "file_target_outcome.json";
  const RunResult run = run_cli("solve --problem smoothing --y @" + target_path.string() +
                                " --eps 1e-9 --out-report " + report.string());
  CHECK(run.code == 0);
  const json outcome = json::parse(slurp(report));
  CHECK(outcome.at("x").at("b")[2].get<double>() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli("solve --no-such-flag").code == 1);
  CHECK(run_cli("solve --problem cubic --y sin:1:1").code == 1);
  CHECK(run_cli("solve --problem identity --y tan:1:1").code == 1);
  CHECK(run_cli("verify --config does_not_exist.json").code == 1);
  CHECK(run_cli("").code == 1);
}

TEST_CASE("same config and seed give byte-identical outputs") {
  const fs::path report_a = work_dir / "det_a.json";
  const fs::path trace_a = work_dir / "det_a.csv";
  const fs::path report_b = work_dir / "det_b.json";
  const fs::path trace_b = work_dir / "det_b.csv";
  const std::string base =
      "solve --problem nonlinear_smoothing --mu 0.5 --y sin:2:0.2+cos:1:0.1 --eps 1e-5 "
      "--levels 1 --seed 777";
  CHECK(run_cli(base + " --out-report " + report_a.string() + " --out-trace " +
                trace_a.string())
            .code == 0);
  CHECK(run_cli(base + " --out-report " + report_b.string() + " --out-trace " +
                trace_b.string())
            .code == 0);
  CHECK(slurp(report_a) == slurp(report_b));
  CHECK(slurp(trace_a) == slurp(trace_b));
  CHECK(!slurp(trace_a).empty());
}

TEST_CASE("props subcommand reports per-property lines (exit 0)") {
  const fs::path report = work_dir / "props.json";
  const RunResult run = run_cli("props --seed 20240101 --out-report " + report.string());
  CHECK(run.code == 0);
  CHECK(run.stdout_text.find("PASS metric_axioms") != std::string::npos);
  CHECK(run.stdout_text.find("FAIL") == std::string::npos);
  const json j = json::parse(slurp(report));
  CHECK(j.is_array());
  bool saw_inclusion = false;
  for (const auto& entry : j) {
    CHECK(entry.at("pass") == true);
    if (entry.at("name").get<std::string>().rfind("box_inclusion_", 0) == 0)
      saw_inclusion = true;
  }
  CHECK(saw_inclusion);
}
