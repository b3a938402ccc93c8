// Drives the installed command-line binary end to end: exit codes, file
// formats, and reproducibility. The binary path comes from the build system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(EQBOUND_CLI_PATH) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

const char* kSweepConfig = R"({
  "scenario": {"preset": "padded_torus", "n_img": 4, "k": 3, "levels": 3},
  "axis": "lambda",
  "grid": [0.1111111111111111, 0.4444444444444444, 1.0],
  "n": 12,
  "trials": 100
})";

} // namespace

TEST_CASE("exit code contract") {
    CHECK(run("verify generr --seed 5").exit_code == 0);
    CHECK(run("verify nosuchsuite").exit_code == 2);
    CHECK(run("sweep").exit_code == 2); // missing config
    CHECK(run("verify generr --delta 0.9").exit_code == 2);
    CHECK(run("tradeoff --grid lin:0:1:10").exit_code == 2); // lambda must be positive
}

TEST_CASE("verify emits a JSON report") {
    const std::string report_path = "/tmp/eqbound_test_verify.json";
    const auto r = run("verify iso --out " + report_path);
    CHECK(r.exit_code == 0);
    const std::string report = slurp(report_path);
    CHECK(report.find("\"version\"") != std::string::npos);
    CHECK(report.find("\"suite\": \"iso\"") != std::string::npos);
    CHECK(report.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("sweep output: row count, header, determinism") {
    const std::string cfg_path = "/tmp/eqbound_test_sweep_cfg.json";
    write_file(cfg_path, kSweepConfig);

    const std::string out1 = "/tmp/eqbound_test_rows1.csv";
    const std::string out2 = "/tmp/eqbound_test_rows2.csv";
    CHECK(run("sweep --config " + cfg_path + " --seed 17 --out " + out1).exit_code == 0);
    CHECK(run("sweep --config " + cfg_path + " --seed 17 --out " + out2).exit_code == 0);

    const std::string csv = slurp(out1);
    CHECK(csv == slurp(out2)); // byte-identical reruns
    CHECK(csv.rfind("scenario,lambda,epsilon,n,trial,gen_err,app_err,perf_err,gen_bound,"
                    "app_bound,perf_bound,regime,violation,seed\n",
                    0) == 0);
    // 3 grid points x 100 trials plus the header line
    std::size_t lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 301);
    CHECK(csv.find('\r') == std::string::npos);

    const auto different = run("sweep --config " + cfg_path + " --seed 18 --out " + out2);
    CHECK(different.exit_code == 0);
    CHECK(csv != slurp(out2));
}

TEST_CASE("sweep with zero trials emits only the header") {
    const std::string cfg_path = "/tmp/eqbound_test_sweep_empty.json";
    write_file(cfg_path, R"({
      "scenario": {"preset": "padded_torus", "n_img": 4, "k": 3, "levels": 3},
      "axis": "lambda", "grid": [1.0], "n": 10, "trials": 0})");
    const std::string out = "/tmp/eqbound_test_rows_empty.csv";
    CHECK(run("sweep --config " + cfg_path + " --out " + out).exit_code == 0);
    CHECK(slurp(out) ==
          "scenario,lambda,epsilon,n,trial,gen_err,app_err,perf_err,gen_bound,app_bound,"
          "perf_bound,regime,violation,seed\n");
}

TEST_CASE("tradeoff curve with default constants") {
    const std::string out = "/tmp/eqbound_test_curve.csv";
    const auto r = run("tradeoff --out " + out);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(out);
    // provenance lines precede the header so no number appears unexplained
    CHECK(csv.rfind("# tradeoff curve; constants C=0.04", 0) == 0);
    CHECK(csv.find("\nlambda,bound\n") != std::string::npos);
    CHECK(csv.find("d_G=1 d0=3 eps=0") != std::string::npos);
    // summary reports both closed forms and the grid argmin
    CHECK(r.output.find("grid argmin lambda=0.131") != std::string::npos);
    CHECK(r.output.find("curve parameterization)=0.1313") != std::string::npos);
}

TEST_CASE("analyze reports metric and group diagnostics") {
    const std::string cfg_path = "/tmp/eqbound_test_analyze.json";
    write_file(cfg_path, R"({
      "space": {"preset": "cycle", "size": 8},
      "group": "cyclic:8",
      "scenario": {"preset": "padded_torus", "n_img": 4, "k": 3, "levels": 3},
      "lambda": 0.4444444444444444})");
    const auto r = run("analyze --config " + cfg_path);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"ddim\"") != std::string::npos);
    CHECK(r.output.find("\"delta_G\": 1.0") != std::string::npos);
    CHECK(r.output.find("\"isodiametric_C_G\"") != std::string::npos);
    CHECK(r.output.find("\"density\"") != std::string::npos);
}

TEST_CASE("analyze evaluates a bound-inputs document") {
    const std::string cfg_path = "/tmp/eqbound_test_bounds.json";
    write_file(cfg_path, R"({
      "bounds": {"d": 4.0, "d_G": 1.0, "diameter": 2.0, "stab_size": 6,
                 "group_size": 12, "n": 10000, "eps": 0.1, "lambda": 0.5}})");
    const auto r = run("analyze --config " + cfg_path);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"partial\"") != std::string::npos);
    CHECK(r.output.find("\"E_eps\"") != std::string::npos);
    CHECK(r.output.find("\"regime\"") != std::string::npos);
    CHECK(r.output.find("\"approximation\"") != std::string::npos);
}
