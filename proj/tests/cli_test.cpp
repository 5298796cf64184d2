#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string shell_quote(const std::string& s) { return "'" + s + "'"; }

// Runs the CLI with stdout captured; stderr goes to err_path when given.
RunResult run_cli(const std::string& args, const std::string& err_path = "") {
  std::string cmd = std::string(MISCAL_CLI_PATH) + " " + args;
  if (!err_path.empty()) cmd += " 2>" + shell_quote(err_path);
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    res.out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string golden(const std::string& name) {
  return slurp(fs::path(MISCAL_GOLDEN_DIR) / name);
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("miscal_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  os << body;
}

}  // namespace

TEST_CASE("cli: help exits 0 for every subcommand") {
  for (const char* sub : {"threshold", "calibration", "curve", "evaluate", "oracle", "sweep",
                          "generate", "experiment"}) {
    const auto res = run_cli(std::string(sub) + " --help", "/dev/null");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("--") != std::string::npos);
  }
}

TEST_CASE("cli: threshold matches the golden output") {
  const auto res = run_cli("threshold --alpha 0.1 --m 100 --jstar 50 --relation mce");
  CHECK(res.exit_code == 0);
  CHECK(res.out == golden("threshold_mce_a01_m100_j50.json"));
}

TEST_CASE("cli: usage errors exit 2 with a greppable line") {
  TempDir tmp;
  const auto err = tmp.file("err.txt");
  const auto res = run_cli("threshold --alpha 0.1 --m 100", err);
  CHECK(res.exit_code == 2);
  const auto msg = slurp(err);
  CHECK(msg.rfind("error: usage:", 0) == 0);
}

TEST_CASE("cli: domain errors exit 1 with a greppable line") {
  TempDir tmp;
  const auto err = tmp.file("err.txt");
  const auto res =
      run_cli("threshold --alpha 0.1 --m 100 --jstar 100 --relation mce", err);
  CHECK(res.exit_code == 1);
  const auto msg = slurp(err);
  CHECK(msg.rfind("error: domain:", 0) == 0);
}

TEST_CASE("cli: calibration on a small file") {
  TempDir tmp;
  const auto csv = tmp.file("scores.csv");
  write_file(csv, "score,outcome\n0.2,0\n0.2,0\n0.8,1\n0.8,0\n");
  const auto res = run_cli("calibration --input " + shell_quote(csv) + " --m 10");
  CHECK(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j.at("ece").get<double>() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(j.at("mce").get<double>() == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("cli: curve writes the pinned CSV and a summary line") {
  TempDir tmp;
  const auto csv = tmp.file("scores.csv");
  // All mass at score 1.0, 90% positive: the worked example, empirically.
  std::string body = "score,outcome\n";
  for (int k = 0; k < 10; ++k) body += k < 9 ? "1,1\n" : "1,0\n";
  write_file(csv, body);
  const auto out = tmp.file("curve.csv");
  const auto res = run_cli("curve --input " + shell_quote(csv) +
                           " --m 100 --jstar 99 --alpha 0.1 --relation ece --output " +
                           shell_quote(out));
  CHECK(res.exit_code == 0);
  double ece = -1.0, mce = -1.0;
  CHECK(std::sscanf(res.out.c_str(), "ece=%lf mce=%lf", &ece, &mce) == 2);
  CHECK(ece == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(res.out.find("utility_at_jhat=0") != std::string::npos);
  const auto text = slurp(out);
  CHECK(text.rfind("j,threshold,nb_model,nb_all,nb_none,utility,mark\n", 0) == 0);
  CHECK(text.find("\n99,0.99,-9,-9,0,-9,jstar\n") != std::string::npos);
  CHECK(text.find("\n100,1,0,-9,0,0,jhat\n") != std::string::npos);
}

TEST_CASE("cli: curve on an empty file exits 1") {
  TempDir tmp;
  const auto csv = tmp.file("empty.csv");
  write_file(csv, "");
  const auto err = tmp.file("err.txt");
  const auto res = run_cli("curve --input " + shell_quote(csv) +
                               " --m 100 --jstar 50 --output " + tmp.file("o.csv"),
                           err);
  CHECK(res.exit_code == 1);
  CHECK(slurp(err).rfind("error: domain:", 0) == 0);
}

TEST_CASE("cli: generate is deterministic and feeds calibration") {
  TempDir tmp;
  const auto a = tmp.file("a.csv");
  const auto b = tmp.file("b.csv");
  const std::string flags =
      "generate --n 2000 --m 20 --law logit-normal --location -0.5 --scale 1 "
      "--corruption subgroup-shift --shift-c 1.2 --group-fraction 0.4 --seed 31337 ";
  CHECK(run_cli(flags + "--output " + shell_quote(a)).exit_code == 0);
  CHECK(run_cli(flags + "--output " + shell_quote(b)).exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  const auto cal = run_cli("calibration --input " + shell_quote(a) + " --m 20");
  CHECK(cal.exit_code == 0);
  CHECK(nlohmann::json::parse(cal.out).at("mce").get<double>() > 0.0);
}

TEST_CASE("cli: generate honors a config file with flag overrides") {
  TempDir tmp;
  const auto cfg = tmp.file("spec.cfg");
  write_file(cfg, "law=two-point\nv=1.0\nvstar=0.9\nmu=1.0\nn=50\nseed=3\n");
  const auto out = tmp.file("d.csv");
  const auto res = run_cli("generate --n 100 --m 100 --config " + shell_quote(cfg) +
                           " --seed 3 --output " + shell_quote(out));
  CHECK(res.exit_code == 0);
  const auto text = slurp(out);
  CHECK(std::count(text.begin(), text.end(), '\n') == 101);  // header + n rows
}

TEST_CASE("cli: config values survive unless a flag is passed") {
  TempDir tmp;
  const auto cfg = tmp.file("spec.cfg");
  write_file(cfg, "law=logit-normal\nlocation=3\nscale=0.25\nn=200\nseed=8\n");
  const auto mean_score = [&](const std::string& extra) {
    const auto out = tmp.file("x.csv");
    REQUIRE(run_cli("generate --n 200 --m 10 --config " + shell_quote(cfg) + extra +
                    " --output " + shell_quote(out))
                .exit_code == 0);
    std::istringstream is(slurp(out));
    std::string line;
    std::getline(is, line);
    double sum = 0.0;
    int n = 0;
    while (std::getline(is, line)) {
      sum += std::stod(line.substr(0, line.find(',')));
      ++n;
    }
    return sum / n;
  };
  CHECK(mean_score("") > 0.75);                  // config location=3 kept
  CHECK(mean_score(" --location -3") < 0.25);    // flag overrides it
}

TEST_CASE("cli: sweep golden and jobs determinism") {
  TempDir tmp;
  const auto a = tmp.file("a.csv");
  const auto b = tmp.file("b.csv");
  CHECK(run_cli("sweep --alpha 0.1 --m 10 --relation mce --steps 19 --jobs 1 --output " +
                shell_quote(a))
            .exit_code == 0);
  CHECK(run_cli("sweep --alpha 0.1 --m 10 --relation mce --steps 19 --jobs 4 --output " +
                shell_quote(b))
            .exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) == golden("sweep_mce_a01_m10_s19.csv"));
}

TEST_CASE("cli: oracle pass flag on a worked case") {
  const auto res = run_cli("oracle --m 10 --jstar 5 --alpha 0.2 --relation mce "
                           "--resolution 50 --jobs 2");
  CHECK(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j.at("pass").get<bool>());
  CHECK(j.at("j_min").get<double>() == 5.0);
}

TEST_CASE("cli: oracle --general guard") {
  TempDir tmp;
  const auto err = tmp.file("err.txt");
  const auto res = run_cli(
      "oracle --m 100 --jstar 50 --alpha 0.1 --relation mce --general --support-cap 3", err);
  CHECK(res.exit_code == 1);
  CHECK(slurp(err).rfind("error: domain:", 0) == 0);
}

TEST_CASE("cli: experiment writes the named report file") {
  TempDir tmp;
  const auto csv = tmp.file("scores.csv");
  std::string body = "score,outcome\n";
  for (int k = 0; k < 10; ++k) body += k < 9 ? "1,1\n" : "1,0\n";
  write_file(csv, body);
  const auto res = run_cli("experiment --design gain --input " + shell_quote(csv) +
                           " --m 100 --alpha 0.1 --relation ece --jstar-points 99 "
                           "--output-dir " +
                           shell_quote(tmp.path.string()));
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(tmp.path / "gain_ece_0.1.csv"));
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j.at("mean_gain").get<double>() == 9.0);
}

TEST_CASE("cli: evaluate emits a gain report") {
  TempDir tmp;
  const auto csv = tmp.file("scores.csv");
  std::string body = "score,outcome\n";
  for (int k = 0; k < 10; ++k) body += k < 9 ? "1,1\n" : "1,0\n";
  write_file(csv, body);
  const auto res = run_cli("evaluate --input " + shell_quote(csv) +
                           " --m 100 --alpha 0.1 --relation ece --jstar-points 99");
  CHECK(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j.at("per_jstar")[0].at("gain").get<double>() == 9.0);
}
