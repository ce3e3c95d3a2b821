#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(BLASCHKE_TOOL) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string stderr_of(const std::string& args) {
  std::string cmd = std::string(BLASCHKE_TOOL) + " " + args + " 2>&1 >/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  pclose(pipe);
  return out;
}

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / ("blaschke_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string write_spec(const std::string& name, const std::string& json) {
  fs::path p = scratch_dir() / name;
  std::ofstream(p) << json;
  return p.string();
}

std::vector<std::vector<double>> read_csv(const std::string& text, std::string& header) {
  std::istringstream in(text);
  std::getline(in, header);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("analyze z^2") {
  auto spec = write_spec("sq.json", R"({"theta": 0, "zeros": [[0,0],[0,0]]})");
  auto r = run("analyze " + spec);
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == "1");
  CHECK(j["q_orbitals"] == 2);
  CHECK(j["commutant_dim"] == 2);
  CHECK(j["commutative"] == true);
  CHECK(j["num_minimal_projections"] == 2);
  CHECK(j["generators"] == nlohmann::json::parse("[[1,0]]"));
  for (auto& [name, check] : j["theorem_checks"].items()) CHECK_MESSAGE(check["pass"] == true, name);
}

TEST_CASE("analyze a single factor") {
  auto spec = write_spec("one.json", R"({"theta": 1.0, "zeros": [[0.3,-0.2]]})");
  auto r = run("analyze " + spec);
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["q_orbitals"] == 1);
  CHECK(j["commutant_dim"] == 1);
  CHECK(j["branch_values"].empty());
  CHECK(j["generators"].empty());
}

TEST_CASE("analyze writes the report file and is reproducible") {
  auto spec = write_spec("three.json", R"({"theta": 0.2, "zeros": [[0.1,0.4],[-0.3,-0.2],[0.5,0.0]]})");
  fs::path a = scratch_dir() / "a.json", b = scratch_dir() / "b.json";
  REQUIRE(run("analyze " + spec + " --seed 3 --report " + a.string()).code == 0);
  REQUIRE(run("analyze " + spec + " --seed 3 --report " + b.string()).code == 0);
  std::ifstream fa(a), fb(b);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(!sa.str().empty());
  CHECK(sa.str() == sb.str());
  CHECK(nlohmann::json::parse(sa.str())["seed"] == 3);
}

TEST_CASE("trace of the z^2 loop swaps the fiber") {
  auto spec = write_spec("sq_trace.json", R"({"theta": 0, "zeros": [[0,0],[0,0]]})");
  auto r = run("trace-loop " + spec + " --index 0");
  REQUIRE(r.code == 0);
  std::string header;
  auto rows = read_csv(r.out, header);
  CHECK(header == "t,re_w,im_w,re_z1,im_z1,re_z2,im_z2");
  REQUIRE(rows.size() >= 2);
  const auto& first = rows.front();
  const auto& last = rows.back();
  REQUIRE(first.size() == 7);
  CHECK(std::abs(first[3] - last[5]) < 1e-9);
  CHECK(std::abs(first[4] - last[6]) < 1e-9);
  CHECK(std::abs(first[5] - last[3]) < 1e-9);
  CHECK(std::abs(first[6] - last[4]) < 1e-9);
  CHECK(first[0] == 0.0);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][0] > rows[i - 1][0]);

  fs::path out = scratch_dir() / "trace.csv";
  REQUIRE(run("trace-loop " + spec + " --index 0 --out " + out.string()).code == 0);
  std::ifstream f(out);
  std::stringstream s;
  s << f.rdbuf();
  CHECK(s.str() == r.out);
}

TEST_CASE("bad arguments exit with 2") {
  auto spec = write_spec("sq_bad.json", R"({"theta": 0, "zeros": [[0,0],[0,0]]})");
  CHECK(run("trace-loop " + spec + " --index 5").code == 2);
  CHECK(run("trace-loop " + spec + " --index abc").code == 2);
  CHECK(run("trace-loop " + spec + " --index -1").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("analyze /nonexistent/spec.json").code == 2);
  auto outside = write_spec("outside.json", R"({"theta": 0, "zeros": [[1.2,0]]})");
  CHECK(run("analyze " + outside).code == 2);
  CHECK(stderr_of("analyze " + outside).find("blaschke/InvalidInput") != std::string::npos);
  auto garbage = write_spec("garbage.json", "{not json");
  CHECK(run("analyze " + garbage).code == 2);
}

TEST_CASE("zn subcommand") {
  for (int n : {1, 2, 5}) {
    auto r = run("zn --n " + std::to_string(n));
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["q_orbitals"] == n);
  }
  CHECK(run("zn --n 0").code == 2);
}

TEST_CASE("verify-gamma") {
  auto ident = write_spec("ident.json", R"({"theta": 0, "zeros": [[0,0]]})");
  auto r = run("verify-gamma " + ident);
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["isometry_error"].get<double>() < 1e-3);
  for (const char* key : {"isometry_error", "intertwining_residual", "min_separation", "excluded_mass_bound",
                          "budget", "seed"})
    CHECK(j.contains(key));

  auto sq = write_spec("sq_gamma.json", R"({"theta": 0, "zeros": [[0,0],[0,0]]})");
  auto big = run("verify-gamma " + sq + " --budget 1000000 --samples 100");
  REQUIRE(big.code == 0);
  auto k = nlohmann::json::parse(big.out);
  CHECK(k["isometry_error"].get<double>() < 1e-2);
  CHECK(k["intertwining_residual"].get<double>() < 1e-9);
  CHECK(k["budget"] == 1000000);

  // An impossible bound turns the run into a check failure.
  CHECK(run("verify-gamma " + sq + " --isometry-bound 1e-12").code == 1);
  CHECK(run("verify-gamma " + sq + " --budget 10").code == 2);
}

TEST_CASE("config prints the defaults") {
  auto r = run("config");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["newton_tol"] == 1e-11);
  CHECK(j["seed"] == 0);
}

TEST_CASE("oracle fixture specs analyze cleanly") {
  std::ifstream f(std::string(FIXTURE_DIR) + "/oracle_components.json");
  auto fx = nlohmann::json::parse(f);
  for (auto& [name, entry] : fx.items()) {
    nlohmann::json spec = {{"theta", entry["theta"]}, {"zeros", entry["zeros"]}};
    auto path = write_spec(name + ".json", spec.dump());
    auto r = run("analyze " + path);
    CHECK_MESSAGE(r.code == 0, name);
  }
}
