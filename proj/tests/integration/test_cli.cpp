#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qplab_it_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& command, const std::string& config, const fs::path& dir, int threads = 1) {
  const fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << config;
  const std::string cmd = std::string(QPLAB_BIN) + " " + command + " --config " + cfg.string() + " --out " +
                          (dir / "out").string() + " --threads " + std::to_string(threads) + " > " +
                          (dir / "log.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Cli, ResolvedConfigCarriesVersion) {
  const auto dir = scratch("version");
  ASSERT_EQ(run_cli("classify", R"({"n": 1500, "phases": 4, "energies": [0.0, 0.5]})", dir), 0);
  const auto j = nlohmann::json::parse(slurp(dir / "out" / "resolved_config.json"));
  EXPECT_EQ(j.at("qplab_version"), QPLAB_VERSION);
  EXPECT_EQ(j.at("n"), 1500);
  EXPECT_EQ(read_csv(dir / "out" / "classify.csv").size(), 3u);
}

TEST(Cli, ConfigErrorsExitTwo) {
  const auto dir = scratch("bad");
  EXPECT_EQ(run_cli("profile", R"({"potential": {"family": "amo", "lamda": 2}})", dir), 2);
  EXPECT_NE(slurp(dir / "log.txt").find("$.potential.lamda"), std::string::npos);
  EXPECT_EQ(run_cli("profile", "{broken", dir), 2);
}

TEST(Cli, NumericalFailureExitsThree) {
  // A coupling at the edge of the double range overflows the transfer matrices.
  const auto dir = scratch("numerical");
  EXPECT_EQ(run_cli("profile", R"({"potential": {"family": "amo", "lambda": 1e308}, "n": 200,
                                    "phases": 2, "energies": [0.0]})",
                    dir),
            3);
  EXPECT_NE(slurp(dir / "log.txt").find("numerical-quality"), std::string::npos);
}

TEST(Cli, FreeSpectrumHasNoGaps) {
  const auto dir = scratch("free");
  ASSERT_EQ(run_cli("spectrum", R"({"potential": {"family": "free"}, "N": 300, "phases": 4})", dir), 0);
  EXPECT_EQ(read_csv(dir / "out" / "spectrum_gaps.csv").size(), 1u);
  EXPECT_GT(read_csv(dir / "out" / "spectrum_points.csv").size(), 300u);
}

TEST(Cli, ButterflyHasQBandsPerFrequency) {
  const auto dir = scratch("butterfly");
  ASSERT_EQ(run_cli("butterfly", R"({"q_max": 7})", dir), 0);
  const auto rows = read_csv(dir / "out" / "butterfly.csv");
  std::map<std::pair<std::string, std::string>, int> count;
  for (std::size_t i = 1; i < rows.size(); ++i) count[{rows[i][0], rows[i][1]}]++;
  EXPECT_EQ(count.size(), 18u);  // 0/1 and the 17 coprime p/q with 1 <= p < q <= 7
  for (const auto& [pq, c] : count) EXPECT_EQ(c, std::stoi(pq.second));
}

TEST(Cli, OutputIndependentOfThreadCount) {
  const std::string cfg = R"({"potential": {"family": "amo", "lambda": 2}, "n": 2000, "phases": 8,
                              "energy_count": 6, "seed": 3})";
  for (const std::string cmd : {"classify", "dual", "profile"}) {
    const auto a = scratch(cmd + "_1"), b = scratch(cmd + "_4");
    ASSERT_EQ(run_cli(cmd, cfg, a, 1), 0) << cmd;
    ASSERT_EQ(run_cli(cmd, cfg, b, 4), 0) << cmd;
    EXPECT_EQ(slurp(a / "out" / (cmd + ".csv")), slurp(b / "out" / (cmd + ".csv"))) << cmd;
  }
}
