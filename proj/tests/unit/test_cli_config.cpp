#include <gtest/gtest.h>

#include "qplab/error.hpp"
#include "qplab_cli/config.hpp"
#include "qplab_cli/run.hpp"

using namespace qplab::cli;

namespace {

std::string error_path(const std::string& text, const std::string& command) {
  try {
    parse_config_text(text, command);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

}  // namespace

TEST(CliConfig, DefaultsAreResolved) {
  const auto c = parse_config_text("{}", "profile");
  EXPECT_EQ(c.command, "profile");
  EXPECT_EQ(c.potential.family, "amo");
  EXPECT_EQ(c.n, 10000);
  EXPECT_EQ(c.phases, 32u);
  EXPECT_EQ(c.phase_offset(), 0.0);
  const auto j = c.resolved();
  EXPECT_EQ(j.at("command"), "profile");
  EXPECT_TRUE(j.contains("potential"));
  EXPECT_TRUE(j.contains("frequency"));
}

TEST(CliConfig, UnknownKeyReportsPath) {
  EXPECT_EQ(error_path(R"({"potential": {"family": "amo", "lamda": 2}})", "profile"), "$.potential.lamda");
  EXPECT_EQ(error_path(R"({"bogus": 1})", "profile"), "$.bogus");
}

TEST(CliConfig, EpsGridBeyondStripIsRejected) {
  try {
    parse_config_text(R"({"potential": {"family": "amo", "strip_width": 0.5},
                          "eps_grid": [0, 0.1, 0.2, 0.3, 0.35, 0.4, 0.45, 0.6]})",
                      "profile");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("strip_width"), std::string::npos);
  }
}

TEST(CliConfig, RangeChecks) {
  EXPECT_NE(error_path(R"({"n": 0})", "profile"), "");
  EXPECT_NE(error_path(R"({"frequency": {"kind": "rational", "p": 2, "q": 4}})", "butterfly"), "");
  EXPECT_NE(error_path(R"({"frequency": {"kind": "liouville", "terms": 20}})", "cohomology"), "");
  EXPECT_NE(error_path(R"({"command": "spectrum"})", "profile"), "");
  EXPECT_THROW(parse_config_text("{not json", "profile"), ConfigError);
}

TEST(CliConfig, SeedDeterminesPhaseOffset) {
  const auto a = parse_config_text(R"({"seed": 7})", "profile");
  const auto b = parse_config_text(R"({"seed": 7})", "profile");
  const auto c = parse_config_text(R"({"seed": 8})", "profile");
  EXPECT_EQ(a.phase_offset(), b.phase_offset());
  EXPECT_NE(a.phase_offset(), c.phase_offset());
  EXPECT_GE(a.phase_offset(), 0.0);
  EXPECT_LT(a.phase_offset(), 1.0 / static_cast<double>(a.phases));
}

TEST(CliConfig, ExitCodeMapping) {
  EXPECT_EQ(exit_code_for(ConfigError("$.x", "bad")), kExitConfig);
  EXPECT_EQ(exit_code_for(qplab::Error(qplab::ErrorKind::Convergence, "x")), kExitNumerical);
  EXPECT_EQ(exit_code_for(qplab::Error(qplab::ErrorKind::Conditioning, "x")), kExitNumerical);
  EXPECT_EQ(exit_code_for(qplab::Error(qplab::ErrorKind::Domain, "x")), kExitConfig);
}
